use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use intcodec_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(intcodec_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn new_codec(name: &str) -> *mut IntcodecCodec {
    let name = CString::new(name).unwrap();
    let mut codec = ptr::null_mut();
    let status = unsafe { intcodec_codec_new(name.as_ptr(), &mut codec) };
    assert_eq!(status, IntcodecStatus::Ok, "{}", last_error());
    codec
}

fn roundtrip(name: &str, values: &[u32]) {
    unsafe {
        let codec = new_codec(name);
        let mut buffer = ptr::null_mut();
        assert_eq!(
            intcodec_encode(codec, values.as_ptr(), values.len(), &mut buffer),
            IntcodecStatus::Ok
        );
        let mut arrays = ptr::null_mut();
        let status = intcodec_decode(
            intcodec_buffer_data(buffer),
            intcodec_buffer_len(buffer),
            &mut arrays,
        );
        assert_eq!(status, IntcodecStatus::Ok, "{}", last_error());
        assert_eq!(intcodec_arrays_count(arrays), 1);
        assert_eq!(
            CStr::from_ptr(intcodec_arrays_codec(arrays))
                .to_str()
                .unwrap(),
            name
        );

        let mut data = ptr::null();
        let mut len = 0;
        assert_eq!(
            intcodec_arrays_get(arrays, 0, &mut data, &mut len),
            IntcodecStatus::Ok
        );
        let decoded = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(data, len)
        };
        assert_eq!(decoded, values);

        intcodec_arrays_free(arrays);
        intcodec_buffer_free(buffer);
        intcodec_codec_free(codec);
    }
}

#[test]
fn every_codec_through_the_c_api() {
    let values: Vec<u32> = (0..70_000u32).map(|i| i * 13 + (i % 7) * 2).collect();
    assert_eq!(intcodec_codec_count(), 18);
    for i in 0..intcodec_codec_count() {
        let name = unsafe { CStr::from_ptr(intcodec_codec_name_at(i)) }
            .to_str()
            .unwrap()
            .to_owned();
        roundtrip(&name, &values);
        roundtrip(&name, &[]);
    }
    assert!(intcodec_codec_name_at(18).is_null());
}

#[test]
fn codec_metadata() {
    unsafe {
        let codec = new_codec("simdbp128-s4");
        assert_eq!(
            CStr::from_ptr(intcodec_codec_name(codec)).to_str().unwrap(),
            "simdbp128-s4"
        );
        assert_eq!(intcodec_codec_block_size(codec), 128);
        intcodec_codec_free(codec);
        assert!(intcodec_codec_name(ptr::null()).is_null());
        intcodec_codec_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut codec = ptr::null_mut();
        let bad = CString::new("zstd").unwrap();
        assert_eq!(
            intcodec_codec_new(bad.as_ptr(), &mut codec),
            IntcodecStatus::UnknownCodec
        );
        assert!(codec.is_null());
        assert!(last_error().contains("zstd"));
        assert_eq!(
            intcodec_codec_new(ptr::null(), &mut codec),
            IntcodecStatus::NullPointer
        );

        let codec = new_codec("bp32");
        let mut buffer = ptr::null_mut();
        let unsorted = [3u32, 2, 1];
        assert_eq!(
            intcodec_encode(codec, unsorted.as_ptr(), 3, &mut buffer),
            IntcodecStatus::NotSorted
        );
        assert!(buffer.is_null());
        assert_eq!(
            intcodec_encode(codec, ptr::null(), 3, &mut buffer),
            IntcodecStatus::NullPointer
        );
        intcodec_codec_free(codec);

        let mut arrays = ptr::null_mut();
        let junk = b"definitely not a container";
        assert_eq!(
            intcodec_decode(junk.as_ptr(), junk.len(), &mut arrays),
            IntcodecStatus::NotAContainer
        );
        assert_eq!(last_error(), "not a container");

        let codec = new_codec("fastpfor");
        let values: Vec<u32> = (0..1000).collect();
        intcodec_encode(codec, values.as_ptr(), values.len(), &mut buffer);
        let len = intcodec_buffer_len(buffer);
        let status = intcodec_decode(intcodec_buffer_data(buffer), len - 8, &mut arrays);
        assert_eq!(status, IntcodecStatus::Truncated);

        intcodec_decode(intcodec_buffer_data(buffer), len, &mut arrays);
        let (mut data, mut n) = (ptr::null(), 0);
        assert_eq!(
            intcodec_arrays_get(arrays, 1, &mut data, &mut n),
            IntcodecStatus::InvalidArgument
        );
        intcodec_arrays_free(arrays);
        intcodec_buffer_free(buffer);
        intcodec_codec_free(codec);
    }
}

#[test]
fn header_is_valid_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/intcodec.h")).unwrap();
    for symbol in [
        "intcodec_codec_new",
        "intcodec_encode",
        "intcodec_decode",
        "intcodec_arrays_get",
        "INTCODEC_STATUS_NOT_SORTED",
    ] {
        assert!(header.contains(symbol), "{symbol} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(format!("{dir}/include/intcodec.h"))
        .status()
    else {
        eprintln!("no C compiler found, syntax check skipped");
        return;
    };
    assert!(status.success());
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = env!("CARGO_MANIFEST_DIR");
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libintcodec_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, link check skipped", lib.display());
        return;
    }
    let out = profile_dir.join("intcodec-c-roundtrip");
    let Ok(status) = Command::new("cc")
        .arg(format!("-I{dir}/include"))
        .arg(format!("{dir}/tests/c/roundtrip.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
    else {
        eprintln!("no C compiler found, link check skipped");
        return;
    };
    assert!(status.success(), "C example failed to build");
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).lines().count(), 18);
}
