//! C interface to `intcodec`.
//!
//! Every fallible function returns an [`IntcodecStatus`]; on failure a
//! message is available from [`intcodec_last_error`] on the same thread.
//! Objects are handed out as opaque pointers and must be released with their
//! matching `_free` function.
//!
//! ```c
//! IntcodecCodec *codec;
//! IntcodecBuffer *packed;
//! IntcodecArrays *arrays;
//! intcodec_codec_new("simdfastpfor", &codec);
//! intcodec_encode(codec, values, n, &packed);
//! intcodec_decode(intcodec_buffer_data(packed), intcodec_buffer_len(packed), &arrays);
//! ```

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use intcodec::{read_arrays, write_arrays, Codec, Error, Format};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntcodecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownCodec = 3,
    NotSorted = 4,
    Corrupt = 5,
    Truncated = 6,
    NotAContainer = 7,
    Io = 8,
    Panic = 9,
}

/// A codec selected by name, e.g. `"bp32"` or `"simdfastpfor-s4"`.
pub struct IntcodecCodec {
    codec: Codec,
    name: CString,
}

/// Bytes of an encoded container.
pub struct IntcodecBuffer {
    bytes: Vec<u8>,
}

/// Arrays decoded from a container.
pub struct IntcodecArrays {
    arrays: Vec<Vec<u32>>,
    format: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn status_of(err: &Error) -> IntcodecStatus {
    match err {
        Error::ValueTooWide { .. } | Error::InvalidArgument(_) | Error::NothingToMeasure => {
            IntcodecStatus::InvalidArgument
        }
        Error::MissingBucket(_) => IntcodecStatus::InvalidArgument,
        Error::NotSorted { .. } => IntcodecStatus::NotSorted,
        Error::Truncated => IntcodecStatus::Truncated,
        Error::Corrupt(_) => IntcodecStatus::Corrupt,
        Error::NotAContainer => IntcodecStatus::NotAContainer,
        Error::UnknownCodec(_) => IntcodecStatus::UnknownCodec,
        Error::Io(_) | Error::Csv(_) => IntcodecStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), IntcodecStatus>) -> IntcodecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IntcodecStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            IntcodecStatus::Panic
        }
    }
}

fn fail(err: Error) -> IntcodecStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn null(what: &str) -> IntcodecStatus {
    set_error(format!("{what} is null"));
    IntcodecStatus::NullPointer
}

/// Message describing the last failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn intcodec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Number of available codec names.
#[no_mangle]
pub extern "C" fn intcodec_codec_count() -> usize {
    CODEC_NAMES.len()
}

static CODEC_NAMES: [&CStr; 18] = [
    c"vbyte",
    c"vbyte-s4",
    c"g8iu",
    c"g8iu-s4",
    c"simple8b",
    c"simple8b-s4",
    c"bp32",
    c"bp32-s4",
    c"simdbp128",
    c"simdbp128-s4",
    c"pfor",
    c"pfor-s4",
    c"simplepfor",
    c"simplepfor-s4",
    c"fastpfor",
    c"fastpfor-s4",
    c"simdfastpfor",
    c"simdfastpfor-s4",
];

/// Name of codec `index`, or null when out of range. The string is static.
#[no_mangle]
pub extern "C" fn intcodec_codec_name_at(index: usize) -> *const c_char {
    CODEC_NAMES.get(index).map_or(ptr::null(), |n| n.as_ptr())
}

/// Looks up a codec by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn intcodec_codec_new(
    name: *const c_char,
    out: *mut *mut IntcodecCodec,
) -> IntcodecStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let name = CStr::from_ptr(name);
        let text = name
            .to_str()
            .map_err(|_| fail(Error::UnknownCodec(name.to_string_lossy().into_owned())))?;
        let codec: Codec = text.parse().map_err(fail)?;
        let name = CString::new(codec.name()).expect("codec names have no NUL");
        *out = Box::into_raw(Box::new(IntcodecCodec { codec, name }));
        Ok(())
    })
}

/// # Safety
/// `codec` must come from [`intcodec_codec_new`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn intcodec_codec_free(codec: *mut IntcodecCodec) {
    if !codec.is_null() {
        drop(Box::from_raw(codec));
    }
}

/// Canonical name of `codec`; valid as long as the codec.
///
/// # Safety
/// `codec` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn intcodec_codec_name(codec: *const IntcodecCodec) -> *const c_char {
    codec.as_ref().map_or(ptr::null(), |c| c.name.as_ptr())
}

/// Block size that the codec's core scheme works on; shorter tails go
/// through Variable Byte.
///
/// # Safety
/// `codec` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn intcodec_codec_block_size(codec: *const IntcodecCodec) -> usize {
    codec.as_ref().map_or(0, |c| c.codec.block_multiple())
}

unsafe fn input<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], IntcodecStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(data, len))
}

/// Encodes one sorted (non-decreasing) array into a container holding a
/// single array.
///
/// # Safety
/// `values` must point to `len` readable integers (it may be null when `len`
/// is 0); `codec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn intcodec_encode(
    codec: *const IntcodecCodec,
    values: *const u32,
    len: usize,
    out: *mut *mut IntcodecBuffer,
) -> IntcodecStatus {
    guard(|| {
        let codec = codec.as_ref().ok_or_else(|| null("codec"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let values = input(values, len, "values")?;
        let mut bytes = Vec::new();
        write_arrays(Format::Codec(codec.codec), &[values.to_vec()], &mut bytes).map_err(fail)?;
        *out = Box::into_raw(Box::new(IntcodecBuffer { bytes }));
        Ok(())
    })
}

/// # Safety
/// `buffer` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn intcodec_buffer_data(buffer: *const IntcodecBuffer) -> *const u8 {
    buffer.as_ref().map_or(ptr::null(), |b| b.bytes.as_ptr())
}

/// # Safety
/// `buffer` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn intcodec_buffer_len(buffer: *const IntcodecBuffer) -> usize {
    buffer.as_ref().map_or(0, |b| b.bytes.len())
}

/// # Safety
/// `buffer` must come from [`intcodec_encode`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn intcodec_buffer_free(buffer: *mut IntcodecBuffer) {
    if !buffer.is_null() {
        drop(Box::from_raw(buffer));
    }
}

/// Decodes every array of a container. The codec is read from the container.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn intcodec_decode(
    data: *const u8,
    len: usize,
    out: *mut *mut IntcodecArrays,
) -> IntcodecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let data = input(data, len, "data")?;
        let (format, arrays) = read_arrays(data).map_err(fail)?;
        let format = CString::new(format.name()).expect("codec names have no NUL");
        *out = Box::into_raw(Box::new(IntcodecArrays { arrays, format }));
        Ok(())
    })
}

/// # Safety
/// `arrays` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn intcodec_arrays_count(arrays: *const IntcodecArrays) -> usize {
    arrays.as_ref().map_or(0, |a| a.arrays.len())
}

/// Codec name stored in the decoded container.
///
/// # Safety
/// `arrays` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn intcodec_arrays_codec(arrays: *const IntcodecArrays) -> *const c_char {
    arrays.as_ref().map_or(ptr::null(), |a| a.format.as_ptr())
}

/// Borrows array `index`. The values stay valid until the handle is freed.
///
/// # Safety
/// `arrays` must be a live handle; `values` and `len` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn intcodec_arrays_get(
    arrays: *const IntcodecArrays,
    index: usize,
    values: *mut *const u32,
    len: *mut usize,
) -> IntcodecStatus {
    guard(|| {
        let arrays = arrays.as_ref().ok_or_else(|| null("arrays"))?;
        if values.is_null() || len.is_null() {
            return Err(null("output pointer"));
        }
        let array = arrays.arrays.get(index).ok_or_else(|| {
            fail(Error::InvalidArgument(format!(
                "array index {index} out of range ({} arrays)",
                arrays.arrays.len()
            )))
        })?;
        *values = array.as_ptr();
        *len = array.len();
        Ok(())
    })
}

/// # Safety
/// `arrays` must come from [`intcodec_decode`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn intcodec_arrays_free(arrays: *mut IntcodecArrays) {
    if !arrays.is_null() {
        drop(Box::from_raw(arrays));
    }
}
