use intcodec::{
    container_read, decode_array, encode_array, read_arrays, write_arrays, Codec, Error, Format,
};
use proptest::prelude::*;

fn sorted(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    (prop::collection::vec(any::<u32>(), 0..max_len), 0u32..32).prop_map(|(raw, shift)| {
        let mut x = 0u32;
        raw.into_iter()
            .map(|d| {
                x = x.saturating_add(d >> shift);
                x
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_codec_roundtrips(v in sorted(5000)) {
        for codec in Codec::all() {
            let chunks = encode_array(&codec, &v).unwrap();
            prop_assert_eq!(decode_array(&codec, &chunks).unwrap(), v.clone(), "{}", codec);
        }
    }

    #[test]
    fn container_roundtrips(arrays in prop::collection::vec(sorted(700), 0..5), pick in 0usize..18) {
        let codec = Codec::all()[pick];
        for format in [Format::Raw, Format::Codec(codec)] {
            let mut buf = Vec::new();
            write_arrays(format, &arrays, &mut buf).unwrap();
            let (back_format, back) = read_arrays(&buf[..]).unwrap();
            prop_assert_eq!(back_format, format);
            prop_assert_eq!(&back, &arrays);
        }
    }
}

#[test]
fn chunk_boundaries() {
    for n in [65_535usize, 65_536, 65_537, 3 * 65_536 + 128] {
        let v: Vec<u32> = (0..n as u32).map(|i| i / 3 * 7).collect();
        for codec in Codec::all() {
            let chunks = encode_array(&codec, &v).unwrap();
            assert_eq!(chunks.len(), n.div_ceil(65_536));
            assert_eq!(decode_array(&codec, &chunks).unwrap(), v, "{codec} n={n}");
        }
    }
}

#[test]
fn unsorted_input_is_rejected() {
    for codec in Codec::all() {
        let err = encode_array(&codec, &[1, 5, 4]).unwrap_err();
        assert!(
            matches!(err, Error::NotSorted { index: 2 }),
            "{codec}: {err}"
        );
    }
}

#[test]
fn corrupted_payloads_never_panic() {
    let v: Vec<u32> = (0..3000u32).map(|i| i * i / 7).collect();
    for codec in Codec::all() {
        let mut buf = Vec::new();
        write_arrays(Format::Codec(codec), std::slice::from_ref(&v), &mut buf).unwrap();
        let header = 8 + 1 + codec.name().len() + 4 + 8;
        for i in (header..buf.len()).step_by(37) {
            let mut bad = buf.clone();
            bad[i] ^= 0x5A;
            // either an error or some decoded values, but no panic
            let _ = read_arrays(&bad[..]);
        }
        for cut in [header, buf.len() - 3] {
            assert!(container_read(&buf[..cut]).is_err());
        }
    }
}
