//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use intcodec::basic::{g8iu_encode, simple8b_encode};
use intcodec::bench::{self, MeasureConfig};
use intcodec::binpack::{bp32_encode, simdbp128_encode};
use intcodec::bitpack::{pack_scalar32, pack_vertical128, unpack_scalar32, unpack_vertical128};
use intcodec::datagen::{DatasetSpec, Model, PAPER_RANGE};
use intcodec::delta::delta_encode_scalar;
use intcodec::patched::{
    choose_width_fastpfor, fastpfor_cost, pfor_encode_with_width, BlockMeta, Histogram33,
};
use intcodec::{decode_array, encode_array, BitWidth, Codec};

struct Suite {
    failed: Vec<u32>,
}

impl Suite {
    fn verdict(&mut self, id: u32, title: &str, pass: bool, summary: String) {
        println!(
            "{} criterion {id}: {title}: {summary}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failed.push(id);
        }
    }
}

fn detail(line: impl AsRef<str>) {
    println!("    {}", line.as_ref());
}

fn codec(name: &str) -> Codec {
    name.parse().expect("known codec")
}

fn sorted_random(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(n);
    let style = rng.gen_range(0..5);
    let scale: u32 = 1 << rng.gen_range(0..20);
    let start_bits = rng.gen_range(0..32);
    let mut x: u32 = rng.gen_range(0..1 << start_bits);
    for _ in 0..n {
        v.push(x);
        let step = match style {
            0 => rng.gen_range(0..=scale),
            1 => rng.gen_range(0..2),
            2 => {
                if rng.gen_ratio(1, 50) {
                    rng.gen::<u32>() >> rng.gen_range(0..32)
                } else {
                    rng.gen_range(0..8)
                }
            }
            3 => rng.gen::<u32>() >> rng.gen_range(0..32),
            _ => (rng.gen::<f64>().ln().abs() * scale as f64) as u32,
        };
        x = x.saturating_add(step);
    }
    v
}

fn adversarial() -> Vec<(String, Vec<u32>)> {
    let mut out = Vec::new();
    for n in [
        0usize,
        1,
        2,
        127,
        128,
        129,
        (1 << 16) - 1,
        1 << 16,
        (1 << 16) + 1,
    ] {
        out.push((
            format!("consecutive n={n}"),
            (0..n as u32).map(|i| i + 5).collect(),
        ));
    }
    let mut outlier: Vec<u32> = (0..1000u32).map(|i| i * 3).collect();
    for v in &mut outlier[500..] {
        *v += 1 << 31;
    }
    out.push(("single 2^31 outlier".into(), outlier));
    out.push(("zero deltas".into(), vec![77; 3000]));
    out.push(("all zero".into(), vec![0; 70_000]));
    let mut alt = Vec::new();
    let mut x = 0u32;
    for i in 0..2000u32 {
        alt.push(x);
        x += if i % 2 == 0 { 1 } else { 1 << 20 };
    }
    out.push(("alternating tiny/huge".into(), alt));
    out.push(("full range endpoints".into(), vec![0, u32::MAX]));
    out.push((
        "top of range".into(),
        (0..300u32).map(|i| u32::MAX - 299 + i).collect(),
    ));
    out
}

fn criterion1(suite: &mut Suite) {
    let start = Instant::now();
    let codecs = Codec::all();
    let mut failures = Vec::new();
    let mut check = |label: &str, values: &[u32]| {
        for c in &codecs {
            let ok = encode_array(c, values)
                .and_then(|chunks| decode_array(c, &chunks))
                .map(|back| back == values)
                .unwrap_or(false);
            if !ok {
                failures.push(format!("{c} on {label}"));
            }
        }
    };
    for (label, values) in adversarial() {
        check(&label, &values);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..10_000 {
        let n = if i % 500 == 0 {
            rng.gen_range(0..300_000)
        } else {
            rng.gen_range(0..3000)
        };
        let v = sorted_random(&mut rng, n);
        check(&format!("random #{i}"), &v);
    }
    let elapsed = start.elapsed();
    for f in failures.iter().take(10) {
        detail(format!("mismatch: {f}"));
    }
    suite.verdict(
        1,
        "roundtrip",
        failures.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "{} codecs, adversarial set + 10^4 random arrays, {} failures, {:.1} s",
            codecs.len(),
            failures.len(),
            elapsed.as_secs_f64()
        ),
    );
}

fn criterion2(suite: &mut Suite) {
    let mut ok = true;
    let mut expect = |what: &str, pass: bool| {
        detail(format!("{} {what}", if pass { "ok  " } else { "FAIL" }));
        ok &= pass;
    };

    let block = [2u32, 2, 1, 2, 38, 2, 1, 3, 2, 32, 2, 52, 2, 3, 3, 1];
    let h = Histogram33::of(&block);
    let costs = [1, 2, 6].map(|b| fastpfor_cost(&h, block.len(), b));
    expect(
        "FastPFOR costs b=1,2,6 are 185,68,96",
        costs == [185, 68, 96],
    );
    expect(
        "FastPFOR picks b=2",
        choose_width_fastpfor(&h, block.len()).b == 2,
    );
    let meta = BlockMeta::for_block(&block);
    expect(
        "FastPFOR byte array [2,6,3,4,9,11]",
        meta.to_bytes() == [2, 6, 3, 4, 9, 11],
    );
    expect(
        "FastPFOR exception highs 9,8,13",
        meta.exception_highs(&block) == [9, 8, 13],
    );

    let mut pblock = vec![2u32, 2, 1, 2, 38, 2, 1, 3, 2, 32, 2, 52];
    pblock.resize(128, 1);
    let b3 = BitWidth::new(3).unwrap();
    let words = pfor_encode_with_width(&pblock, b3).unwrap();
    let slots = unpack_scalar32(&words[2..], b3).unwrap();
    expect("PFOR first exception at 4", words[1] & 0xFFFF == 4);
    expect(
        "PFOR linked offsets 4,1 ending in 0",
        (slots[4], slots[9], slots[11]) == (4, 1, 0),
    );
    expect(
        "PFOR exception table 38,32,52",
        words[words.len() - 4..] == [3, 38, 32, 52],
    );

    let g = g8iu_encode(&[1 << 15, 1 << 23, 1 << 7]);
    expect(
        "varint-G8IU descriptor 0xCD, data 00 80 00 00 80 80",
        g[..7] == [0xCD, 0, 0x80, 0, 0, 0x80, 0x80],
    );

    let s = simple8b_encode(&[0; 240]).unwrap();
    expect("Simple-8b 240 zeros in one selector-0 word", s == [0]);

    suite.verdict(
        2,
        "worked examples",
        ok,
        "FastPFOR, PFOR, varint-G8IU, Simple-8b goldens".into(),
    );
}

const LONG_TARGETS: [(&str, f64); 11] = [
    ("simdbp128", 7.0),
    ("bp32", 6.7),
    ("simple8b", 6.4),
    ("fastpfor", 6.3),
    ("simplepfor", 6.3),
    ("simdfastpfor", 6.4),
    ("pfor", 7.3),
    ("vbyte", 8.0),
    ("g8iu", 9.0),
    ("simdbp128-s4", 8.0),
    ("simdfastpfor-s4", 7.6),
];

fn long_uniform(seed: u64) -> Vec<Vec<u32>> {
    DatasetSpec {
        model: Model::Uniform,
        n: 1 << 25,
        range: PAPER_RANGE,
        count: 1,
        seed,
    }
    .generate()
    .unwrap()
}

fn criterion3_and_7(suite: &mut Suite, seeds: &[Vec<Vec<u32>>]) {
    let mut ok = true;
    let mut measured = Vec::new();
    for &(name, target) in &LONG_TARGETS {
        let c = codec(name);
        let mean = seeds
            .iter()
            .map(|d| bench::bits_per_int(&c, d).unwrap())
            .sum::<f64>()
            / seeds.len() as f64;
        let tol = (0.05 * target).max(0.2);
        let pass = (mean - target).abs() <= tol;
        ok &= pass;
        detail(format!(
            "{} {name:<16} {mean:6.3} bits/int (target {target}, tol {tol:.2})",
            if pass { "ok  " } else { "FAIL" }
        ));
        measured.push((name, mean));
    }
    suite.verdict(
        3,
        "uniform long bits/int",
        ok,
        format!("{} codecs over {} seeds", LONG_TARGETS.len(), seeds.len()),
    );

    let get = |n: &str| measured.iter().find(|(m, _)| *m == n).unwrap().1;
    let mut ok = true;
    for base in ["simdbp128", "simdfastpfor"] {
        let gap = get(&format!("{base}-s4")) - get(base);
        let pass = gap > 0.0 && gap <= 2.0;
        ok &= pass;
        detail(format!(
            "{} {base}: stride-4 costs {gap:+.3} bits/int",
            if pass { "ok  " } else { "FAIL" }
        ));
    }
    suite.verdict(
        7,
        "stride-4 penalty",
        ok,
        "difference within (0, 2] bits/int".into(),
    );
}

fn criterion4(suite: &mut Suite) {
    let spec = DatasetSpec {
        model: Model::Uniform,
        n: 1 << 15,
        range: PAPER_RANGE,
        count: 1 << 10,
        seed: 0,
    };
    let data = spec.generate().unwrap();
    let mut ok = true;
    for (name, target) in [
        ("simdbp128", 17.0),
        ("bp32", 17.0),
        ("simple8b", 18.0),
        ("vbyte", 19.0),
    ] {
        let bits = bench::bits_per_int(&codec(name), &data).unwrap();
        let pass = (bits - target).abs() <= 0.1 * target;
        ok &= pass;
        detail(format!(
            "{} {name:<16} {bits:6.3} bits/int (target {target}, tol 10%)",
            if pass { "ok  " } else { "FAIL" }
        ));
    }
    let base = bench::bits_per_int(&codec("g8iu"), &data).unwrap();
    let s4 = bench::bits_per_int(&codec("g8iu-s4"), &data).unwrap();
    let pass = s4 > base;
    ok &= pass;
    detail(format!(
        "{} g8iu-s4 {s4:.3} > g8iu {base:.3} bits/int",
        if pass { "ok  " } else { "FAIL" }
    ));
    suite.verdict(
        4,
        "uniform short bits/int",
        ok,
        "2^10 arrays of 2^15".into(),
    );
}

fn criterion5(suite: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut worst = [f64::NEG_INFINITY; 2];
    for i in 0..200u64 {
        let n = (2f64.powf(rng.gen_range(10.0..=22.0)) as usize).clamp(1 << 10, 1 << 22);
        let range = rng.gen_range(n as u64..=1 << 32);
        let model = if i % 2 == 0 {
            Model::Uniform
        } else {
            Model::ClusterData
        };
        let mut v = DatasetSpec {
            model,
            n,
            range,
            count: 1,
            seed: 1000 + i,
        }
        .array(0)
        .unwrap();
        delta_encode_scalar(&mut v);
        let core = &v[..n / 128 * 128];
        for (k, (block, words)) in [
            (32u32, bp32_encode(core).unwrap()),
            (128, simdbp128_encode(core).unwrap()),
        ]
        .into_iter()
        .enumerate()
        {
            let bits = 32.0 * words.len() as f64 / core.len() as f64;
            let (_, bound) = bench::theoretic_bounds(n as u64, block).unwrap();
            worst[k] = worst[k].max(bits - bound);
            if bits > bound {
                ok = false;
                detail(format!(
                    "FAIL B={block} n={n} R={range}: {bits:.3} > {bound:.3}"
                ));
            }
        }
    }
    detail(format!(
        "largest bits/int minus bound: B=32 {:.3}, B=128 {:.3}",
        worst[0], worst[1]
    ));

    let ratio = |n: u64, b: u32| {
        let (limit, bound) = bench::theoretic_bounds(n, b).unwrap();
        bound / limit
    };
    // The paper's lengths are sufficient conditions. The ratio reaches 2
    // where log2(2^32/n) equals the overhead 8/B + 1 + log2 B.
    let crossing = |b: u32| {
        let overhead = 8.0 / b as f64 + 1.0 + (b as f64).log2();
        2f64.powf(32.0 - overhead)
    };
    let beyond32 = crossing(32).floor() as u64 + 1;
    let beyond128 = crossing(128).floor() as u64 + 1;
    let thresholds = [
        ("B=32 n=2^25-1".to_string(), ratio((1 << 25) - 1, 32), true),
        ("B=128 n=2^23".to_string(), ratio(1 << 23, 128), true),
        (
            format!(
                "B=32 n={} (2^{:.4}), first length past ratio 2",
                beyond32,
                (beyond32 as f64).log2()
            ),
            ratio(beyond32, 32),
            false,
        ),
        (
            format!(
                "B=128 n={} (2^{:.4}), first length past ratio 2",
                beyond128,
                (beyond128 as f64).log2()
            ),
            ratio(beyond128, 128),
            false,
        ),
        (
            format!("B=32 n={}, last length below ratio 2", beyond32 - 1),
            ratio(beyond32 - 1, 32),
            true,
        ),
        (
            format!("B=128 n={}, last length below ratio 2", beyond128 - 1),
            ratio(beyond128 - 1, 128),
            true,
        ),
    ];
    for (label, r, below) in thresholds {
        let pass = (r < 2.0) == below;
        ok &= pass;
        detail(format!(
            "{} {label}: bound/limit {r:.6} ({} 2)",
            if pass { "ok  " } else { "FAIL" },
            if below { "<" } else { ">=" }
        ));
    }
    suite.verdict(
        5,
        "binary packing bound",
        ok,
        "200 random inputs, n in [2^10, 2^22]".into(),
    );
}

fn criterion6(suite: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for b in 0..=32u32 {
        let width = BitWidth::new(b).unwrap();
        for _ in 0..1000 {
            let mut block = [0u32; 128];
            for v in block.iter_mut() {
                *v = rng.gen::<u32>() & width.max_value();
            }
            let vertical = pack_vertical128(&block, width).unwrap();
            for lane in 0..4 {
                let values: [u32; 32] = std::array::from_fn(|i| block[4 * i + lane]);
                let scalar = pack_scalar32(&values, width).unwrap();
                let lane_words: Vec<u32> =
                    (0..b as usize).map(|i| vertical[4 * i + lane]).collect();
                if scalar != lane_words || unpack_scalar32(&lane_words, width).unwrap() != values {
                    mismatches += 1;
                }
            }
            if unpack_vertical128(&vertical, width).unwrap() != block {
                mismatches += 1;
            }
        }
    }
    detail(format!(
        "vertical vs scalar lanes: {mismatches} mismatches over 33 x 1000 blocks"
    ));
    let pack_ok = mismatches == 0;

    let mut wrong = 0;
    for _ in 0..10_000 {
        let mut counts = [0u32; 33];
        let used = rng.gen_range(1..=33);
        for _ in 0..128 {
            counts[rng.gen_range(0..used)] += 1;
        }
        let h = Histogram33 { counts };
        let maxbits = (0..=32u32).rev().find(|&w| counts[w as usize] > 0).unwrap();
        let mut best = (u64::MAX, 0);
        for b in 0..=maxbits {
            let c: u64 = counts[b as usize + 1..].iter().map(|&x| x as u64).sum();
            let cost = if c == 0 {
                128 * b as u64
            } else {
                128 * b as u64 + c * (8 + maxbits - b) as u64
            };
            if cost < best.0 || (cost == best.0 && b > best.1) {
                best = (cost, b);
            }
        }
        let choice = choose_width_fastpfor(&h, 128);
        if fastpfor_cost(&h, 128, choice.b) != best.0 || choice.b != best.1 {
            wrong += 1;
        }
    }
    detail(format!(
        "choose_width_fastpfor vs brute force: {wrong} mismatches over 10^4 histograms"
    ));
    suite.verdict(
        6,
        "oracle equivalence",
        pack_ok && wrong == 0,
        "bit packing layouts and width choice".into(),
    );
}

fn criterion8(suite: &mut Suite, data: &[Vec<u32>]) {
    let config = MeasureConfig {
        min_duration: Duration::from_millis(200),
        runs: 2,
    };
    let names = [
        "vbyte",
        "g8iu",
        "simple8b",
        "bp32",
        "simdbp128",
        "pfor",
        "fastpfor",
        "simdfastpfor",
    ];
    let mut records = Vec::new();
    let mut plausible = true;
    for name in names {
        match bench::measure(&codec(name), "long-uniform", data, &config) {
            Ok(r) => {
                detail(format!(
                    "{name:<14} encode {:8.1} mis, decode {:8.1} mis",
                    r.encode_mis, r.decode_mis
                ));
                plausible &= r.encode_mis.is_finite() && r.encode_mis > 0.0;
                plausible &= r.decode_mis.is_finite() && r.decode_mis > 0.0;
                records.push(r);
            }
            Err(e) => {
                detail(format!("{name}: measurement failed: {e}"));
                plausible = false;
            }
        }
    }
    let decode = |n: &str| {
        records
            .iter()
            .find(|r| r.codec == n)
            .map_or(f64::NAN, |r| r.decode_mis)
    };
    let vbyte_vs_s8b = decode("vbyte") < decode("simple8b");
    detail(format!(
        "{} vbyte decode slower than simple8b decode",
        if vbyte_vs_s8b { "ok  " } else { "FAIL" }
    ));
    let binpack = decode("bp32").min(decode("simdbp128")) > decode("simple8b");
    detail(format!(
        "{} binary packing decode faster than simple8b (reported)",
        if binpack { "yes " } else { "no  " }
    ));
    let slowest = records
        .iter()
        .all(|r| r.codec == "vbyte" || r.decode_mis > decode("vbyte"));
    detail(format!(
        "{} vbyte decode slowest of all (reported)",
        if slowest { "yes " } else { "no  " }
    ));
    suite.verdict(
        8,
        "speed ordering",
        plausible && vbyte_vs_s8b,
        "correctness-gated timings, vbyte decode < simple8b decode".into(),
    );
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut suite = Suite { failed: Vec::new() };
    criterion1(&mut suite);
    criterion2(&mut suite);
    let seeds: Vec<_> = (0..3).map(long_uniform).collect();
    criterion3_and_7(&mut suite, &seeds);
    criterion4(&mut suite);
    criterion5(&mut suite);
    criterion6(&mut suite);
    criterion8(&mut suite, &seeds[0]);
    println!(
        "acceptance: {} of 8 criteria passed in {:.1} s",
        8 - suite.failed.len(),
        start.elapsed().as_secs_f64()
    );
    if suite.failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
