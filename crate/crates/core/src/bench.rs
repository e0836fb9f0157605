//! Measurement and analysis harness.
//!
//! Speeds are in millions of integers per second (mis) over the whole
//! pipeline, differential coding included. Compressed sizes come from the
//! serialized container, so bits/int counts every header and descriptor.

use std::collections::BTreeMap;
use std::hint::black_box;
use std::io::{Read, Write};
use std::time::{Duration, Instant};

use crate::codec::container::container_size;
use crate::codec::{decode_array_into, encode_array, Chunk, Codec, Format};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub codec: String,
    pub dataset: String,
    /// Arrays in this record have lengths in `[2^K, 2^(K+1))`.
    pub length_bucket: u32,
    pub bits_per_int: f64,
    pub encode_mis: f64,
    pub decode_mis: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct MeasureConfig {
    /// Each run repeats the workload until at least this much time passed.
    pub min_duration: Duration,
    /// The best of this many runs is reported.
    pub runs: usize,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            min_duration: Duration::from_millis(500),
            runs: 3,
        }
    }
}

/// `floor(log2(n))`; `n` must be positive.
pub fn length_bucket(n: usize) -> u32 {
    assert!(n > 0, "empty arrays have no length bucket");
    n.ilog2()
}

/// Encodes every array with `codec`, checks that it decodes back, and
/// returns the encoded arrays together with bits/int of the container.
pub fn encode_checked(codec: &Codec, arrays: &[Vec<u32>]) -> Result<(Vec<Vec<Chunk>>, f64)> {
    let total: usize = arrays.iter().map(Vec::len).sum();
    if total == 0 {
        return Err(Error::NothingToMeasure);
    }
    let encoded = arrays
        .iter()
        .map(|a| encode_array(codec, a))
        .collect::<Result<Vec<_>>>()?;
    let mut buf = Vec::new();
    for (a, chunks) in arrays.iter().zip(&encoded) {
        decode_array_into(codec, chunks, &mut buf)?;
        verify(codec, a, &buf)?;
    }
    let bytes = container_size(Format::Codec(*codec), &encoded);
    Ok((encoded, 8.0 * bytes as f64 / total as f64))
}

/// bits/int of `codec` on `arrays`.
pub fn bits_per_int(codec: &Codec, arrays: &[Vec<u32>]) -> Result<f64> {
    encode_checked(codec, arrays).map(|(_, bits)| bits)
}

fn verify(codec: &Codec, expect: &[u32], got: &[u32]) -> Result<()> {
    if expect != got {
        return Err(Error::corrupt(format!(
            "{codec} did not reproduce its input"
        )));
    }
    Ok(())
}

/// Times encoding and decoding of `arrays` as one workload. All arrays are
/// reported under the length bucket of their mean length; use
/// [`measure_by_bucket`] to split by length first.
pub fn measure(
    codec: &Codec,
    dataset: &str,
    arrays: &[Vec<u32>],
    config: &MeasureConfig,
) -> Result<BenchRecord> {
    let (encoded, bits) = encode_checked(codec, arrays)?;
    let total: usize = arrays.iter().map(Vec::len).sum();
    let nonempty = arrays.iter().filter(|a| !a.is_empty()).count();

    let mut last = Vec::with_capacity(arrays.len());
    let encode_mis = best_rate(
        config,
        total,
        &mut last,
        |last| {
            last.clear();
            for a in arrays {
                last.push(black_box(encode_array(codec, a)?));
            }
            Ok(())
        },
        |last| {
            let mut buf = Vec::new();
            for (a, chunks) in arrays.iter().zip(last) {
                decode_array_into(codec, chunks, &mut buf)?;
                verify(codec, a, &buf)?;
            }
            Ok(())
        },
    )?;

    let mut outputs = vec![Vec::new(); arrays.len()];
    let decode_mis = best_rate(
        config,
        total,
        &mut outputs,
        |outputs| {
            for (chunks, out) in encoded.iter().zip(outputs.iter_mut()) {
                decode_array_into(codec, chunks, out)?;
                black_box(&out);
            }
            Ok(())
        },
        |outputs| {
            for (a, out) in arrays.iter().zip(outputs) {
                verify(codec, a, out)?;
            }
            Ok(())
        },
    )?;

    Ok(BenchRecord {
        codec: codec.name(),
        dataset: dataset.to_owned(),
        length_bucket: length_bucket(total / nonempty),
        bits_per_int: bits,
        encode_mis,
        decode_mis,
    })
}

/// Groups arrays by length bucket and measures each group. Empty arrays are
/// skipped.
pub fn measure_by_bucket(
    codec: &Codec,
    dataset: &str,
    arrays: &[Vec<u32>],
    config: &MeasureConfig,
) -> Result<Vec<BenchRecord>> {
    let mut groups: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for a in arrays.iter().filter(|a| !a.is_empty()) {
        groups
            .entry(length_bucket(a.len()))
            .or_default()
            .push(a.clone());
    }
    if groups.is_empty() {
        return Err(Error::NothingToMeasure);
    }
    groups
        .values()
        .map(|group| measure(codec, dataset, group, config))
        .collect()
}

fn best_rate<S>(
    config: &MeasureConfig,
    integers: usize,
    state: &mut S,
    mut work: impl FnMut(&mut S) -> Result<()>,
    mut check: impl FnMut(&S) -> Result<()>,
) -> Result<f64> {
    work(state)?;
    check(state)?;
    let mut best = 0f64;
    for _ in 0..config.runs.max(1) {
        let start = Instant::now();
        let mut iterations = 0u64;
        let elapsed = loop {
            work(state)?;
            iterations += 1;
            let e = start.elapsed();
            if e >= config.min_duration {
                break e;
            }
        };
        check(state)?;
        let rate = integers as f64 * iterations as f64 / elapsed.as_secs_f64() / 1e6;
        best = best.max(rate);
    }
    Ok(best)
}

/// Shannon entropy in bits/int of the scalar deltas of all arrays taken
/// together (the first value of an array counts as its own delta).
pub fn entropy_of_deltas(arrays: &[Vec<u32>]) -> Result<f64> {
    let mut deltas: Vec<u32> = Vec::with_capacity(arrays.iter().map(Vec::len).sum());
    for a in arrays {
        let mut prev = 0u32;
        for &v in a {
            deltas.push(v.wrapping_sub(prev));
            prev = v;
        }
    }
    if deltas.is_empty() {
        return Err(Error::NothingToMeasure);
    }
    deltas.sort_unstable();
    let total = deltas.len() as f64;
    let mut h = 0.0;
    let mut i = 0;
    while i < deltas.len() {
        let j = i + deltas[i..].partition_point(|&d| d == deltas[i]);
        let p = (j - i) as f64 / total;
        h -= p * p.log2();
        i = j;
    }
    Ok(h.max(0.0))
}

/// Lower bound on bits/int for any encoding of `n` distinct sorted 32-bit
/// integers, and the worst-case bits/int of binary packing with blocks of
/// `block` integers and one width byte per block.
pub fn theoretic_bounds(n: u64, block: u32) -> Result<(f64, f64)> {
    if n == 0 || n > 1 << 32 {
        return Err(Error::InvalidArgument(format!(
            "array length {n} outside [1, 2^32]"
        )));
    }
    if block == 0 {
        return Err(Error::InvalidArgument("block size must be positive".into()));
    }
    let limit = 32.0 - (n as f64).log2();
    let b = block as f64;
    Ok((limit, 8.0 / b + 1.0 + b.log2() + limit))
}

/// Non-negative weights per length bucket, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: BTreeMap<u32, f64>,
}

impl WeightVector {
    pub fn new(weights: BTreeMap<u32, f64>) -> Result<Self> {
        if let Some((k, w)) = weights.iter().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "bad weight {w} for bucket {k}"
            )));
        }
        let sum: f64 = weights.values().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(WeightVector { weights })
    }

    /// Reads `bucket,weight` rows. A header row is allowed.
    pub fn from_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(source);
        let mut weights = BTreeMap::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            let (Some(bucket), Some(weight)) = (record.get(0), record.get(1)) else {
                return Err(Error::InvalidArgument(format!(
                    "weight row {} needs two fields",
                    row + 1
                )));
            };
            match (bucket.parse::<u32>(), weight.parse::<f64>()) {
                (Ok(k), Ok(w)) => {
                    if weights.insert(k, w).is_some() {
                        return Err(Error::InvalidArgument(format!("bucket {k} listed twice")));
                    }
                }
                _ if row == 0 => continue,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "cannot parse weight row {}: {bucket},{weight}",
                        row + 1
                    )))
                }
            }
        }
        WeightVector::new(weights)
    }

    pub fn get(&self, bucket: u32) -> Option<f64> {
        self.weights.get(&bucket).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.weights.iter().map(|(&k, &w)| (k, w))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub codec: String,
    pub bits_per_int: f64,
    pub encode_mis: f64,
    pub decode_mis: f64,
}

/// Averages records per codec. Records sharing a codec and bucket are first
/// averaged together. Without weights every bucket counts equally; with
/// weights each codec must have a record for every weighted bucket.
pub fn aggregate(records: &[BenchRecord], weights: Option<&WeightVector>) -> Result<Vec<Summary>> {
    let mut cells: BTreeMap<&str, BTreeMap<u32, ([f64; 3], usize)>> = BTreeMap::new();
    for r in records {
        let cell = cells
            .entry(&r.codec)
            .or_default()
            .entry(r.length_bucket)
            .or_insert(([0.0; 3], 0));
        cell.0[0] += r.bits_per_int;
        cell.0[1] += r.encode_mis;
        cell.0[2] += r.decode_mis;
        cell.1 += 1;
    }
    let mut out = Vec::with_capacity(cells.len());
    for (codec, buckets) in cells {
        let mean = |k: u32| buckets.get(&k).map(|(s, c)| s.map(|x| x / *c as f64));
        let mut acc = [0.0; 3];
        match weights {
            None => {
                for &k in buckets.keys() {
                    let m = mean(k).unwrap();
                    for i in 0..3 {
                        acc[i] += m[i] / buckets.len() as f64;
                    }
                }
            }
            Some(w) => {
                for (k, weight) in w.iter() {
                    let m = mean(k).ok_or(Error::MissingBucket(k))?;
                    for i in 0..3 {
                        acc[i] += weight * m[i];
                    }
                }
            }
        }
        out.push(Summary {
            codec: codec.to_owned(),
            bits_per_int: acc[0],
            encode_mis: acc[1],
            decode_mis: acc[2],
        });
    }
    Ok(out)
}

/// Writes records as CSV, ordered by codec, then bucket, then dataset.
pub fn emit_csv<W: Write>(records: &[BenchRecord], sink: W) -> Result<()> {
    let mut sorted: Vec<&BenchRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.codec, a.length_bucket, &a.dataset).cmp(&(&b.codec, b.length_bucket, &b.dataset))
    });
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record([
        "codec",
        "dataset",
        "bucket",
        "bits_per_int",
        "encode_mis",
        "decode_mis",
    ])?;
    for r in sorted {
        writer.write_record([
            r.codec.clone(),
            r.dataset.clone(),
            r.length_bucket.to_string(),
            sig4(r.bits_per_int),
            sig4(r.encode_mis),
            sig4(r.decode_mis),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Formats `x` rounded to four significant digits, without exponent.
pub fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 3 - magnitude;
    if decimals >= 0 {
        let s = format!("{:.*}", decimals as usize, x);
        // rounding can carry into a new digit (9.9996 -> 10.000)
        let rounded: f64 = s.parse().unwrap();
        if rounded.abs().log10().floor() as i32 > magnitude && decimals > 0 {
            return format!("{:.*}", decimals as usize - 1, x);
        }
        s
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (x / scale).round() * scale)
    }
}
