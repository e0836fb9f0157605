//! Synthetic sorted arrays.
//!
//! `Uniform` picks `n` distinct integers uniformly from `[0, R)`. `ClusterData`
//! splits the range recursively, sending a random fraction of the points to
//! each half, so that values bunch together and gaps become more predictable.
//! Every array is generated from its own ChaCha stream, so output depends only
//! on the spec.

use std::fmt;
use std::str::FromStr;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default exclusive upper bound of generated values.
pub const PAPER_RANGE: u64 = 1 << 29;

/// Ranges at most this many times denser than the points left in them are
/// filled uniformly instead of being split further.
const CLUSTER_LEAF_RATIO: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Uniform,
    ClusterData,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Uniform => "uniform",
            Model::ClusterData => "cluster",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(Model::Uniform),
            "cluster" | "clusterdata" => Ok(Model::ClusterData),
            other => Err(Error::InvalidArgument(format!(
                "unknown data model {other:?}"
            ))),
        }
    }
}

/// `count` arrays of `n` values in `[0, range)`. Array `i` uses seed
/// `seed + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetSpec {
    pub model: Model,
    pub n: usize,
    pub range: u64,
    pub count: usize,
    pub seed: u64,
}

impl DatasetSpec {
    fn check(&self) -> Result<()> {
        if self.range > 1 << 32 {
            return Err(Error::InvalidArgument(format!(
                "range {} exceeds 2^32",
                self.range
            )));
        }
        if self.n as u64 > self.range {
            return Err(Error::InvalidArgument(format!(
                "cannot draw {} distinct values from a range of {}",
                self.n, self.range
            )));
        }
        Ok(())
    }

    /// Short name used in reports, e.g. `uniform-n32768-x1024`.
    pub fn label(&self) -> String {
        format!("{}-n{}-x{}", self.model, self.n, self.count)
    }

    /// Generates array `index` of the dataset.
    pub fn array(&self, index: usize) -> Result<Vec<u32>> {
        self.check()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(index as u64));
        let mut out = Vec::with_capacity(self.n);
        match self.model {
            Model::Uniform => uniform_into(&mut rng, 0, self.range, self.n, &mut out),
            Model::ClusterData => cluster_into(&mut rng, 0, self.range, self.n, &mut out),
        }
        Ok(out)
    }

    /// Generates all arrays, spreading the work over the available cores.
    pub fn generate(&self) -> Result<Vec<Vec<u32>>> {
        self.check()?;
        let workers = thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(self.count.max(1));
        let mut arrays = vec![Vec::new(); self.count];
        let per = self.count.div_ceil(workers).max(1);
        thread::scope(|s| {
            for (part, slots) in arrays.chunks_mut(per).enumerate() {
                s.spawn(move || {
                    for (k, slot) in slots.iter_mut().enumerate() {
                        *slot = self.array(part * per + k).expect("spec already checked");
                    }
                });
            }
        });
        Ok(arrays)
    }
}

pub fn gen_uniform(spec: &DatasetSpec) -> Result<Vec<Vec<u32>>> {
    DatasetSpec {
        model: Model::Uniform,
        ..*spec
    }
    .generate()
}

pub fn gen_clusterdata(spec: &DatasetSpec) -> Result<Vec<Vec<u32>>> {
    DatasetSpec {
        model: Model::ClusterData,
        ..*spec
    }
    .generate()
}

/// Short and long arrays for both models: 2^10 arrays of 2^15 integers, or a
/// single array of 2^25, all in `[0, 2^29)`.
pub fn paper_recipes() -> Vec<(String, DatasetSpec)> {
    let mut out = Vec::new();
    for model in [Model::Uniform, Model::ClusterData] {
        for (length, n, count) in [("short", 1 << 15, 1 << 10), ("long", 1 << 25, 1)] {
            out.push((
                format!("{length}x{model}"),
                DatasetSpec {
                    model,
                    n,
                    range: PAPER_RANGE,
                    count,
                    seed: 0,
                },
            ));
        }
    }
    out
}

/// Looks up a recipe by name such as `longxuniform`, `short-cluster` or
/// `long_uniform`.
pub fn recipe(name: &str) -> Result<DatasetSpec> {
    let lower = name.to_ascii_lowercase();
    let (length, model) = lower
        .split_once(['x', '-', '_', ':'])
        .ok_or_else(|| Error::InvalidArgument(format!("bad recipe {name:?}")))?;
    let model: Model = model.parse()?;
    paper_recipes()
        .into_iter()
        .find(|(_, spec)| {
            spec.model == model && matches!((length, spec.count), ("short", 1024) | ("long", 1))
        })
        .map(|(_, spec)| spec)
        .ok_or_else(|| Error::InvalidArgument(format!("bad recipe {name:?}")))
}

/// Appends `k` distinct sorted values from `[lo, hi)` to `out`.
fn uniform_into<R: Rng>(rng: &mut R, lo: u64, hi: u64, k: usize, out: &mut Vec<u32>) {
    let span = hi - lo;
    let k64 = k as u64;
    if k64 == span {
        out.extend((lo..hi).map(|v| v as u32));
        return;
    }
    if 2 * k64 > span {
        // dense: draw the complement and walk around it
        let mut skip = Vec::new();
        uniform_into(rng, lo, hi, (span - k64) as usize, &mut skip);
        let mut holes = skip.into_iter().peekable();
        for v in lo..hi {
            if holes.peek() == Some(&(v as u32)) {
                holes.next();
            } else {
                out.push(v as u32);
            }
        }
        return;
    }
    // Sample with replacement and top up until k distinct values remain. The
    // result is invariant under relabelling of the range, so every k-subset is
    // equally likely.
    let start = out.len();
    while out.len() - start < k {
        let missing = k - (out.len() - start);
        out.extend((0..missing).map(|_| rng.gen_range(lo..hi) as u32));
        out[start..].sort_unstable();
        let distinct = dedup_sorted(&mut out[start..]);
        out.truncate(start + distinct);
    }
}

fn dedup_sorted(v: &mut [u32]) -> usize {
    if v.is_empty() {
        return 0;
    }
    let mut w = 1;
    for r in 1..v.len() {
        if v[r] != v[w - 1] {
            v[w] = v[r];
            w += 1;
        }
    }
    w
}

fn cluster_into<R: Rng>(rng: &mut R, lo: u64, hi: u64, k: usize, out: &mut Vec<u32>) {
    if k == 0 {
        return;
    }
    let span = hi - lo;
    if span <= CLUSTER_LEAF_RATIO * k as u64 {
        uniform_into(rng, lo, hi, k, out);
        return;
    }
    let mid = lo + span / 2;
    let f: f64 = rng.gen_range(0.1..=0.9);
    let left_cap = (mid - lo) as usize;
    let right_cap = (hi - mid) as usize;
    let left = ((f * k as f64).round() as usize)
        .min(left_cap)
        .max(k.saturating_sub(right_cap));
    cluster_into(rng, lo, mid, left, out);
    cluster_into(rng, mid, hi, k - left, out);
}
