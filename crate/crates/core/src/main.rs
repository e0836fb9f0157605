use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use intcodec::bench::{self, BenchRecord, MeasureConfig, WeightVector};
use intcodec::datagen::{self, DatasetSpec, Model, PAPER_RANGE};
use intcodec::{read_arrays, write_arrays, Codec, Format, Result};

#[derive(Parser)]
#[command(
    name = "intcodec",
    version,
    about = "Compress sorted 32-bit integer arrays and benchmark the codecs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic sorted arrays into a RAW container
    Gen {
        #[arg(long, value_parser = parse_model)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = PAPER_RANGE)]
        range: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-encode every array of a container with another codec
    Encode {
        #[arg(long)]
        codec: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a container back to plain values (RAW)
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure compression and speed, writing one CSV row per codec and length bucket
    Bench {
        /// Comma-separated codec names, or `all`
        #[arg(long, default_value = "all")]
        codecs: String,
        /// A container file or `recipe:<short|long>x<uniform|cluster>`
        #[arg(long)]
        data: String,
        /// CSV of `bucket,weight` rows for the weighted summary
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        csv: PathBuf,
        /// Minimum seconds per timed run
        #[arg(long, default_value_t = 0.5)]
        min_time: f64,
        #[arg(long, default_value_t = 3)]
        runs: usize,
    },
    /// Report delta entropy and the bounds for binary packing
    Analyze {
        #[arg(long)]
        data: String,
    },
}

fn parse_model(s: &str) -> std::result::Result<Model, String> {
    s.parse().map_err(|e: intcodec::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            model,
            n,
            range,
            count,
            seed,
            out,
        } => {
            let spec = DatasetSpec {
                model,
                n,
                range,
                count,
                seed,
            };
            let arrays = spec.generate()?;
            write_arrays(Format::Raw, &arrays, BufWriter::new(File::create(out)?))
        }
        Command::Encode { codec, input, out } => {
            let codec: Codec = codec.parse()?;
            let (_, arrays) = read_file(&input)?;
            write_arrays(
                Format::Codec(codec),
                &arrays,
                BufWriter::new(File::create(out)?),
            )
        }
        Command::Decode { input, out } => {
            let (_, arrays) = read_file(&input)?;
            write_arrays(Format::Raw, &arrays, BufWriter::new(File::create(out)?))
        }
        Command::Bench {
            codecs,
            data,
            weights,
            csv,
            min_time,
            runs,
        } => bench_command(&codecs, &data, weights.as_deref(), &csv, min_time, runs),
        Command::Analyze { data } => analyze(&data),
    }
}

fn read_file(path: &Path) -> Result<(Format, Vec<Vec<u32>>)> {
    read_arrays(BufReader::new(File::open(path)?))
}

fn load_data(data: &str) -> Result<(String, Vec<Vec<u32>>)> {
    match data.strip_prefix("recipe:") {
        Some(name) => {
            let spec = datagen::recipe(name)?;
            Ok((spec.label(), spec.generate()?))
        }
        None => {
            let (_, arrays) = read_file(Path::new(data))?;
            let label = Path::new(data)
                .file_stem()
                .map_or_else(|| data.to_owned(), |s| s.to_string_lossy().into_owned());
            Ok((label, arrays))
        }
    }
}

fn parse_codecs(list: &str) -> Result<Vec<Codec>> {
    if list.trim() == "all" {
        return Ok(Codec::all());
    }
    list.split(',').map(|s| s.trim().parse()).collect()
}

fn bench_command(
    codecs: &str,
    data: &str,
    weights: Option<&Path>,
    csv: &Path,
    min_time: f64,
    runs: usize,
) -> Result<()> {
    let codecs = parse_codecs(codecs)?;
    let weights = weights
        .map(|p| WeightVector::from_csv(BufReader::new(File::open(p)?)))
        .transpose()?;
    let (label, arrays) = load_data(data)?;
    let config = MeasureConfig {
        min_duration: Duration::from_secs_f64(min_time.max(0.0)),
        runs,
    };
    let mut records: Vec<BenchRecord> = Vec::new();
    for codec in &codecs {
        let rows = bench::measure_by_bucket(codec, &label, &arrays, &config)?;
        for r in &rows {
            eprintln!(
                "{:<16} bucket {:>2}  {:>7.3} bits/int  {:>9.1} enc mis  {:>9.1} dec mis",
                r.codec, r.length_bucket, r.bits_per_int, r.encode_mis, r.decode_mis
            );
        }
        records.extend(rows);
    }
    bench::emit_csv(&records, BufWriter::new(File::create(csv)?))?;

    let summary = bench::aggregate(&records, weights.as_ref())?;
    let mut stdout = std::io::stdout().lock();
    writeln!(
        stdout,
        "{:<16} {:>10} {:>10} {:>10}   ({})",
        "codec",
        "bits/int",
        "enc mis",
        "dec mis",
        if weights.is_some() {
            "weighted"
        } else {
            "unweighted"
        }
    )?;
    for s in summary {
        writeln!(
            stdout,
            "{:<16} {:>10} {:>10} {:>10}",
            s.codec,
            bench::sig4(s.bits_per_int),
            bench::sig4(s.encode_mis),
            bench::sig4(s.decode_mis)
        )?;
    }
    Ok(())
}

fn analyze(data: &str) -> Result<()> {
    let (label, arrays) = load_data(data)?;
    let entropy = bench::entropy_of_deltas(&arrays)?;
    let total: usize = arrays.iter().map(Vec::len).sum();
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "dataset         {label}")?;
    writeln!(stdout, "arrays          {}", arrays.len())?;
    writeln!(stdout, "integers        {total}")?;
    writeln!(stdout, "delta entropy   {} bits/int", bench::sig4(entropy))?;

    let mut lengths: Vec<usize> = arrays.iter().map(Vec::len).filter(|&n| n > 0).collect();
    lengths.sort_unstable();
    lengths.dedup();
    writeln!(stdout)?;
    writeln!(
        stdout,
        "{:>10} {:>10} {:>10} {:>10}",
        "length", "limit", "bp32", "bp128"
    )?;
    for n in lengths {
        let (limit, b32) = bench::theoretic_bounds(n as u64, 32)?;
        let (_, b128) = bench::theoretic_bounds(n as u64, 128)?;
        writeln!(
            stdout,
            "{n:>10} {:>10} {:>10} {:>10}",
            bench::sig4(limit),
            bench::sig4(b32),
            bench::sig4(b128)
        )?;
    }
    Ok(())
}
