//! Command-line front end for the acoustic-entropy S-box pipeline.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hydrosbox::audio::{read_pcm, window_amplitudes, DEFAULT_WINDOW_SECONDS};
use hydrosbox::bitstream::BitStream;
use hydrosbox::entropy::extract_series;
use hydrosbox::randtest::{run_battery, DEFAULT_ALPHA};
use hydrosbox::sbox::{parse_entries, SBox};
use hydrosbox::sboxeval::full_report;
use hydrosbox::sboxgen::{generate_sboxes, reverse_sbox};
use hydrosbox::synth::{synth_corpus, SynthConfig};
use hydrosbox::Error;

#[derive(Parser)]
#[command(name = "hydrosbox", version, about = "PCM noise to S-boxes: extract, certify, generate, analyze")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a deterministic synthetic PCM noise corpus
    SynthCorpus(SynthCorpusArgs),
    /// Extract a de-biased random bitstream from PCM recordings
    Extract(ExtractArgs),
    /// Run the statistical battery on a packed bitstream
    Randtest(RandtestArgs),
    /// Generate S-boxes from a packed bitstream
    GenSbox(GenSboxArgs),
    /// Evaluate an S-box file against the five standard criteria
    Analyze(AnalyzeArgs),
    /// Invert a bijective S-box file
    Invert(InvertArgs),
}

#[derive(Args)]
struct SynthCorpusArgs {
    /// Generator seed
    #[arg(long)]
    seed: u64,
    /// Number of WAVE files (positive multiple of 16)
    #[arg(long)]
    files: usize,
    /// Duration of each file in seconds
    #[arg(long, default_value_t = 60.0)]
    duration: f64,
    /// Sample rate in Hz
    #[arg(long, default_value_t = 16_000)]
    sample_rate: u32,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Overwrite existing files
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ExtractArgs {
    /// Input WAVE files, in corpus order
    inputs: Vec<PathBuf>,
    /// Read every *.wav from this directory instead (lexicographic order)
    #[arg(long, conflicts_with = "inputs")]
    dir: Option<PathBuf>,
    /// Output bitstream (packed MSB-first, with a .len sidecar)
    #[arg(long)]
    out: PathBuf,
    /// Analysis window in seconds
    #[arg(long, default_value_t = DEFAULT_WINDOW_SECONDS)]
    window_seconds: f64,
    /// Keep at most this many bits
    #[arg(long)]
    max_bits: Option<usize>,
    /// Overwrite existing output
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct RandtestArgs {
    /// Packed bitstream to test
    #[arg(long = "in")]
    input: PathBuf,
    /// Significance level
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Also write the report as JSON
    #[arg(long)]
    json: Option<PathBuf>,
    /// Overwrite an existing JSON report
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct GenSboxArgs {
    /// Packed bitstream to consume
    #[arg(long = "in")]
    input: PathBuf,
    /// How many S-boxes to draw
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output directory (sbox_000.txt, ...)
    #[arg(long)]
    out: PathBuf,
    /// Overwrite existing files
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// S-box file (16x16 table or comma-separated)
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the report as JSON
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print the human-readable report (default when --json is absent)
    #[arg(long)]
    text: bool,
    /// Overwrite an existing JSON report
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct InvertArgs {
    /// Bijective S-box file
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite an existing output
    #[arg(long)]
    force: bool,
}

/// Progress chatter on stderr when `HYDROSBOX_LOG=debug` is set.
fn verbose() -> bool {
    std::env::var("HYDROSBOX_LOG").is_ok_and(|v| v.eq_ignore_ascii_case("debug"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::SynthCorpus(args) => cmd_synth_corpus(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Randtest(args) => cmd_randtest(args),
        Command::GenSbox(args) => cmd_gen_sbox(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Invert(args) => cmd_invert(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::FAILURE
        }
    }
}

/// Refuses to clobber `path` unless `force` is set.
fn guard_overwrite(path: &Path, force: bool) -> Result<(), Error> {
    if !force && path.exists() {
        return Err(Error::InvalidParam(format!(
            "{} exists; pass --force to overwrite",
            path.display()
        )));
    }
    Ok(())
}

/// Writes through a temporary sibling and renames into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let tmp = path.with_extension("tmp-write");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn cmd_synth_corpus(args: SynthCorpusArgs) -> Result<(), Error> {
    let cfg = SynthConfig {
        seed: args.seed,
        file_count: args.files,
        duration_seconds: args.duration,
        sample_rate: args.sample_rate,
    };
    if cfg.file_count == 0 || !cfg.file_count.is_multiple_of(16) {
        return Err(Error::BlockCount {
            count: cfg.file_count,
        });
    }
    for k in 0..args.files {
        guard_overwrite(&args.out.join(format!("synth_{k:04}.wav")), args.force)?;
    }
    let paths = synth_corpus(&cfg, &args.out)?;
    println!("wrote {} files under {}", paths.len(), args.out.display());
    Ok(())
}

fn collect_wavs(args: &ExtractArgs) -> Result<Vec<PathBuf>, Error> {
    if let Some(dir) = &args.dir {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("wav")))
            .collect();
        paths.sort();
        Ok(paths)
    } else {
        Ok(args.inputs.clone())
    }
}

fn cmd_extract(args: ExtractArgs) -> Result<(), Error> {
    guard_overwrite(&args.out, args.force)?;
    let paths = collect_wavs(&args)?;
    // reject a bad corpus before decoding anything
    if paths.is_empty() || !paths.len().is_multiple_of(16) {
        return Err(Error::BlockCount { count: paths.len() });
    }
    let mut series = Vec::with_capacity(paths.len());
    for path in &paths {
        let rec = read_pcm(path)?;
        if verbose() {
            eprintln!(
                "read {} ({} samples at {} Hz)",
                path.display(),
                rec.samples.len(),
                rec.sample_rate
            );
        }
        series.push(window_amplitudes(&rec, args.window_seconds)?);
    }
    let mut bits = extract_series(series)?;
    if let Some(cap) = args.max_bits {
        bits.truncate(cap);
    }
    bits.write_packed_file(&args.out)?;
    println!(
        "extracted {} bits from {} recordings -> {}",
        bits.len(),
        paths.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_randtest(args: RandtestArgs) -> Result<(), Error> {
    if !(0.0..1.0).contains(&args.alpha) {
        return Err(Error::InvalidParam(format!("alpha {} not in (0, 1)", args.alpha)));
    }
    if let Some(path) = &args.json {
        guard_overwrite(path, args.force)?;
    }
    let bits = BitStream::read_packed_file(&args.input)?;
    if bits.len() < 1_000_000 {
        eprintln!(
            "warning: {} bits is below the recommended one million",
            bits.len()
        );
    }
    let battery = run_battery(&bits, args.alpha);

    println!("{:<34} {:<24} verdict", "test", "p-value(s)");
    let mut rows = Vec::new();
    for (name, outcome) in &battery {
        match outcome {
            Ok(r) => {
                let ps: Vec<String> = r.p_values.iter().map(|p| format!("{p:.8}")).collect();
                println!("{:<34} {:<24} {}", name, ps.join(" "), r.verdict);
                rows.push(serde_json::json!({
                    "test": name,
                    "p_values": r.p_values,
                    "verdict": r.verdict.to_string(),
                }));
            }
            Err(e) => {
                println!("{name:<34} {:<24} error: {e}", "-");
                rows.push(serde_json::json!({ "test": name, "error": e.to_string() }));
            }
        }
    }
    if let Some(path) = &args.json {
        write_atomic(path, serde_json::to_string_pretty(&rows).unwrap().as_bytes())?;
    }
    Ok(())
}

fn cmd_gen_sbox(args: GenSboxArgs) -> Result<(), Error> {
    if args.count == 0 {
        return Err(Error::InvalidParam("count must be positive".into()));
    }
    fs::create_dir_all(&args.out)?;
    for k in 0..args.count {
        guard_overwrite(&args.out.join(format!("sbox_{k:03}.txt")), args.force)?;
    }
    let bits = BitStream::read_packed_file(&args.input)?;
    let boxes = generate_sboxes(&bits, args.count)?;
    for (k, sbox) in boxes.iter().enumerate() {
        let path = args.out.join(format!("sbox_{k:03}.txt"));
        write_atomic(&path, sbox.to_string().as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Error> {
    if let Some(path) = &args.json {
        guard_overwrite(path, args.force)?;
    }
    let entries = parse_entries(&fs::read_to_string(&args.input)?)?;
    let report = full_report(&entries);
    if args.text || args.json.is_none() {
        print!("{}", report.render_text());
    }
    if let Some(path) = &args.json {
        let json = serde_json::to_string_pretty(&report.to_json()).unwrap();
        write_atomic(path, json.as_bytes())?;
    }
    Ok(())
}

fn cmd_invert(args: InvertArgs) -> Result<(), Error> {
    let sbox = SBox::read_file(&args.input)?;
    let inverse = reverse_sbox(&sbox);
    match &args.out {
        Some(path) => {
            guard_overwrite(path, args.force)?;
            write_atomic(path, inverse.to_string().as_bytes())?;
        }
        None => print!("{inverse}"),
    }
    Ok(())
}
