use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mlse::harness::{run_experiment, write_reports, ExperimentConfig};
use mlse::io::{read_pgm, read_yuv, write_pgm, write_yuv, yuv::frame_bytes, Container};
use mlse::keystream::{KeystreamHandle, Nonce, SecretKey};
use mlse::pipeline::{threads_from_env, with_threads};
use mlse::{decode_sequence, encode_sequence, EncryptionLevel, FramePlane, MetricsReport};

#[derive(Parser)]
#[command(name = "mlse", version, about = "Intra codec with multi-level selective encryption")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a fresh random key (and optionally a nonce) as hex.
    Keygen {
        #[arg(long)]
        nonce: bool,
    },
    /// Encode a raw 4:2:0 YUV file into a container.
    Encode(EncodeArgs),
    /// Decode a container; without --key the encrypted syntax is used as is.
    Decode(DecodeArgs),
    /// Compare a test sequence against a reference and write a metrics report.
    Metrics(MetricsArgs),
    /// Run the experiment matrix described by a config file.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report_dir: PathBuf,
    },
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    w: usize,
    #[arg(long)]
    h: usize,
    /// Frames to read; defaults to every whole frame in the file.
    #[arg(long)]
    frames: Option<usize>,
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u8).range(0..=51))]
    qp: u8,
    #[arg(long, default_value = "heavy")]
    level: EncryptionLevel,
    /// 32 hex digits; required unless --level none.
    #[arg(long)]
    key: Option<SecretKey>,
    /// 24 hex digits; random when omitted.
    #[arg(long)]
    nonce: Option<Nonce>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, required_unless_present = "out_pgm_dir")]
    out_yuv: Option<PathBuf>,
    #[arg(long)]
    out_pgm_dir: Option<PathBuf>,
    #[arg(long)]
    key: Option<SecretKey>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference: a .pgm image or a raw YUV file (needs --w/--h).
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Output path; `.csv` writes a CSV row, anything else JSON.
    #[arg(long)]
    report: PathBuf,
    #[arg(long, requires = "h")]
    w: Option<usize>,
    #[arg(long, requires = "w")]
    h: Option<usize>,
    #[arg(long)]
    frames: Option<usize>,
}

type Fallible<T = ()> = Result<T, Box<dyn std::error::Error + Send + Sync>>;

fn context<E: std::fmt::Display>(path: &Path) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

fn load_frames(path: &Path, dims: Option<(usize, usize)>, frames: Option<usize>) -> Fallible<Vec<FramePlane>> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")) {
        return Ok(vec![read_pgm(path)?]);
    }
    let (w, h) = dims.ok_or_else(|| format!("{}: raw YUV input needs --w and --h", path.display()))?;
    let count = match frames {
        Some(n) => n,
        None => {
            let len = fs::metadata(path).map_err(context(path))?.len() as usize;
            len / frame_bytes(w, h)
        }
    };
    if count == 0 {
        return Err(format!("{}: no whole frames of {w}x{h}", path.display()).into());
    }
    Ok(read_yuv(path, w, h, count)?)
}

fn encode(args: EncodeArgs) -> Fallible {
    let frames = load_frames(&args.input, Some((args.w, args.h)), args.frames)?;
    let key = match (args.key, args.level) {
        (Some(k), _) => k,
        (None, EncryptionLevel::None) => SecretKey::new([0; 16]),
        (None, level) => return Err(format!("--key is required for level {level}").into()),
    };
    let nonce = args.nonce.unwrap_or_else(Nonce::generate);
    let ks = KeystreamHandle::new(key, nonce);
    let enc = encode_sequence(&frames, args.qp, args.level, &ks)?;
    fs::write(&args.out, enc.container.to_bytes()).map_err(context(&args.out))?;
    println!(
        "frames={} qp={} level={} bits={} nonce={}",
        frames.len(),
        args.qp,
        args.level,
        enc.total_bits(),
        nonce.to_hex()
    );
    Ok(())
}

fn decode(args: DecodeArgs) -> Fallible {
    let bytes = fs::read(&args.input).map_err(context(&args.input))?;
    let container = Container::parse(&bytes).map_err(context(&args.input))?;
    let frames = decode_sequence(&container, args.key.as_ref())?;
    if let Some(path) = &args.out_yuv {
        write_yuv(path, &frames)?;
    }
    if let Some(dir) = &args.out_pgm_dir {
        fs::create_dir_all(dir).map_err(context(dir))?;
        for (i, f) in frames.iter().enumerate() {
            write_pgm(f, &dir.join(format!("frame_{i:04}.pgm")))?;
        }
    }
    Ok(())
}

/// Frame-averaged report; PSNR stays `None` only if every frame is identical.
fn mean_report(reports: &[MetricsReport]) -> MetricsReport {
    let n = reports.len() as f64;
    let avg = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    let psnr = avg(|r| r.psnr_db.unwrap_or(f64::INFINITY));
    MetricsReport {
        psnr_db: psnr.is_finite().then_some(psnr),
        ssim: avg(|r| r.ssim),
        entropy_bits: avg(|r| r.entropy_bits),
        npcr: avg(|r| r.npcr),
        uaci: avg(|r| r.uaci),
        bitrate_delta: None,
        histogram: Vec::new(),
    }
}

fn metrics(args: MetricsArgs) -> Fallible {
    let dims = args.w.zip(args.h);
    let reference = load_frames(&args.reference, dims, args.frames)?;
    let test = load_frames(&args.test, dims, args.frames)?;
    if reference.len() != test.len() {
        return Err(format!("frame counts differ: {} vs {}", reference.len(), test.len()).into());
    }
    let per_frame =
        reference.iter().zip(&test).map(|(r, t)| MetricsReport::compare(r, t)).collect::<Result<Vec<_>, _>>()?;
    let report = mean_report(&per_frame);

    let is_csv = args.report.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let mut w = csv::Writer::from_path(&args.report).map_err(context(&args.report))?;
        w.serialize(&report).map_err(context(&args.report))?;
        w.flush().map_err(context(&args.report))?;
    } else {
        let text = serde_json::to_string_pretty(&report)? + "\n";
        fs::write(&args.report, text).map_err(context(&args.report))?;
    }
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn experiment(config: Option<PathBuf>, report_dir: PathBuf) -> Fallible {
    let cfg = match config {
        Some(path) => ExperimentConfig::from_file(&path)?,
        None => ExperimentConfig::default(),
    };
    let report = run_experiment(&cfg)?;
    write_reports(&report, &report_dir)?;
    eprintln!(
        "mlse: {} cells, {} failures, reports in {}",
        report.cells.len(),
        report.failures.len(),
        report_dir.display()
    );
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(format!("{} cells failed; see failures.json", report.failures.len()).into())
    }
}

fn run(cli: Cli) -> Fallible {
    match cli.command {
        Command::Keygen { nonce } => {
            println!("{}", SecretKey::generate().to_hex());
            if nonce {
                println!("{}", Nonce::generate().to_hex());
            }
            Ok(())
        }
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Metrics(a) => metrics(a),
        Command::Experiment { config, report_dir } => experiment(config, report_dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match with_threads(threads_from_env(), || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mlse: {e}");
            ExitCode::from(1)
        }
    }
}
