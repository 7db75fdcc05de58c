//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or file-format error,
//! 3 domain error. Every failure prints one `chaoscrypt: ...` line on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cipher::{self, CipherConfig, ImageCube};
use crate::error::Error;
use crate::keys::KeySet;
use crate::maps::{self, MapKind, Spacing, SqcmForm, SweepOptions};
use crate::metrics::{self, MetricsReport, DEFAULT_CORRELATION_PAIRS};
use crate::netpbm;
use crate::neural::{self, BlstmModel, TrainConfig, DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};
use crate::sequence::{self, KeySchedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "chaoscrypt",
    version,
    about = "Chaotic-map and BLSTM image cipher"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random key file.
    Keygen {
        #[arg(long)]
        out: PathBuf,
        /// Make the key reproducible.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Train the sequence model on a map orbit.
    TrainModel {
        #[arg(long, default_value_t = DEFAULT_TRAIN_PARAM)]
        a: f64,
        #[arg(long, default_value_t = DEFAULT_TRAIN_X0, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 32)]
        hidden: usize,
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[arg(long, default_value_t = 50)]
        epochs: usize,
        #[arg(long, default_value_t = 0.01)]
        lr: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Encrypt a PGM/PPM image (or a batch of them).
    Encrypt(CipherArgs),
    /// Decrypt a PGM/PPM image (or a batch of them).
    Decrypt(CipherArgs),
    /// Entropy, correlation and, with --ref, NPCR/UACI.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CORRELATION_PAIRS)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Core randomness tests on key-derived diffusion bytes.
    Nist {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lyapunov exponent over a parameter range.
    MapSweep {
        #[arg(long)]
        map: MapKind,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
        spacing: SpacingArg,
        /// Sine-quadratic map variant.
        #[arg(long, value_enum, default_value_t = FormArg::Squared)]
        form: FormArg,
        #[arg(long, default_value_t = maps::DEFAULT_LE_DISCARD)]
        discard: usize,
        #[arg(long, default_value_t = maps::DEFAULT_LE_ITERATIONS)]
        iterations: usize,
    },
}

#[derive(Args, Debug)]
struct CipherArgs {
    #[arg(long)]
    key: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(
        long = "in",
        conflicts_with = "batch",
        required_unless_present = "batch"
    )]
    input: Option<PathBuf>,
    /// Grayscale images processed together; exactly three of one size are
    /// interleaved into one colour cube.
    #[arg(long, num_args = 1..)]
    batch: Vec<PathBuf>,
    /// Output path, one per input.
    #[arg(long, num_args = 1.., required = true)]
    out: Vec<PathBuf>,
    #[arg(long, default_value_t = 2)]
    rounds: usize,
    /// Print wall-clock time of sequence generation and the cipher core.
    #[arg(long)]
    time: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    Squared,
    Linear,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_io_or_format() {
            Failure::Io(e.to_string())
        } else if matches!(e, Error::InvalidArgument(_)) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn io_context(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn require_inputs(paths: &[&Path]) -> CliResult<()> {
    for p in paths {
        if !p.is_file() {
            return Err(Failure::Io(format!("{}: no such file", p.display())));
        }
    }
    Ok(())
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so a failed run never leaves a partial output.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let fail = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn load_keys(path: &Path) -> CliResult<KeySet> {
    KeySet::load(path).map_err(io_context(path))
}

fn load_model(path: &Path) -> CliResult<BlstmModel> {
    BlstmModel::load(path).map_err(io_context(path))
}

fn load_image(path: &Path) -> CliResult<ImageCube> {
    netpbm::read_image(path).map_err(io_context(path))
}

fn keygen(out: &Path, seed: Option<u64>) -> CliResult<()> {
    let mut rng = match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_os_rng(),
    };
    let keys = KeySet::random(&mut rng);
    write_atomic(out, keys.to_string().as_bytes())
}

fn train(a: f64, x0: f64, out: &Path, config: TrainConfig) -> CliResult<()> {
    if config.hidden_size == 0 || config.window == 0 {
        return Err(Failure::Usage(
            "--hidden and --window must be positive".into(),
        ));
    }
    let model = neural::train_model(a, x0, config)?;
    write_atomic(out, &model.to_bytes())?;
    let fmt = |v: Option<f64>| {
        v.map(|x| crate::fmt::format_g(x, 6))
            .unwrap_or_else(|| "unset".into())
    };
    println!(
        "final_loss={} holdout_mse={}",
        fmt(model.meta().final_loss),
        fmt(model.meta().holdout_mse)
    );
    Ok(())
}

fn run_cipher(args: &CipherArgs, decrypting: bool) -> CliResult<()> {
    let inputs: Vec<PathBuf> = match &args.input {
        Some(p) => vec![p.clone()],
        None => args.batch.clone(),
    };
    if inputs.len() != args.out.len() {
        return Err(Failure::Usage(format!(
            "{} inputs but {} outputs",
            inputs.len(),
            args.out.len()
        )));
    }
    let mut all: Vec<&Path> = vec![&args.key, &args.model];
    all.extend(inputs.iter().map(PathBuf::as_path));
    require_inputs(&all)?;
    let cfg = CipherConfig::new(args.rounds).map_err(|e| Failure::Usage(e.to_string()))?;

    let keys = load_keys(&args.key)?;
    let model = load_model(&args.model)?;
    let images = inputs
        .iter()
        .map(|p| load_image(p))
        .collect::<CliResult<Vec<_>>>()?;
    if args.input.is_none() && images.iter().any(|im| im.channels() != 1) {
        return Err(Failure::Io(
            "--batch takes grayscale (P5) images only".into(),
        ));
    }

    let t0 = Instant::now();
    let (results, t_seq) = if cipher::is_stackable(&images) {
        let cube = ImageCube::stack([&images[0], &images[1], &images[2]])?;
        let schedule = KeySchedule::derive(&keys, &model, cube.rows(), cube.cols())?;
        let t_seq = t0.elapsed();
        let out = if decrypting {
            cipher::decrypt_with_schedule(&cube, &schedule, &cfg)?
        } else {
            cipher::encrypt_with_schedule(&cube, &schedule, &cfg)?
        };
        (Vec::from(out.unstack()?), t_seq)
    } else {
        let mut schedules: Vec<KeySchedule> = Vec::new();
        let mut t_seq = std::time::Duration::ZERO;
        let mut out = Vec::with_capacity(images.len());
        for im in &images {
            let dims = (im.rows(), im.cols());
            let idx = match schedules.iter().position(|s| s.dims() == dims) {
                Some(i) => i,
                None => {
                    let t = Instant::now();
                    schedules.push(KeySchedule::derive(&keys, &model, dims.0, dims.1)?);
                    t_seq += t.elapsed();
                    schedules.len() - 1
                }
            };
            out.push(if decrypting {
                cipher::decrypt_with_schedule(im, &schedules[idx], &cfg)?
            } else {
                cipher::encrypt_with_schedule(im, &schedules[idx], &cfg)?
            });
        }
        (out, t_seq)
    };
    let total = t0.elapsed();

    for (img, path) in results.iter().zip(&args.out) {
        write_atomic(path, &netpbm::encode(img))?;
    }
    if args.time {
        println!(
            "time_seconds={:.6} sequence_seconds={:.6} diffusion_seconds={:.6}",
            total.as_secs_f64(),
            t_seq.as_secs_f64(),
            (total - t_seq).as_secs_f64()
        );
    }
    Ok(())
}

fn analyze(
    input: &Path,
    reference: Option<&Path>,
    out: &Path,
    pairs: usize,
    seed: u64,
) -> CliResult<()> {
    let mut all = vec![input];
    all.extend(reference);
    require_inputs(&all)?;
    let img = load_image(input)?;
    let reference = reference.map(load_image).transpose()?;
    let report = MetricsReport::compute(&img, reference.as_ref(), pairs, seed)?;
    let mut buf = Vec::new();
    report.write_csv(&mut buf).expect("writing to memory");
    write_atomic(out, &buf)
}

fn nist(key: &Path, model: &Path, bits: usize, out: &Path) -> CliResult<()> {
    require_inputs(&[key, model])?;
    let keys = load_keys(key)?;
    let model = load_model(model)?;
    let stream = sequence::diffusion_bitstream(&keys, &model, bits)?;
    let results = metrics::nist_core(&stream)?;
    let mut buf = Vec::new();
    metrics::write_nist_csv(&mut buf, &results).expect("writing to memory");
    write_atomic(out, &buf)
}

#[allow(clippy::too_many_arguments)]
fn map_sweep(
    map: MapKind,
    lo: f64,
    hi: f64,
    steps: usize,
    x0: f64,
    out: &Path,
    spacing: SpacingArg,
    form: FormArg,
    discard: usize,
    iterations: usize,
) -> CliResult<()> {
    let opts = SweepOptions {
        spacing: match spacing {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        },
        form: match form {
            FormArg::Squared => SqcmForm::Squared,
            FormArg::Linear => SqcmForm::Linear,
        },
        discard,
        iterations,
    };
    if iterations == 0 {
        return Err(Failure::Usage("--iterations must be positive".into()));
    }
    let points = maps::le_sweep(map, lo, hi, steps, x0, opts)?;
    let mut buf = Vec::new();
    maps::write_sweep_csv(&mut buf, &points).expect("writing to memory");
    write_atomic(out, &buf)
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Keygen { out, seed } => keygen(&out, seed),
        Command::TrainModel {
            a,
            x0,
            out,
            hidden,
            window,
            epochs,
            lr,
            seed,
        } => train(
            a,
            x0,
            &out,
            TrainConfig {
                hidden_size: hidden,
                window,
                epochs,
                learning_rate: lr,
                init_seed: seed,
            },
        ),
        Command::Encrypt(args) => run_cipher(&args, false),
        Command::Decrypt(args) => run_cipher(&args, true),
        Command::Analyze {
            input,
            reference,
            out,
            pairs,
            seed,
        } => analyze(&input, reference.as_deref(), &out, pairs, seed),
        Command::Nist {
            key,
            model,
            bits,
            out,
        } => nist(&key, &model, bits, &out),
        Command::MapSweep {
            map,
            lo,
            hi,
            steps,
            x0,
            out,
            spacing,
            form,
            discard,
            iterations,
        } => map_sweep(
            map, lo, hi, steps, x0, &out, spacing, form, discard, iterations,
        ),
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    EXIT_OK
                }
                _ => {
                    // clap spreads one error over several lines before the usage hint.
                    let text = e.to_string();
                    let parts: Vec<&str> = text
                        .lines()
                        .map(str::trim)
                        .take_while(|l| !l.starts_with("Usage:"))
                        .filter(|l| !l.is_empty())
                        .collect();
                    eprintln!(
                        "chaoscrypt: {}",
                        parts.join(" ").trim_start_matches("error: ")
                    );
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("chaoscrypt: {}", f.message());
            f.code()
        }
    }
}
