//! Command-line front end: design kernels, filter images, extract edges,
//! sharpen, inject noise, and run the restoration benchmark.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or parameter
//! validation), 2 for runtime errors (missing files, malformed data,
//! solver failures). No output file is written until its contents have
//! been fully computed.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use gmhbt::design::{design_gmhbt_hp_detailed, DenomForm, DesignSpec, Kernel2D};
use gmhbt::eval::{
    add_gaussian_noise, run_benchmark, suite, BenchReport, FilterKind, NoiseSpec, REFERENCE_PSNR,
};
use gmhbt::filter::{convolve2d_image, sharpen, threshold_edges, BoundaryMode};
use gmhbt::image::{load_pgm, quantize, save_pgm, GrayImage, QuantizeMode};

#[derive(Parser)]
#[command(
    name = "gmhbt",
    version,
    about = "Design a non-separable 2D high-pass filter, apply it to PGM images, and benchmark it against a LoG baseline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a high-pass kernel and write it as a text file
    Design(DesignCmd),
    /// Convolve an image with a kernel and write the quantized response
    Apply(ApplyCmd),
    /// Threshold the filter response into a binary edge map
    Edges(EdgesCmd),
    /// Superimpose the scaled filter response onto the input image
    Sharpen(SharpenCmd),
    /// Add seeded Gaussian noise to an image
    Noise(NoiseCmd),
    /// Run the restoration benchmark and write a CSV or JSON report
    Bench(BenchCmd),
}

/// Design parameters shared by `design` and `bench`.
#[derive(Args)]
struct SpecCoreArgs {
    /// Slope parameter of the odd profile (zero-crossing slope is half this)
    #[arg(long, default_value_t = 0.7)]
    sigma_w: f64,
    /// Cutoff radius in radians, inside (0, pi)
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    omega_c: f64,
    /// Order of the desired-response knee
    #[arg(long, default_value_t = 2)]
    response_order: u32,
    /// Denominator form of the desired response
    #[arg(long, default_value = "butterworth")]
    denom_form: DenomForm,
    /// Frequency-lattice points along the first axis
    #[arg(long, default_value_t = 33)]
    grid_m: usize,
    /// Frequency-lattice points along the second axis
    #[arg(long, default_value_t = 33)]
    grid_k: usize,
    /// Weight of pass-band lattice points
    #[arg(long, default_value_t = 1.0)]
    weight_pass: f64,
    /// Weight of stop-band lattice points
    #[arg(long, default_value_t = 1.0)]
    weight_stop: f64,
    /// Required sum of all kernel coefficients
    #[arg(long, default_value_t = 0.0)]
    dc_gain: f64,
}

impl SpecCoreArgs {
    fn apply_to(&self, mut spec: DesignSpec) -> DesignSpec {
        spec.sigma_w = self.sigma_w;
        spec.omega_c = self.omega_c;
        spec.response_order = self.response_order;
        spec.denom_form = self.denom_form;
        spec.grid_m = self.grid_m;
        spec.grid_k = self.grid_k;
        spec.weight_pass = self.weight_pass;
        spec.weight_stop = self.weight_stop;
        spec.dc_gain = self.dc_gain;
        spec
    }
}

#[derive(Args)]
struct DesignCmd {
    /// Odd kernel side length
    #[arg(long, default_value_t = 5)]
    size: usize,
    /// Half-width of the square region of support [default: (size-1)/2]
    #[arg(long)]
    support_w: Option<f64>,
    /// Standard deviation of the Gaussian envelope [default: support_w/2]
    #[arg(long)]
    sigma_g: Option<f64>,
    #[command(flatten)]
    core: SpecCoreArgs,
    /// Output kernel file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ApplyCmd {
    /// Input binary PGM image
    #[arg(short, long)]
    input: PathBuf,
    /// Kernel text file
    #[arg(short, long)]
    kernel: PathBuf,
    /// Output PGM image
    #[arg(short, long)]
    output: PathBuf,
    /// Quantization of the signed response
    #[arg(long, default_value = "absolute")]
    quantize: QuantizeMode,
    /// Border handling
    #[arg(long, default_value = "replicate")]
    boundary: BoundaryMode,
}

#[derive(Args)]
struct EdgesCmd {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    kernel: PathBuf,
    /// Threshold as a fraction of the peak response magnitude, in [0, 1]
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, default_value = "replicate")]
    boundary: BoundaryMode,
    /// Output binary PGM (255 on edges, 0 elsewhere)
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SharpenCmd {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    kernel: PathBuf,
    /// Gain applied to the response before superposition (nonnegative)
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value = "replicate")]
    boundary: BoundaryMode,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct NoiseCmd {
    #[arg(short, long)]
    input: PathBuf,
    /// Noise standard deviation in luminance units (nonnegative)
    #[arg(long)]
    sigma: f64,
    /// Generator seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?}; expected \"csv\" or \"json\"")),
        }
    }
}

#[derive(Args)]
struct BenchCmd {
    /// Extra PGM images to benchmark (center-cropped to 128x128); ids are
    /// the file stems. The bundled synthetic suite is always included
    /// unless --no-bundled is given.
    #[arg(long = "image")]
    images: Vec<PathBuf>,
    /// Benchmark only the images passed via --image
    #[arg(long)]
    no_bundled: bool,
    /// Kernel sizes to design and test (comma separated, odd)
    #[arg(long, value_delimiter = ',', default_value = "5")]
    sizes: Vec<usize>,
    /// Noise standard deviations (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "20")]
    sigmas: Vec<f64>,
    /// Master seed; per-cell seeds are derived from it
    #[arg(long, default_value_t = 1)]
    master_seed: u64,
    /// Quantization applied to high-frequency maps before scoring
    #[arg(long, default_value = "absolute")]
    quantize: QuantizeMode,
    /// Report format
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    #[command(flatten)]
    core: SpecCoreArgs,
    /// Report output path
    #[arg(short, long)]
    output: PathBuf,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn usage(err: impl fmt::Display) -> Self {
        CliError::Usage(err.to_string())
    }

    fn runtime(err: impl fmt::Display) -> Self {
        CliError::Runtime(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let benign = matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            );
            let _ = err.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Design(cmd) => cmd_design(cmd),
        Command::Apply(cmd) => cmd_apply(cmd),
        Command::Edges(cmd) => cmd_edges(cmd),
        Command::Sharpen(cmd) => cmd_sharpen(cmd),
        Command::Noise(cmd) => cmd_noise(cmd),
        Command::Bench(cmd) => cmd_bench(cmd),
    }
}

fn cmd_design(cmd: DesignCmd) -> Result<(), CliError> {
    let mut spec = cmd.core.apply_to(DesignSpec::for_size(cmd.size));
    if let Some(w) = cmd.support_w {
        spec.support_w = w;
        spec.sigma_g = w / 2.0;
    }
    if let Some(s) = cmd.sigma_g {
        spec.sigma_g = s;
    }
    spec.validate().map_err(CliError::usage)?;
    let outcome = design_gmhbt_hp_detailed(&spec).map_err(CliError::runtime)?;
    outcome.kernel.save(&cmd.output).map_err(CliError::runtime)?;
    println!("wrote {}", cmd.output.display());
    println!("unknowns: {}", outcome.unknown_count);
    println!("condition estimate: {:.6e}", outcome.condition_estimate);
    println!("dc sum: {:.6e}", outcome.kernel.sum());
    Ok(())
}

fn load_inputs(input: &PathBuf, kernel: &PathBuf) -> Result<(GrayImage, Kernel2D), CliError> {
    let image = load_pgm(input).map_err(CliError::runtime)?;
    let kernel = Kernel2D::load(kernel).map_err(CliError::runtime)?;
    Ok((image, kernel))
}

fn cmd_apply(cmd: ApplyCmd) -> Result<(), CliError> {
    let (image, kernel) = load_inputs(&cmd.input, &cmd.kernel)?;
    let response = convolve2d_image(&image, &kernel, cmd.boundary).map_err(CliError::runtime)?;
    let out = quantize(&response, cmd.quantize).map_err(CliError::runtime)?;
    save_pgm(&out, &cmd.output).map_err(CliError::runtime)?;
    println!("wrote {}", cmd.output.display());
    Ok(())
}

fn cmd_edges(cmd: EdgesCmd) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&cmd.fraction) {
        return Err(CliError::Usage(format!(
            "fraction must lie in [0, 1], got {}",
            cmd.fraction
        )));
    }
    let (image, kernel) = load_inputs(&cmd.input, &cmd.kernel)?;
    let response = convolve2d_image(&image, &kernel, cmd.boundary).map_err(CliError::runtime)?;
    let edges = threshold_edges(&response, cmd.fraction);
    save_pgm(&edges, &cmd.output).map_err(CliError::runtime)?;
    println!("wrote {}", cmd.output.display());
    Ok(())
}

fn cmd_sharpen(cmd: SharpenCmd) -> Result<(), CliError> {
    if !(cmd.lambda.is_finite() && cmd.lambda >= 0.0) {
        return Err(CliError::Usage(format!(
            "lambda must be nonnegative, got {}",
            cmd.lambda
        )));
    }
    let (image, kernel) = load_inputs(&cmd.input, &cmd.kernel)?;
    let response = convolve2d_image(&image, &kernel, cmd.boundary).map_err(CliError::runtime)?;
    let enhanced = sharpen(&image, &response, cmd.lambda).map_err(CliError::runtime)?;
    save_pgm(&enhanced, &cmd.output).map_err(CliError::runtime)?;
    println!("wrote {}", cmd.output.display());
    Ok(())
}

fn cmd_noise(cmd: NoiseCmd) -> Result<(), CliError> {
    if !(cmd.sigma.is_finite() && cmd.sigma >= 0.0) {
        return Err(CliError::Usage(format!(
            "sigma must be finite and nonnegative, got {}",
            cmd.sigma
        )));
    }
    let image = load_pgm(&cmd.input).map_err(CliError::runtime)?;
    let noisy = add_gaussian_noise(
        &image,
        &NoiseSpec {
            sigma: cmd.sigma,
            seed: cmd.seed,
        },
    );
    save_pgm(&noisy, &cmd.output).map_err(CliError::runtime)?;
    println!("wrote {}", cmd.output.display());
    Ok(())
}

fn cmd_bench(cmd: BenchCmd) -> Result<(), CliError> {
    if cmd.sizes.iter().any(|&s| s % 2 == 0 || s < 3) {
        return Err(CliError::Usage(format!(
            "kernel sizes must be odd and at least 3, got {:?}",
            cmd.sizes
        )));
    }
    if cmd.sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(CliError::Usage(format!(
            "noise sigmas must be finite and nonnegative, got {:?}",
            cmd.sigmas
        )));
    }
    let spec = cmd.core.apply_to(DesignSpec::for_size(
        cmd.sizes.iter().copied().max().unwrap_or(5),
    ));
    for &size in &cmd.sizes {
        spec.resized(size).validate().map_err(CliError::usage)?;
    }

    let mut images = if cmd.no_bundled {
        Vec::new()
    } else {
        suite::bundled_suite()
    };
    for path in &cmd.images {
        let img = load_pgm(path).map_err(CliError::runtime)?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().replace(',', "_"))
            .unwrap_or_else(|| "image".into());
        images.push((id, suite::center_crop(&img, suite::SUITE_SIZE)));
    }
    if images.is_empty() {
        return Err(CliError::Usage(
            "no benchmark images: --no-bundled requires at least one --image".into(),
        ));
    }

    let report = run_benchmark(
        &images,
        &cmd.sizes,
        &cmd.sigmas,
        cmd.master_seed,
        &spec,
        cmd.quantize,
    )
    .map_err(CliError::runtime)?;

    let payload = match cmd.format {
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => report.to_json(),
    };
    fs::write(&cmd.output, payload).map_err(CliError::runtime)?;

    print_summary(&cmd, &report);
    Ok(())
}

fn print_summary(cmd: &BenchCmd, report: &BenchReport) {
    println!(
        "wrote {} ({} rows, master seed {})",
        cmd.output.display(),
        report.rows.len(),
        cmd.master_seed
    );
    println!("cell margins (proposed - log):");
    for margin in report.margins() {
        println!(
            "  {:<14} size {} sigma {:>6}: {:+.3} dB",
            margin.image, margin.kernel_size, margin.noise_sigma, margin.margin_db
        );
    }
    println!("stored reference values (size 5 s10/s20, size 7 s10/s20):");
    for image in ["House", "Lena", "Boat", "Bridge", "Gray21", "Elaine"] {
        let pick = |filter: FilterKind| -> Vec<String> {
            [(5, 10.0), (5, 20.0), (7, 10.0), (7, 20.0)]
                .iter()
                .filter_map(|&(size, sigma)| {
                    REFERENCE_PSNR
                        .iter()
                        .find(|c| {
                            c.image == image
                                && c.filter == filter
                                && c.kernel_size == size
                                && c.noise_sigma == sigma
                        })
                        .map(|c| format!("{:.2}", c.psnr_db))
                })
                .collect()
        };
        println!(
            "  {:<8} log {}  proposed {}",
            image,
            pick(FilterKind::Log).join("/"),
            pick(FilterKind::Proposed).join("/")
        );
    }
    let (wins, cells) = report.win_count();
    match report.mean_margin_db() {
        Some(mean) => println!(
            "mean(proposed - log): {mean:+.3} dB over {cells} cells; proposed wins {wins}/{cells}"
        ),
        None => println!("mean(proposed - log): undefined (non-finite cell); proposed wins {wins}/{cells}"),
    }
}
