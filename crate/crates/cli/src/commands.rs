use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use thermal_transient::model::{cauer_step_response, times_per_decade};
use thermal_transient::moisture::classify_hermeticity;
use thermal_transient::structure::{cumulative_structure_function, divergence_point, DivergenceStatus};
use thermal_transient::{analyze, SignalKind, TransientRecord};

use crate::config::{classifier_config, AnalysisFlags};
use crate::error::{CliError, Result};
use crate::formats::{
    number, read_structure_function, read_transient, spectrum_csv, structure_function_csv,
    write_atomic, write_structure_function, write_transient,
};
use crate::stack_file::read_stack;

/// Exit code for runtime failures (bad input, I/O, numerical breakdown).
pub const EXIT_FAILURE: i32 = 3;
/// Exit code for malformed command lines.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Stack description file
    pub stack: PathBuf,
    /// Output transient CSV
    #[arg(short, long)]
    pub output: PathBuf,
    /// Power step, W
    #[arg(long, default_value_t = 0.1)]
    pub power: f64,
    /// First sample time, s
    #[arg(long, default_value_t = 1e-6)]
    pub t_start: f64,
    /// Last sample time, s
    #[arg(long, default_value_t = 1e3)]
    pub t_end: f64,
    /// Sample density of the output
    #[arg(long, default_value_t = 48)]
    pub samples_per_decade: usize,
    /// Override the saturation of every porous layer
    #[arg(long)]
    pub saturation: Option<f64>,
    /// Write the voltage of a temperature-sensitive parameter with this
    /// sensitivity (mV/K) instead of the temperature
    #[arg(long, allow_hyphen_values = true)]
    pub sensitivity_mv_per_k: Option<f64>,
    /// Gaussian noise, standard deviation relative to the final rise
    #[arg(long, requires = "seed")]
    pub noise: Option<f64>,
    /// Seed for the noise generator
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the model's own structure function (with the ambient
    /// singularity) to this file
    #[arg(long, value_name = "FILE")]
    pub structure_function: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Transient CSV files, analysed concurrently
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Directory for <name>.spectrum.csv and <name>.sf.csv; defaults to the
    /// input's directory
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    /// Structure function of the dry, sealed reference
    pub reference: PathBuf,
    /// Structure function under test
    pub measured: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisFlags,
}

pub fn simulate(args: &SimulateArgs) -> Result<i32> {
    let mut stack = read_stack(&args.stack)?;
    if let Some(s) = args.saturation {
        stack = stack.with_saturation(s)?;
    }
    let ladder = stack.ladder()?;
    if !(args.t_start > 0.0 && args.t_end > args.t_start) || args.samples_per_decade == 0 {
        return Err(CliError::Usage(
            "need 0 < t_start < t_end and samples_per_decade >= 1".into(),
        ));
    }
    let times = times_per_decade(args.t_start, args.t_end, args.samples_per_decade);
    let mut record = cauer_step_response(&ladder, args.power, &times)?;
    if let Some(sigma) = args.noise {
        let seed = args.seed.expect("clap enforces --seed with --noise");
        record = record.with_gaussian_noise(sigma, seed)?;
    }
    if let Some(mv) = args.sensitivity_mv_per_k {
        let s = mv * 1e-3;
        let volts = record.values().iter().map(|t| t * s).collect();
        record = TransientRecord::new(
            record.times().to_vec(),
            volts,
            record.power_step(),
            Some(s),
            SignalKind::Voltage,
        )?;
    }
    write_transient(&args.output, &record)?;
    if let Some(path) = &args.structure_function {
        let sf = cumulative_structure_function(&ladder).with_ambient_singularity();
        write_structure_function(path, &sf)?;
    }
    println!("steady_state_resistance_K_per_W = {}", number(ladder.total_resistance()));
    Ok(0)
}

fn output_path(input: &Path, out_dir: Option<&Path>, suffix: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map_or_else(|| "transient".into(), |s| s.to_string_lossy().into_owned());
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| input.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    dir.join(format!("{stem}.{suffix}"))
}

fn analyze_one(input: &Path, out_dir: Option<&Path>, config: &thermal_transient::AnalysisConfig) -> Result<String> {
    let record = read_transient(input)?;
    let a = analyze(&record, config)?;
    let spectrum_path = output_path(input, out_dir, "spectrum.csv");
    let sf_path = output_path(input, out_dir, "sf.csv");
    write_atomic(&spectrum_path, spectrum_csv(&a.spectrum).as_bytes())?;
    write_atomic(&sf_path, structure_function_csv(&a.structure_function).as_bytes())?;

    let mut s = String::new();
    writeln!(s, "[{}]", input.display()).unwrap();
    match &a.steady_state {
        Ok(r) => writeln!(s, "steady_state_resistance_K_per_W = {}", number(*r)).unwrap(),
        Err(e) => writeln!(s, "steady_state_resistance_K_per_W = withheld ({e})").unwrap(),
    }
    writeln!(s, "identified_resistance_K_per_W = {}", number(a.foster.total_resistance())).unwrap();
    writeln!(s, "foster_stages = {}", a.foster.len()).unwrap();
    writeln!(s, "expansion_precision_bits = {}", a.expansion.precision).unwrap();
    writeln!(s, "spectrum = {}", spectrum_path.display()).unwrap();
    writeln!(s, "structure_function = {}", sf_path.display()).unwrap();
    Ok(s)
}

pub fn analyze_files(args: &AnalyzeArgs) -> Result<i32> {
    let config = args.analysis.resolve()?;
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let results: Vec<Result<String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .inputs
            .iter()
            .map(|input| scope.spawn(|| analyze_one(input, args.out_dir.as_deref(), &config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    });
    let mut failed = false;
    for (input, result) in args.inputs.iter().zip(results) {
        match result {
            Ok(summary) => print!("{summary}"),
            Err(e) => {
                eprintln!("error: {}: {e}", input.display());
                failed = true;
            }
        }
    }
    Ok(if failed { EXIT_FAILURE } else { 0 })
}

pub fn compare(args: &CompareArgs) -> Result<i32> {
    let config = args.analysis.resolve()?;
    let a = read_structure_function(&args.a)?;
    let b = read_structure_function(&args.b)?;
    let d = divergence_point(&a, &b, config.divergence_tolerance)?;
    let status = match d.status {
        DivergenceStatus::Diverged => "diverged",
        DivergenceStatus::Identical => "identical",
        DivergenceStatus::NoCommonSection => "no_common_section",
    };
    println!("status = {status}");
    println!("divergence_resistance_K_per_W = {}", number(d.resistance));
    Ok(0)
}

pub fn classify(args: &ClassifyArgs) -> Result<i32> {
    let config = args.analysis.resolve()?;
    let reference = read_structure_function(&args.reference)?;
    let measured = read_structure_function(&args.measured)?;
    let v = classify_hermeticity(&reference, &measured, &classifier_config(&config))?;
    let status = match v.status {
        thermal_transient::moisture::HermeticityStatus::Hermetic => "hermetic",
        thermal_transient::moisture::HermeticityStatus::Breached => "breached",
        thermal_transient::moisture::HermeticityStatus::Inconclusive => "inconclusive",
    };
    println!("status = {status}");
    println!(
        "sensing_section_resistance_change = {}",
        number(v.sensing_layer_resistance_change)
    );
    println!("divergence_resistance_K_per_W = {}", number(v.divergence_point));
    println!("reason = {}", v.reason);
    Ok(v.status.exit_code())
}
