// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dqc1kit::dqc1::UnitaryJson;
use dqc1kit::fixtures::{self, measured_scale_sigma};
use dqc1kit::state::StateJson;
use dqc1kit::witness::{MatrixSource, StateSource};
use dqc1kit::{
    discord, discord_at_small_polarization, haar_survey, jones_unitary, scan_verdict, witness_procedure, CMatrix,
    CorrelationMatrix, DensityMatrix, Dqc1Instance, Error, MinimizerOptions, SingularValueDistribution, WitnessOptions,
};

#[derive(Parser, Debug)]
#[command(name = "dqc1kit", version, about = "One-clean-qubit simulation, quantum discord and its rank witness")]
struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace estimate of a unitary from the one-clean-qubit circuit.
    Simulate(SimulateArgs),
    /// Discord of a named or file state, or of a circuit output.
    Discord(DiscordArgs),
    /// Correlation-matrix rank witness with Monte Carlo uncertainties.
    Witness(WitnessArgs),
    /// Extrapolated discord averaged over Haar-random unitaries.
    HaarSurvey(HaarArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// `jones`, `identityN` (N = dimension) or a unitary JSON file.
    #[arg(long)]
    unitary: String,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiscordArgs {
    /// Named fixture state or a state JSON file.
    #[arg(long, conflicts_with = "dqc1", required_unless_present = "dqc1")]
    state: Option<String>,
    /// Unitary for the circuit output (`jones`, `identityN` or a file).
    #[arg(long)]
    dqc1: Option<String>,
    /// Polarization of the clean qubit.
    #[arg(long, requires = "dqc1")]
    alpha: Option<f64>,
    /// Extrapolate from larger polarizations under quadratic scaling.
    #[arg(long, requires = "alpha")]
    extrapolate: bool,
    /// Grid points per angle for the measurement search.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Noise {
    Measured,
    None,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    /// Correlation-matrix JSON with sigmas.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    matrix: Option<PathBuf>,
    /// Named fixture state or state JSON file; the first qubit is `A`.
    #[arg(long)]
    state: Option<String>,
    /// Emulated measurement noise for state inputs. Defaults to `measured` with
    /// `--scan-combos`, `none` otherwise.
    #[arg(long, value_enum, requires = "state")]
    noise: Option<Noise>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0.005)]
    bin: f64,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Pool random four-column subsets of the full matrix instead of the
    /// acquisition loop.
    #[arg(long)]
    scan_combos: Option<usize>,
    #[arg(long, default_value_t = 10, requires = "scan_combos")]
    resamples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for one histogram CSV per singular value.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HaarArgs {
    /// Number of unitaries.
    #[arg(long, default_value_t = 500)]
    seeds: usize,
    /// Register qubits of the random unitary.
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1.4e-5)]
    alpha: f64,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-seed values as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let numerical = e.downcast_ref::<Error>().is_some_and(Error::is_numerical);
            ExitCode::from(if numerical { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let seed = cli.seed;
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Discord(a) => discord_cmd(a),
        Command::Witness(a) => witness(a, seed),
        Command::HaarSurvey(a) => haar(a, seed),
    }
}

fn emit(summary: &str, report: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match out {
        Some(path) => {
            fs::write(path, text + "\n")?;
            println!("{summary}");
        }
        None => {
            eprintln!("{summary}");
            println!("{text}");
        }
    }
    Ok(())
}

fn load_unitary(spec: &str) -> anyhow::Result<CMatrix> {
    if spec == "jones" {
        return Ok(jones_unitary());
    }
    if let Some(dim) = spec.strip_prefix("identity") {
        if let Ok(d) = dim.parse::<usize>() {
            if d == 0 {
                return Err(Error::InvalidInput("identity dimension must be positive".into()).into());
            }
            return Ok(CMatrix::identity(d, d));
        }
    }
    Ok(UnitaryJson::load(Path::new(spec))?)
}

fn load_state(spec: &str) -> anyhow::Result<DensityMatrix> {
    if fixtures::NAMED_STATES.contains(&spec) || !Path::new(spec).exists() {
        return Ok(fixtures::named_state(spec)?);
    }
    let text = fs::read_to_string(spec)?;
    let parsed: StateJson = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(parsed.to_state()?)
}

fn simulate(a: SimulateArgs) -> anyhow::Result<()> {
    let inst = Dqc1Instance::new(a.epsilon, load_unitary(&a.unitary)?)?;
    let est = inst.trace_estimate();
    let exact = inst.exact_normalized_trace();
    let report = json!({
        "config": { "command": "simulate", "unitary": a.unitary, "epsilon": a.epsilon },
        "re": est.re,
        "im": est.im,
        "exact_trace": { "re": exact.re, "im": exact.im },
        "epsilon": a.epsilon,
        "n": inst.n(),
    });
    let summary = format!("trace estimate {:.6} {:+.6}i (n = {}, epsilon = {})", est.re, est.im, inst.n(), a.epsilon);
    emit(&summary, &report, a.out.as_deref())
}

fn discord_cmd(a: DiscordArgs) -> anyhow::Result<()> {
    let opts = MinimizerOptions::with_grid(a.grid);
    let config = json!({
        "command": "discord",
        "state": a.state,
        "dqc1": a.dqc1,
        "alpha": a.alpha,
        "extrapolate": a.extrapolate,
        "grid": a.grid,
        "angular_tol": opts.angular_tol,
    });
    if let Some(spec) = &a.dqc1 {
        let u = load_unitary(spec)?;
        let alpha = a.alpha.unwrap_or(1.0);
        if a.extrapolate {
            let ex = discord_at_small_polarization(&u, alpha, &opts)?;
            let report = json!({ "config": config, "discord": ex.discord, "extrapolation": ex });
            let summary = match ex.exponent {
                Some(p) => format!("discord {:.4e} bits at alpha {alpha:e} (fitted exponent {p:.4})", ex.discord),
                None => format!("discord 0 bits at alpha {alpha:e} (all sampled discords vanish)"),
            };
            return emit(&summary, &report, a.out.as_deref());
        }
        let rho = Dqc1Instance::new(alpha, u)?.output_state();
        return report_discord(&rho, config, &opts, a.out.as_deref());
    }
    let rho = load_state(a.state.as_deref().expect("clap enforces --state or --dqc1"))?;
    report_discord(&rho, config, &opts, a.out.as_deref())
}

fn report_discord(
    rho: &DensityMatrix,
    config: Value,
    opts: &MinimizerOptions,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    if rho.qubit_partition()[0] != 1 {
        return Err(Error::Dimension("discord needs a one-qubit A subsystem".into()).into());
    }
    let res = discord(rho, (2, rho.dim() / 2), opts)?;
    let summary = format!(
        "discord {:.6e} bits (I = {:.6}, J = {:.6}, theta = {:.6}, phi = {:.6})",
        res.discord, res.mutual_information, res.classical_correlations, res.argmin_basis.theta, res.argmin_basis.phi
    );
    let report = json!({ "config": config, "discord": res.discord, "result": res });
    emit(&summary, &report, out)
}

fn witness(a: WitnessArgs, seed: u64) -> anyhow::Result<()> {
    let noise = a.noise.unwrap_or(if a.scan_combos.is_some() { Noise::Measured } else { Noise::None });
    let opts = WitnessOptions {
        tau: a.tau,
        confidence: a.confidence,
        n_samples: a.samples,
        bin_width: a.bin,
        seed,
        ..WitnessOptions::default()
    };
    let config = json!({
        "command": "witness",
        "matrix": a.matrix,
        "state": a.state,
        "noise": a.state.as_ref().map(|_| noise),
        "samples": a.samples,
        "bin": a.bin,
        "tau": a.tau,
        "confidence": a.confidence,
        "scan_combos": a.scan_combos,
        "resamples": a.scan_combos.map(|_| a.resamples),
        "seed": seed,
    });

    let (verdict, dist, history) = if let Some(path) = &a.matrix {
        let r = CorrelationMatrix::from_json(&fs::read_to_string(path)?)?;
        let dim_a = r.shape().0.isqrt();
        match a.scan_combos {
            Some(combos) => {
                let (v, d) = scan_verdict(&r, dim_a, combos, a.resamples, &opts)?;
                (v, Some(d), None)
            }
            None => {
                if r.sigmas().is_none() {
                    return Err(Error::MissingSigmas.into());
                }
                let run = witness_procedure(&mut MatrixSource::new(r), dim_a, &opts)?;
                (run.verdict, run.distribution, Some(run.history))
            }
        }
    } else {
        let rho = load_state(a.state.as_deref().expect("clap enforces --matrix or --state"))?;
        let mut source = match noise {
            Noise::Measured => StateSource::noisy(rho, 1, measured_scale_sigma, seed)?,
            Noise::None => StateSource::exact(rho, 1)?,
        };
        match a.scan_combos {
            Some(combos) => {
                let r = source.full_matrix()?;
                let (v, d) = scan_verdict(&r, 2, combos, a.resamples, &opts)?;
                (v, Some(d), None)
            }
            None => {
                let run = witness_procedure(&mut source, 2, &opts)?;
                (run.verdict, run.distribution, Some(run.history))
            }
        }
    };

    let mut csv_files = Vec::new();
    if let (Some(dir), Some(d)) = (&a.csv_dir, &dist) {
        csv_files = write_histograms(dir, d)?;
    }
    let summary = format!(
        "{:?}: rank lower bound {} (dim A = {}, tau = {:.4}, {} columns)",
        verdict.outcome,
        verdict.rank_lower_bound,
        verdict.dim_a,
        verdict.tau,
        verdict.columns_used.len()
    );
    let report = json!({
        "config": config,
        "verdict": verdict,
        "history": history,
        "singular_values": dist.as_ref().map(summarize),
        "histograms": csv_files,
    });
    emit(&summary, &report, a.out.as_deref())
}

fn summarize(d: &SingularValueDistribution) -> Value {
    (0..d.n_values())
        .map(|k| {
            json!({
                "index": k + 1,
                "mean": d.mean(k),
                "median": d.median(k),
                "q01": d.quantile(k, 0.01),
                "q99": d.quantile(k, 0.99),
            })
        })
        .collect()
}

fn write_histograms(dir: &Path, d: &SingularValueDistribution) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    d.histograms
        .iter()
        .enumerate()
        .map(|(k, h)| {
            let path = dir.join(format!("singular_value_{}.csv", k + 1));
            fs::write(&path, h.to_csv())?;
            Ok(path)
        })
        .collect()
}

fn haar(a: HaarArgs, seed: u64) -> anyhow::Result<()> {
    let opts = MinimizerOptions::with_grid(a.grid);
    let survey = haar_survey(a.n, a.seeds, seed, a.alpha, &opts)?;
    if let Some(path) = &a.csv {
        let mut text = String::from("seed,discord,exponent\n");
        for e in &survey.entries {
            let p = e.exponent.map_or(String::new(), |p| format!("{p:.6}"));
            text.push_str(&format!("{},{:.6e},{p}\n", e.seed, e.discord));
        }
        fs::write(path, text)?;
    }
    let config = json!({
        "command": "haar-survey",
        "seeds": a.seeds,
        "base_seed": seed,
        "n": a.n,
        "alpha": a.alpha,
        "grid": a.grid,
        "csv": a.csv,
    });
    let summary = format!(
        "mean discord {:.4e} ± {:.2e} bits over {} unitaries (n = {}, alpha = {:e})",
        survey.mean, survey.stderr, a.seeds, a.n, a.alpha
    );
    let report = json!({ "config": config, "survey": survey });
    emit(&summary, &report, a.out.as_deref())
}
