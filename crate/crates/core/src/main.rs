use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use minorlab::expansion::{check_expander, ExpansionProfile, HeuristicOptions, DEFAULT_EXACT_CAP};
use minorlab::extraction::{
    check_extraction_trace, decode_trace, encode_trace, extract_expander, ExtractionTrace, PipelineConfig,
};
use minorlab::gen::{experiment_sweep, gen, GenModel, GenSpec, SweepConfig};
use minorlab::graph::{parse_edge_list, write_edge_list};
use minorlab::minor::{default_c_of_t, find_small_minor, MinorModel};
use minorlab::oracle::{brute_force_minor_capped, check_minor_model, hadwiger_number_capped, DEFAULT_BRUTE_CAP};
use minorlab::rational::{self, Rational};
use minorlab::{Error, Graph};

#[derive(Parser)]
#[command(name = "minorlab", version, about = "Expander extraction and small clique-minor search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    El,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    HighGirth,
    DisjointCliques,
    RandomRegular,
}

impl From<Model> for GenModel {
    fn from(m: Model) -> Self {
        match m {
            Model::Gnp => GenModel::Gnp,
            Model::HighGirth => GenModel::HighGirth,
            Model::DisjointCliques => GenModel::DisjointCliques,
            Model::RandomRegular => GenModel::RandomRegular,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Delta,
    DeltaN,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long, value_enum, default_value = "delta")]
    profile: Kind,
    /// Expansion parameter as `p/q`.
    #[arg(long, default_value = "1/256")]
    delta: String,
    /// Ambient order for `delta-n`; defaults to the graph order.
    #[arg(long)]
    ambient_n: Option<usize>,
}

impl ProfileArgs {
    fn build(&self, g: &Graph) -> Result<ExpansionProfile, Error> {
        let delta = rational::parse(&self.delta)?;
        match self.profile {
            Kind::Delta => ExpansionProfile::delta(delta),
            Kind::DeltaN => ExpansionProfile::delta_n(delta, self.ambient_n.unwrap_or(g.order())),
        }
    }
}

#[derive(Args)]
struct Tuning {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    #[arg(long, default_value_t = minorlab::expansion::DEFAULT_PROBE_CAP)]
    probe_cap: usize,
}

impl Tuning {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            exact_cap: self.exact_cap,
            probe_cap: self.probe_cap,
            rng_seed: self.seed,
            ..PipelineConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph.
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: usize,
        /// `c` for p = c/n, girth, clique order or degree.
        #[arg(long)]
        param: u64,
        /// Edge-probability numerator of the base graph for high-girth.
        #[arg(long, default_value_t = 3)]
        base_c: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Extract an expander and print it with a run summary.
    Extract {
        graph: PathBuf,
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        tuning: Tuning,
        /// Write the trace here; `.bin` selects the binary encoding.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Check expansion, or verify a trace or minor model against the graph.
    Check {
        graph: PathBuf,
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        tuning: Tuning,
        /// Trace to replay (JSON or binary).
        #[arg(long, conflicts_with = "model")]
        trace: Option<PathBuf>,
        /// Minor model (JSON) to verify.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Extract an expander and search it for a small K_t minor.
    FindMinor {
        graph: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value = "1")]
        epsilon: String,
        /// Defaults to 1, 2, 3 for t = 3, 4, 5.
        #[arg(long)]
        c_of_t: Option<String>,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        brute_cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive K_t-minor search, or the Hadwiger number without --t.
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run the pipeline over n = 2^min-exp ..= 2^max-exp.
    Sweep {
        #[arg(long, value_enum, default_value = "gnp")]
        model: Model,
        #[arg(long, default_value_t = 8)]
        min_exp: u32,
        #[arg(long, default_value_t = 10)]
        max_exp: u32,
        /// Generator parameter; 0 with high-girth means ceil(log2 n / 2).
        #[arg(long, default_value_t = 8)]
        param: u64,
        #[arg(long, default_value_t = 3)]
        base_c: u64,
        #[arg(long, default_value_t = 4)]
        t: usize,
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[arg(long)]
        c_of_t: Option<String>,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-n aggregates as CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Record wall-clock times (the report is then not reproducible).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        output: Output,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(parse_edge_list(&text)?)
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn want(output: &Output, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = output.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage("output format not supported by this subcommand".into()))
    }
}

fn c_for(t: usize, given: &Option<String>) -> Result<Rational, Failure> {
    match given {
        Some(s) => Ok(rational::parse(s)?),
        None => default_c_of_t(t).ok_or_else(|| Failure::Usage(format!("no default c(t) for t = {t}; pass --c-of-t"))),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn read_trace(path: &Path) -> Result<ExtractionTrace, Failure> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.starts_with(b"MLTR") {
        Ok(decode_trace(&bytes)?)
    } else {
        let text = String::from_utf8(bytes).map_err(|_| Failure::Usage("trace is neither binary nor UTF-8 JSON".into()))?;
        Ok(ExtractionTrace::from_json(&text)?)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            model,
            n,
            param,
            base_c,
            seed,
            output,
        } => {
            let spec = GenSpec {
                model: model.into(),
                n,
                param,
                base_c,
                seed,
            };
            let g = gen(&spec)?;
            let text = match want(&output, Format::El, &[Format::El, Format::Json])? {
                Format::Json => pretty(&json!({
                    "spec": spec,
                    "order": g.order(),
                    "edges": g.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
                })),
                _ => write_edge_list(&g),
            };
            emit(&output, &text)
        }
        Command::Extract {
            graph,
            profile,
            tuning,
            trace,
            output,
        } => {
            let g = read_graph(&graph)?;
            let profile = profile.build(&g)?;
            let (h, tr) = extract_expander(&g, &profile, &tuning.config())?;
            if let Some(path) = trace {
                let bytes = if path.extension().is_some_and(|e| e == "bin") {
                    encode_trace(&tr)
                } else {
                    tr.to_json().into_bytes()
                };
                fs::write(&path, bytes).map_err(|e| io_err(&path, e))?;
            }
            let text = match want(&output, Format::Json, &[Format::El, Format::Json])? {
                Format::El => write_edge_list(&h),
                _ => {
                    let (removals, restrictions, fallbacks) = tr.case_counts();
                    pretty(&json!({
                        "input_order": g.order(),
                        "input_density": tr.input_density,
                        "profile": profile,
                        "steps": tr.steps.len(),
                        "removals": removals,
                        "restrictions": restrictions,
                        "fallbacks": fallbacks,
                        "outcome": tr.outcome,
                        "order": h.order(),
                        "density": tr.final_density,
                        "vertices": tr.remap,
                    }))
                }
            };
            emit(&output, &text)
        }
        Command::Check {
            graph,
            profile,
            tuning,
            trace,
            model,
            output,
        } => {
            let g = read_graph(&graph)?;
            want(&output, Format::Json, &[Format::Json])?;
            if let Some(path) = trace {
                let tr = read_trace(&path)?;
                let verdict = check_extraction_trace(&g, &tr)?;
                let doc = match &verdict {
                    Ok(()) => json!({ "valid": true }),
                    Err(defect) => json!({ "valid": false, "step": defect.step, "reason": defect.reason }),
                };
                emit(&output, &pretty(&doc))?;
                return verdict.map_err(|d| Failure::Verification(format!("trace rejected: {d}")));
            }
            if let Some(path) = model {
                let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
                let m = MinorModel::from_json(&text)?;
                let verdict = check_minor_model(&g, &m);
                let doc = match &verdict {
                    Ok(()) => json!({ "valid": true, "t": m.t, "order": m.order }),
                    Err(defect) => json!({ "valid": false, "reason": defect.to_string() }),
                };
                emit(&output, &pretty(&doc))?;
                return verdict.map_err(|d| Failure::Verification(format!("model rejected: {d}")));
            }
            let profile = profile.build(&g)?;
            let options = HeuristicOptions {
                probe_cap: tuning.probe_cap,
                seed: tuning.seed,
            };
            let outcome = check_expander(&g, &profile, tuning.exact_cap, &options)?;
            let mut text = outcome.to_json(&profile, g.order());
            text.push('\n');
            emit(&output, &text)
        }
        Command::FindMinor {
            graph,
            t,
            epsilon,
            c_of_t,
            tuning,
            brute_cap,
            output,
        } => {
            let g = read_graph(&graph)?;
            want(&output, Format::Json, &[Format::Json])?;
            let c = c_for(t, &c_of_t)?;
            let eps = rational::parse(&epsilon)?;
            let cfg = PipelineConfig {
                brute_cap,
                ..tuning.config()
            };
            let report = match find_small_minor(&g, t, &eps, &c, &cfg) {
                Err(Error::Invariant(msg)) => return Err(Failure::Verification(msg)),
                other => other?,
            };
            let mut text = report.to_json();
            text.push('\n');
            emit(&output, &text)
        }
        Command::Oracle { graph, t, cap, output } => {
            let g = read_graph(&graph)?;
            want(&output, Format::Json, &[Format::Json])?;
            let doc = match t {
                Some(t) => {
                    let found = brute_force_minor_capped(&g, t, cap)?;
                    json!({ "t": t, "found": found.is_some(), "model": found })
                }
                None => json!({ "hadwiger_number": hadwiger_number_capped(&g, cap)? }),
            };
            emit(&output, &pretty(&doc))
        }
        Command::Sweep {
            model,
            min_exp,
            max_exp,
            param,
            base_c,
            t,
            epsilon,
            c_of_t,
            trials,
            seed,
            summary,
            timings,
            output,
        } => {
            let mut cfg = SweepConfig::new(model.into(), min_exp, max_exp, param, t);
            cfg.base_c = base_c;
            cfg.epsilon = rational::parse(&epsilon)?;
            cfg.c_of_t = c_for(t, &c_of_t)?;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.timings = timings;
            let report = experiment_sweep(&cfg)?;
            let text = match want(&output, Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
                _ => report.trials_csv()?,
            };
            if let Some(path) = summary {
                fs::write(&path, report.aggregates_csv()?).map_err(|e| io_err(&path, e))?;
            }
            emit(&output, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
