use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hypermatch::io::{self, Malformed, MetaRecord};
use hypermatch::sweep::{run_sweep, write_outputs, SweepSpec};
use hypermatch_core::constructions::{
    complete, divisibility_barrier, fact_1_5_matching, random_instance, space_barrier, ConstructionMeta,
    RANDOM_GENERATOR_VERSION,
};
use hypermatch_core::driver::{theorem_1_7, Branch, DriverConfig, DriverStatus};
use hypermatch_core::oracles::{
    max_matching_exact, max_rainbow_matching_exact, verify_theorem_bound, BoundCheck, CheckStatus,
};
use hypermatch_core::rainbow::{
    almost_perfect_rainbow, pokrovskiy_rainbow, rainbow_m_plus_q, rainbow_or_dominating, HypergraphFamily,
    RainbowConfig, RainbowRun,
};
use hypermatch_core::{DegreeProfile, Error, KPartiteHypergraph, Mode, OracleBudget, Rational};
use serde::Serialize;
use serde_json::json;

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (format 1)");

const EXIT_MALFORMED: u8 = 1;
const EXIT_FAIL: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "hypermatch", version = VERSION, about = "Matchings in k-partite k-graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file and its metadata side record.
    Gen(GenArgs),
    /// Run a matching algorithm on an instance.
    Solve(SolveArgs),
    /// Run a rainbow-matching algorithm on a family.
    Rainbow(RainbowArgs),
    /// Run a grid of checks and write reports.jsonl and summary.csv.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionKind {
    Complete,
    Divisibility,
    Space,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    construction: ConstructionKind,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Set sizes for the divisibility barrier (default: balanced, odd total).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Prefix-set sizes for space barriers and random backbones.
    #[arg(long, value_delimiter = ',')]
    profile: Option<Vec<usize>>,
    #[arg(long, default_value = "1/2")]
    density: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Guaranteed,
    BestEffort,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Guaranteed => Mode::Guaranteed,
            ModeArg::BestEffort => Mode::BestEffort,
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "best-effort")]
    mode: ModeArg,
    #[arg(long, default_value_t = 50_000_000)]
    budget_nodes: u64,
    #[arg(long, default_value_t = 3600.0)]
    budget_seconds: f64,
}

impl Common {
    fn budget(&self) -> OracleBudget {
        OracleBudget {
            max_nodes: self.budget_nodes,
            max_seconds: self.budget_seconds,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveAlgorithm {
    Oracle,
    Fact15,
    Thm17,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Fact15,
    ThmMain,
    Thm17,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Fact15,
    LargeQ,
    SmallQ,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algorithm: SolveAlgorithm,
    /// Codegree profile; defaults to the computed codegrees.
    #[arg(long, value_delimiter = ',')]
    profile: Option<Vec<usize>>,
    /// With the oracle: compare the matching number against this bound.
    #[arg(long, value_enum)]
    check: Option<CheckArg>,
    /// With thm17: force a branch instead of the q threshold.
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum RainbowAlgorithm {
    Oracle,
    Lemma21,
    Lemma25,
    Pokrovskiy,
    Lemma22,
}

#[derive(Args)]
struct RainbowArgs {
    #[arg(long)]
    family: PathBuf,
    #[arg(long, value_enum)]
    algorithm: RainbowAlgorithm,
    /// Common codegree profile; defaults to the computed one.
    #[arg(long, value_delimiter = ',')]
    profile: Option<Vec<usize>>,
    /// Multiplicity floor; defaults to the family's declared value, else 0.
    #[arg(long)]
    m: Option<usize>,
    /// Colours that must appear (lemma21).
    #[arg(long, value_delimiter = ',')]
    colours: Vec<usize>,
    #[arg(long, default_value = "1/4")]
    epsilon: String,
    /// Best-effort stand-in for the k^10 factor (pokrovskiy); 0 disables it.
    #[arg(long, default_value_t = 1)]
    slack: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Rainbow(a) => rainbow(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn exit_for(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Malformed>().is_some() {
        return EXIT_MALFORMED;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::HypothesisUnmet(_) | Error::InvariantViolation { .. }) => EXIT_FAIL,
        Some(Error::Inconclusive(_)) => EXIT_INCONCLUSIVE,
        _ => EXIT_MALFORMED,
    }
}

fn print<T: Serialize>(report: &T) -> Result<()> {
    println!("{}", serde_json::to_string(report)?);
    Ok(())
}

fn rational(s: &str) -> Result<Rational> {
    Rational::from_str(s).map_err(|e| anyhow!("cannot parse {s:?} as p/q: {e}"))
}

fn gen(a: GenArgs) -> Result<u8> {
    let profile = || DegreeProfile::new(a.profile.clone().unwrap_or_else(|| vec![0; a.k]));
    let (graph, meta, parameters) = match a.construction {
        ConstructionKind::Complete => {
            let g = complete(a.k, a.n)?;
            let meta = ConstructionMeta {
                construction: "complete".into(),
                k: a.k,
                n: a.n,
                a_sizes: vec![0; a.k],
            };
            (g, meta, json!({"k": a.k, "n": a.n}))
        }
        ConstructionKind::Divisibility => {
            let c = divisibility_barrier(a.k, a.n, a.sizes.as_deref())?;
            let p = json!({"k": a.k, "n": a.n, "sizes": c.meta.a_sizes});
            (c.graph, c.meta, p)
        }
        ConstructionKind::Space => {
            let c = space_barrier(a.k, a.n, &profile())?;
            let p = json!({"k": a.k, "n": a.n, "profile": c.meta.a_sizes});
            (c.graph, c.meta, p)
        }
        ConstructionKind::Random => {
            let p = profile();
            let g = random_instance(a.k, a.n, &p, rational(&a.density)?, a.seed)?;
            let meta = ConstructionMeta {
                construction: "random".into(),
                k: a.k,
                n: a.n,
                a_sizes: p.as_slice().to_vec(),
            };
            let params = json!({
                "k": a.k,
                "n": a.n,
                "profile": p.as_slice(),
                "density": a.density,
                "seed": a.seed,
                "generator": RANDOM_GENERATOR_VERSION,
            });
            (g, meta, params)
        }
    };
    io::write_text(&a.out, &io::instance_to_json(&graph))?;
    let side = MetaRecord::new(&meta, parameters);
    io::write_text(&meta_path(&a.out), &serde_json::to_string(&side)?)?;
    Ok(0)
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn profile_for(h: &KPartiteHypergraph, given: &Option<Vec<usize>>) -> DegreeProfile {
    match given {
        Some(a) => DegreeProfile::new(a.clone()),
        None => h.codegrees(),
    }
}

fn check_len(p: &DegreeProfile, k: usize) -> Result<()> {
    if p.k() != k {
        return Err(Error::InvalidInput(format!("profile has {} entries, expected {k}", p.k())).into());
    }
    Ok(())
}

fn solve(a: SolveArgs) -> Result<u8> {
    let h = io::load_instance(&a.instance)?;
    let profile = profile_for(&h, &a.profile);
    check_len(&profile, h.k())?;
    let budget = a.common.budget();
    let instance = a.instance.display().to_string();
    match a.algorithm {
        SolveAlgorithm::Oracle => match a.check {
            None => {
                let s = max_matching_exact(&h, budget)?;
                let exact = s.is_exact();
                let m = s.into_value();
                print(
                    &json!({"algorithm": "oracle", "instance": instance, "nu": m.len(), "exact": exact, "witness": m}),
                )?;
                Ok(if exact { 0 } else { EXIT_INCONCLUSIVE })
            }
            Some(c) => {
                let check = match c {
                    CheckArg::Fact15 => BoundCheck::Fact15,
                    CheckArg::ThmMain => BoundCheck::ThmMain,
                    CheckArg::Thm17 => BoundCheck::Thm17,
                };
                let r = verify_theorem_bound(&h, &profile, check, budget, &instance)?;
                print(&r)?;
                Ok(match r.status {
                    CheckStatus::Pass | CheckStatus::BelowThreshold => 0,
                    CheckStatus::Fail | CheckStatus::HypothesisUnmet => EXIT_FAIL,
                    CheckStatus::Inconclusive => EXIT_INCONCLUSIVE,
                })
            }
        },
        SolveAlgorithm::Fact15 => {
            let m = fact_1_5_matching(&h, &profile)?;
            print(&json!({
                "algorithm": "fact15",
                "instance": instance,
                "profile": profile.as_slice(),
                "size": m.len(),
                "witness": m,
            }))?;
            Ok(0)
        }
        SolveAlgorithm::Thm17 => {
            let config = DriverConfig {
                mode: a.common.mode.into(),
                budget,
                force_branch: a.branch.map(|b| match b {
                    BranchArg::Fact15 => Branch::Fact15,
                    BranchArg::LargeQ => Branch::LargeQ,
                    BranchArg::SmallQ => Branch::SmallQ,
                }),
            };
            let r = theorem_1_7(&h, &profile, &config)?;
            print(&r)?;
            Ok(if r.status == DriverStatus::Success {
                0
            } else {
                EXIT_INCONCLUSIVE
            })
        }
    }
}

#[derive(Serialize)]
struct RainbowReport<'a> {
    algorithm: &'static str,
    family: String,
    #[serde(flatten)]
    run: &'a RainbowRun,
}

fn rainbow(a: RainbowArgs) -> Result<u8> {
    let f: HypergraphFamily = io::load_family(&a.family)?;
    let profile = match &a.profile {
        Some(p) => DegreeProfile::new(p.clone()),
        None => f.common_codegrees(),
    };
    check_len(&profile, f.k())?;
    let m = a.m.or(f.declared_m()).unwrap_or(0);
    let config = RainbowConfig {
        mode: a.common.mode.into(),
        budget: a.common.budget(),
        pokrovskiy_slack: a.slack,
        ..RainbowConfig::default()
    };
    let family = a.family.display().to_string();
    let (name, run) = match a.algorithm {
        RainbowAlgorithm::Oracle => {
            let s = max_rainbow_matching_exact(&f, config.budget)?;
            let exact = s.is_exact();
            let mm = s.into_value();
            print(&json!({"algorithm": "oracle", "family": family, "size": mm.len(), "exact": exact, "matching": mm}))?;
            return Ok(if exact { 0 } else { EXIT_INCONCLUSIVE });
        }
        RainbowAlgorithm::Lemma22 => {
            let outcome = rainbow_or_dominating(&f, &profile, rational(&a.epsilon)?, &config)?;
            print(&json!({"algorithm": "lemma22", "family": family, "outcome": outcome}))?;
            return Ok(0);
        }
        RainbowAlgorithm::Lemma21 => ("lemma21", almost_perfect_rainbow(&f, &profile, m, &a.colours, &config)?),
        RainbowAlgorithm::Lemma25 => ("lemma25", rainbow_m_plus_q(&f, &profile, m, &config)?),
        RainbowAlgorithm::Pokrovskiy => ("pokrovskiy", pokrovskiy_rainbow(&f, &profile, &config)?),
    };
    print(&RainbowReport {
        algorithm: name,
        family,
        run: &run,
    })?;
    Ok(if run.reached_target() { 0 } else { EXIT_INCONCLUSIVE })
}

fn sweep(a: SweepArgs) -> Result<u8> {
    let text = io::read_text(&a.spec)?;
    let spec: SweepSpec = serde_json::from_str(&text).map_err(|e| Malformed {
        what: "sweep spec",
        detail: e.to_string(),
    })?;
    let records = run_sweep(&spec, a.workers)?;
    write_outputs(&a.out, &records)?;
    let failures = records.iter().filter(|r| r.hard_failure()).count();
    if failures > 0 {
        eprintln!("{failures} hard failures");
        return Ok(EXIT_FAIL);
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    #[test]
    fn version_names_the_format() {
        assert!(super::VERSION.ends_with(&format!("(format {})", hypermatch::io::FORMAT_VERSION)));
    }
}
