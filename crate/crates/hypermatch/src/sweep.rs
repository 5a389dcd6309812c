//! Batch checks over generator grids.
//!
//! Each instance gets the exact matching number, the main-theorem and
//! augmentation bounds under its computed codegree profile, and a run of the
//! constructive driver. Output order is by instance id, so it does not depend
//! on the worker count.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use hypermatch_core::constructions::{
    complete, default_divisibility_sizes, divisibility_barrier, random_instance, space_barrier,
};
use hypermatch_core::driver::{
    theorem_1_7, verify_main_theorem, DriverConfig, DriverReport, DriverStatus, MainTheoremRow,
};
use hypermatch_core::oracles::{graph_from_mask, tuple_count, CheckStatus};
use hypermatch_core::{DegreeProfile, Error, KPartiteHypergraph, Mode, OracleBudget, Position, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::write_text;

/// Exhaustive grids above this many graphs are refused.
const MAX_EXHAUSTIVE: u64 = 1 << 20;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub grid: Vec<GridEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridEntry {
    /// Every k-partite k-graph with classes of size `n`.
    Exhaustive {
        k: usize,
        n: usize,
    },
    Complete {
        k: usize,
        n: Vec<usize>,
    },
    /// Default sizes, or every admissible size vector with `all_sizes`.
    Divisibility {
        k: usize,
        n: Vec<usize>,
        #[serde(default)]
        all_sizes: bool,
    },
    /// The listed profiles, or every profile with sum at most `n`.
    Space {
        k: usize,
        n: Vec<usize>,
        #[serde(default)]
        profiles: Option<Vec<Vec<usize>>>,
    },
    /// Seeds `seed_start .. seed_start + seeds`; density as `"p/q"`.
    Random {
        k: usize,
        n: Vec<usize>,
        #[serde(default)]
        profile: Option<Vec<usize>>,
        density: String,
        seeds: u64,
        #[serde(default)]
        seed_start: u64,
    },
}

pub struct Instance {
    pub id: String,
    pub graph: KPartiteHypergraph,
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join("-")
}

/// All `k`-vectors over `0..=n`, in lexicographic order.
fn vectors(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

impl GridEntry {
    pub fn expand(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        match self {
            GridEntry::Exhaustive { k, n } => {
                let sizes = vec![*n as Position; *k];
                let bits = tuple_count(&sizes).context("exhaustive grid is too large")?;
                let total = 1u64 << bits;
                if total > MAX_EXHAUSTIVE {
                    bail!("exhaustive grid k={k} n={n} has {total} graphs");
                }
                let width = total.to_string().len();
                for i in 0..total {
                    out.push(Instance {
                        id: format!("exhaustive-k{k}-n{n}-{i:0width$}"),
                        graph: graph_from_mask(&sizes, i)?,
                    });
                }
            }
            GridEntry::Complete { k, n } => {
                for &n in n {
                    out.push(Instance {
                        id: format!("complete-k{k}-n{n}"),
                        graph: complete(*k, n)?,
                    });
                }
            }
            GridEntry::Divisibility { k, n, all_sizes } => {
                for &n in n {
                    let choices = if *all_sizes {
                        vectors(*k, n)
                    } else {
                        vec![default_divisibility_sizes(*k, n)?]
                    };
                    for sizes in choices {
                        if let Ok(c) = divisibility_barrier(*k, n, Some(&sizes)) {
                            out.push(Instance {
                                id: format!("divisibility-k{k}-n{n}-a{}", join(&sizes)),
                                graph: c.graph,
                            });
                        }
                    }
                }
            }
            GridEntry::Space { k, n, profiles } => {
                for &n in n {
                    let list = match profiles {
                        Some(p) => p.clone(),
                        None => vectors(*k, n)
                            .into_iter()
                            .filter(|a| a.iter().sum::<usize>() <= n)
                            .collect(),
                    };
                    for a in list {
                        let graph = space_barrier(*k, n, &DegreeProfile::new(a.clone()))?.graph;
                        out.push(Instance {
                            id: format!("space-k{k}-n{n}-a{}", join(&a)),
                            graph,
                        });
                    }
                }
            }
            GridEntry::Random {
                k,
                n,
                profile,
                density,
                seeds,
                seed_start,
            } => {
                let d = Rational::from_str(density).map_err(|e| anyhow::anyhow!("density {density:?}: {e}"))?;
                let a = profile.clone().unwrap_or_else(|| vec![0; *k]);
                for &n in n {
                    for seed in *seed_start..seed_start + seeds {
                        let graph = random_instance(*k, n, &DegreeProfile::new(a.clone()), d, seed)?;
                        out.push(Instance {
                            id: format!(
                                "random-k{k}-n{n}-a{}-d{}-s{seed:06}",
                                join(&a),
                                density.replace('/', "over")
                            ),
                            graph,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One JSON line of sweep output.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    #[serde(flatten)]
    pub check: MainTheoremRow,
    pub driver: Option<DriverReport>,
    pub driver_error: Option<String>,
    /// False when a successful driver run disagrees with `min(n, Q)` or
    /// exceeds `nu`, or when the driver hit an internal inconsistency.
    pub driver_consistent: bool,
}

impl SweepRecord {
    pub fn hard_failure(&self) -> bool {
        self.check.fact_status == CheckStatus::Fail || !self.driver_consistent
    }
}

pub fn sweep_budget(spec: &SweepSpec) -> OracleBudget {
    OracleBudget {
        max_nodes: spec.budget_nodes.unwrap_or(5_000_000),
        // Node counts only: a wall-clock cap would make output machine-dependent.
        max_seconds: f64::INFINITY,
    }
}

pub fn evaluate(instance: &Instance, budget: OracleBudget) -> Result<SweepRecord> {
    let h = &instance.graph;
    let check = verify_main_theorem(&instance.id, h, budget)?;
    let config = DriverConfig {
        mode: Mode::BestEffort,
        budget,
        force_branch: None,
    };
    let (driver, driver_error, consistent) = match theorem_1_7(h, &h.codegrees(), &config) {
        Ok(r) => {
            let size = r.matching.len();
            let ok = r.status != DriverStatus::Success
                || (size == check.n.min(check.total) && check.nu.is_none_or(|nu| size <= nu));
            (Some(r), None, ok)
        }
        Err(e @ Error::InvariantViolation { .. }) => (None, Some(e.to_string()), false),
        Err(e) => (None, Some(e.to_string()), true),
    };
    Ok(SweepRecord {
        check,
        driver,
        driver_error,
        driver_consistent: consistent,
    })
}

pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRecord>> {
    let mut instances = Vec::new();
    for entry in &spec.grid {
        instances.extend(entry.expand()?);
    }
    let budget = sweep_budget(spec);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let mut records = pool.install(|| {
        instances
            .par_iter()
            .map(|i| evaluate(i, budget).with_context(|| format!("instance {}", i.id)))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by(|a, b| a.check.instance_id.cmp(&b.check.instance_id));
    Ok(records)
}

fn label<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

pub fn summary_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(
        "instance_id,n,k,Q,nu,bound,status,fact15_bound,fact15_status,driver_branch,driver_status,driver_size\n",
    );
    for r in records {
        let c = &r.check;
        let nu = c.nu.map(|x| x.to_string()).unwrap_or_default();
        let (branch, status, size) = match &r.driver {
            Some(d) => (label(&d.branch), label(&d.status), d.matching.len().to_string()),
            None => (String::new(), String::from("error"), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            c.instance_id,
            c.n,
            c.k,
            c.total,
            nu,
            c.main_bound,
            label(&c.main_status),
            c.fact_bound,
            label(&c.fact_status),
            branch,
            status,
            size
        )
        .unwrap();
    }
    out
}

pub fn reports_jsonl(records: &[SweepRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

/// Writes `reports.jsonl` and `summary.csv` into `dir`.
pub fn write_outputs(dir: &Path, records: &[SweepRecord]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_text(&dir.join("reports.jsonl"), &reports_jsonl(records)?)?;
    write_text(&dir.join("summary.csv"), &summary_csv(records))
}
