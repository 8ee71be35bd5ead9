//! Built-in benchmark suites comparing the solver against an oracle.
//!
//! * `small`: random and structured graphs with n <= 12, checked against
//!   exhaustive enumeration.
//! * `planted`: clustered graphs with n <= 40 whose clusters are certified
//!   unsplittable, so the oracle only enumerates the contracted graph.
//! * `stress`: larger graphs, timing only.

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KcutError, Result};
use crate::generate::{gen_instance, Instance, InstanceKind};
use crate::graph::{Graph, KCut, Weight};
use crate::oracle::{brute_force_min_kcut, certified_min_kcuts, sv_2approx};
use crate::pipeline::{min_kcut, Branch, Method, PipelineConfig};

/// Seeds tried per planted case before giving up on certification.
const PLANTED_ATTEMPTS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Small,
    Planted,
    Stress,
}

impl FromStr for Suite {
    type Err = KcutError;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "small" => Ok(Suite::Small),
            "planted" => Ok(Suite::Planted),
            "stress" => Ok(Suite::Stress),
            other => Err(KcutError::Domain(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub name: String,
    pub kind: InstanceKind,
    pub seed: u64,
    pub instance: Instance,
    pub k: usize,
}

fn case(kind: InstanceKind, seed: u64, k: usize) -> Result<SuiteCase> {
    let instance = gen_instance(&kind, seed)?;
    let name = match &kind {
        InstanceKind::Gnp { n, p } => format!("gnp_n{n}_p{p}"),
        InstanceKind::Planted {
            k, size, islands, ..
        } => format!("planted_c{k}x{size}_i{islands}"),
        InstanceKind::Cycle { n } => format!("cycle_{n}"),
        InstanceKind::CliquesBridge {
            size,
            count,
            bridges,
        } => format!("cliques_{count}x{size}_b{bridges}"),
    };
    Ok(SuiteCase {
        name: format!("{name}_k{k}_s{seed}"),
        kind,
        seed,
        instance,
        k,
    })
}

/// Planted instance whose clusters pass the certificate against the
/// 2-approximation, trying successive seeds.
pub fn certified_planted(
    clusters: usize,
    size: usize,
    islands: usize,
    k: usize,
    seed: u64,
) -> Result<SuiteCase> {
    let kind = InstanceKind::Planted {
        k: clusters,
        size,
        p_in: 0.85,
        p_out: 0.02,
        islands,
    };
    for attempt in 0..PLANTED_ATTEMPTS {
        let c = case(kind.clone(), seed.wrapping_add(attempt), k)?;
        let g = &c.instance.graph;
        let upper = sv_2approx(g, k)?.value();
        let groups = &c.instance.planted.as_ref().expect("planted").clusters;
        if upper > 0 && certified_min_kcuts(g, k, groups, upper, 14)?.is_some() {
            return Ok(c);
        }
    }
    Err(KcutError::Invariant(format!(
        "no certifiable planted instance near seed {seed}"
    )))
}

pub fn suite_cases(suite: Suite, seed: u64) -> Result<Vec<SuiteCase>> {
    let mut cases = Vec::new();
    let mut next = 0u64;
    let mut seed_for = || {
        next += 1;
        seed.wrapping_mul(1_000_003).wrapping_add(next)
    };
    match suite {
        Suite::Small => {
            for n in [6, 8, 10, 12] {
                for p in [0.3, 0.5, 0.8] {
                    for k in 2..=4 {
                        cases.push(case(InstanceKind::Gnp { n, p }, seed_for(), k)?);
                    }
                }
            }
            for n in [6, 8, 11] {
                for k in 2..=3 {
                    cases.push(case(InstanceKind::Cycle { n }, 0, k)?);
                }
            }
            for (size, count, bridges) in [(5, 2, 1), (4, 3, 1), (3, 4, 2)] {
                for k in 2..=4 {
                    let kind = InstanceKind::CliquesBridge {
                        size,
                        count,
                        bridges,
                    };
                    cases.push(case(kind, 0, k)?);
                }
            }
        }
        Suite::Planted => {
            for j in 0..20usize {
                let k = 2 + j % 2;
                let size = 8 + (j / 2) % 5;
                let islands = j % 3;
                cases.push(certified_planted(k, size, islands, k, seed_for())?);
            }
        }
        Suite::Stress => {
            for (n, p) in [(40, 0.9), (60, 0.9)] {
                for k in 2..=3 {
                    cases.push(case(InstanceKind::Gnp { n, p }, seed_for(), k)?);
                }
            }
            for k in 2..=3 {
                let kind = InstanceKind::Planted {
                    k: 3,
                    size: 20,
                    p_in: 0.9,
                    p_out: 0.02,
                    islands: 2,
                };
                cases.push(case(kind, seed_for(), k)?);
            }
        }
    }
    Ok(cases)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub index: usize,
    pub name: String,
    pub n: usize,
    pub m: Weight,
    pub k: usize,
    pub branch: Branch,
    pub method: Method,
    pub value: Weight,
    pub oracle: Option<Weight>,
    pub agree: Option<bool>,
    pub solve_ms: f64,
    pub oracle_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub suite: Suite,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn disagreements(&self) -> usize {
        self.rows.iter().filter(|r| r.agree == Some(false)).count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "index",
            "name",
            "n",
            "m",
            "k",
            "branch",
            "method",
            "value",
            "oracle",
            "agree",
            "solve_ms",
            "oracle_ms",
        ])
        .map_err(csv_err)?;
        let opt = |x: Option<String>| x.unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.index.to_string(),
                r.name.clone(),
                r.n.to_string(),
                r.m.to_string(),
                r.k.to_string(),
                json_word(&r.branch),
                json_word(&r.method),
                r.value.to_string(),
                opt(r.oracle.map(|v| v.to_string())),
                opt(r.agree.map(|v| v.to_string())),
                format!("{:.3}", r.solve_ms),
                opt(r.oracle_ms.map(|v| format!("{v:.3}"))),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| KcutError::Invariant(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

fn csv_err(e: csv::Error) -> KcutError {
    KcutError::Invariant(format!("csv: {e}"))
}

fn json_word<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// Oracle value for a case, recomputed on the raw graph. `None` for suites
/// without an oracle.
fn oracle_value(suite: Suite, c: &SuiteCase) -> Result<Option<Weight>> {
    let g = &c.instance.graph;
    let cut = match suite {
        Suite::Small => brute_force_min_kcut(g, c.k)?,
        Suite::Planted => {
            let upper = sv_2approx(g, c.k)?.value();
            let groups = &c.instance.planted.as_ref().expect("planted").clusters;
            let cuts = certified_min_kcuts(g, c.k, groups, upper, 14)?
                .ok_or_else(|| KcutError::Invariant(format!("{} lost its certificate", c.name)))?;
            cuts.into_iter().next().expect("at least one minimum cut")
        }
        Suite::Stress => return Ok(None),
    };
    Ok(Some(recompute(g, &cut)?))
}

fn recompute(g: &Graph, cut: &KCut) -> Result<Weight> {
    Ok(KCut::new(g, cut.labels().to_vec(), cut.k())?.value())
}

/// Runs every case of `suite` through the solver (and oracle, where there is
/// one). Rows run concurrently and come back in case order.
pub fn run_suite(suite: Suite, seed: u64, cfg: &PipelineConfig) -> Result<BenchReport> {
    let cases = suite_cases(suite, seed)?;
    let rows = cases
        .par_iter()
        .enumerate()
        .map(|(index, c)| {
            let g = &c.instance.graph;
            let cfg = PipelineConfig {
                seed: cfg.seed ^ index as u64,
                ..cfg.clone()
            };
            let t0 = Instant::now();
            let report = min_kcut(g, c.k, &cfg)?;
            let solve_ms = t0.elapsed().as_secs_f64() * 1e3;
            let value = recompute(g, &report.cut)?;
            let t1 = Instant::now();
            let oracle = oracle_value(suite, c)?;
            let oracle_ms = oracle.map(|_| t1.elapsed().as_secs_f64() * 1e3);
            log::info!("{}: value {value}, oracle {oracle:?}", c.name);
            Ok(BenchRow {
                index,
                name: c.name.clone(),
                n: g.n(),
                m: g.total_weight(),
                k: c.k,
                branch: report.branch,
                method: report.method,
                value,
                oracle,
                agree: oracle.map(|o| o == value),
                solve_ms,
                oracle_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport { suite, seed, rows })
}
