//! End-to-end solver.
//!
//! A greedy 2-approximation `lambda_bar` decides the route. Small values go to
//! an exact search. Otherwise the graph is vertex-sparsified and contracted,
//! and for each island count `i` the contracted graph is searched for
//! `(k - i)`-cut borders, each of which is extended by `i` islands. The
//! approximate cut is kept as a floor, so the answer is never worse than it.

use std::time::Instant;

use serde::Serialize;

use crate::border_finder::{enumerate_borders, BorderParams};
use crate::error::{KcutError, Result};
use crate::graph::{contract, Graph, KCut, Weight};
use crate::island::{extend_border_cached, ExtendStats, IslandCache};
use crate::kt::{kt_partition, PartitionReport};
use crate::oracle::{
    branch_and_bound_min_kcut, brute_force_min_kcut_with_limit, sv_2approx,
    zero_cut_from_components, DEFAULT_KCUT_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// At least `k` connected components; a zero cut exists.
    Components,
    Exact,
    Sparsify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ZeroCut,
    BruteForce,
    BranchAndBound,
    /// Border search plus island extension.
    Pipeline,
    /// The border search did not beat the 2-approximation.
    Approximation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Exponent knob of the exact route: taken when
    /// `lambda_bar <= threshold_const * n^(1/(t+1))`.
    pub t: u32,
    pub threshold_const: f64,
    pub trial_cap: u64,
    /// Largest n handed to exhaustive enumeration on the exact route.
    pub oracle_n_limit: usize,
    pub seed: u64,
    pub force_branch: Option<Branch>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            t: 2,
            threshold_const: 10.0,
            trial_cap: 100_000,
            oracle_n_limit: DEFAULT_KCUT_LIMIT,
            seed: 0,
            force_branch: None,
        }
    }
}

/// Border search for one island count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundStats {
    pub i: usize,
    pub s: usize,
    pub beta: f64,
    pub tau: usize,
    pub trials: u64,
    pub candidates: usize,
    pub extended: usize,
    pub best_value: Option<Weight>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub approx_ms: f64,
    pub exact_ms: f64,
    pub partition_ms: f64,
    pub borders_ms: f64,
    pub islands_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveStats {
    pub n: usize,
    pub m: Weight,
    pub lambda_bar: Option<Weight>,
    pub threshold: Option<f64>,
    pub partition: Option<PartitionReport>,
    pub contracted_n: Option<usize>,
    pub rounds: Vec<RoundStats>,
    pub islands: ExtendStats,
    /// True when the sparsify route returned the approximate cut because no
    /// extended border was at least as good.
    pub fallback: bool,
    pub timings: Timings,
}

/// Serialized as `{"k", "value", "components", "method", "branch", "seed", "stats"}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub k: usize,
    pub value: Weight,
    pub components: Vec<Vec<usize>>,
    pub method: Method,
    pub branch: Branch,
    pub seed: u64,
    pub stats: SolveStats,
    #[serde(skip)]
    pub cut: KCut,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// `beta = 1 - (1 - 2/log2 n) i / k`, capped at 1 for tiny `n`.
pub fn beta_for(n: usize, i: usize, k: usize) -> f64 {
    let log_n = (n.max(2) as f64).log2();
    (1.0 - (1.0 - 2.0 / log_n) * i as f64 / k as f64).min(1.0)
}

/// Minimum k-cut of simple `g`.
pub fn min_kcut(g: &Graph, k: usize, cfg: &PipelineConfig) -> Result<SolveReport> {
    let start = Instant::now();
    if !g.is_simple() {
        return Err(KcutError::NotSimple);
    }
    if cfg.t == 0 || cfg.threshold_const <= 0.0 {
        return Err(KcutError::Domain(
            "t must be >= 1 and threshold_const > 0".into(),
        ));
    }
    let mut stats = SolveStats {
        n: g.n(),
        m: g.total_weight(),
        lambda_bar: None,
        threshold: None,
        partition: None,
        contracted_n: None,
        rounds: Vec::new(),
        islands: ExtendStats::default(),
        fallback: false,
        timings: Timings::default(),
    };
    let finish = |cut: KCut, method: Method, branch: Branch, mut stats: SolveStats| {
        stats.timings.total_ms = ms(start);
        let cut = cut.canonicalize();
        if cut.k() != k {
            return Err(KcutError::Invariant(format!("returned a {}-cut", cut.k())));
        }
        Ok(SolveReport {
            k,
            value: cut.value(),
            components: cut.components(),
            method,
            branch,
            seed: cfg.seed,
            stats,
            cut,
        })
    };

    if let Some(cut) = zero_cut_from_components(g, k)? {
        log::info!("{} components >= k = {k}; zero cut", k);
        return finish(cut, Method::ZeroCut, Branch::Components, stats);
    }

    let t0 = Instant::now();
    let approx = sv_2approx(g, k)?;
    let lambda_bar = approx.value();
    let threshold = cfg.threshold_const * (g.n() as f64).powf(1.0 / (cfg.t as f64 + 1.0));
    stats.timings.approx_ms = ms(t0);
    stats.lambda_bar = Some(lambda_bar);
    stats.threshold = Some(threshold);
    let branch = cfg
        .force_branch
        .unwrap_or(if lambda_bar as f64 <= threshold {
            Branch::Exact
        } else {
            Branch::Sparsify
        });
    log::info!("lambda_bar = {lambda_bar}, threshold = {threshold:.2}, branch = {branch:?}");

    match branch {
        Branch::Components | Branch::Exact => {
            let t0 = Instant::now();
            let (cut, method) = if g.n() <= cfg.oracle_n_limit {
                (
                    brute_force_min_kcut_with_limit(g, k, cfg.oracle_n_limit)?,
                    Method::BruteForce,
                )
            } else {
                (
                    branch_and_bound_min_kcut(g, k, Some(approx))?,
                    Method::BranchAndBound,
                )
            };
            stats.timings.exact_ms = ms(t0);
            finish(cut, method, Branch::Exact, stats)
        }
        Branch::Sparsify => {
            let (cut, from_search) = sparsify_route(g, k, cfg, approx, &mut stats)?;
            stats.fallback = !from_search;
            let method = if from_search {
                Method::Pipeline
            } else {
                Method::Approximation
            };
            finish(cut, method, Branch::Sparsify, stats)
        }
    }
}

/// Returns the best cut and whether it came from the border search.
fn sparsify_route(
    g: &Graph,
    k: usize,
    cfg: &PipelineConfig,
    approx: KCut,
    stats: &mut SolveStats,
) -> Result<(KCut, bool)> {
    let lambda_bar = approx.value();
    let t0 = Instant::now();
    let kt = kt_partition(g, k, lambda_bar)?;
    let (contracted, map) = contract(g, &kt.partition)?;
    stats.timings.partition_ms = ms(t0);
    stats.partition = Some(kt.report);
    stats.contracted_n = Some(contracted.n());
    log::info!("contracted to {} vertices", contracted.n());

    let mut cache = IslandCache::default();
    let mut found: Option<KCut> = None;
    for i in 0..k {
        let s = k - i;
        if s > contracted.n() {
            continue;
        }
        let beta = beta_for(g.n(), i, k);
        let params = BorderParams::derive(
            k,
            s,
            beta,
            g.n(),
            cfg.trial_cap,
            cfg.seed ^ ((i as u64) << 48),
        );
        let t1 = Instant::now();
        let borders = enumerate_borders(&contracted, &params)?;
        stats.timings.borders_ms += ms(t1);

        let t2 = Instant::now();
        let mut round = RoundStats {
            i,
            s,
            beta,
            tau: params.tau,
            trials: params.trials,
            candidates: borders.len(),
            extended: 0,
            best_value: None,
        };
        for border in &borders {
            // extension only adds weight, so a border dearer than the current
            // best (or the approximation) cannot win
            let bar = found
                .as_ref()
                .map_or(lambda_bar, |f| f.value().min(lambda_bar));
            if border.value() > bar {
                break;
            }
            let lifted = KCut::new(g, map.lift_labels(border.labels()), s)?;
            round.extended += 1;
            if let Some(cut) = extend_border_cached(g, &lifted, i, &mut cache, &mut stats.islands)?
            {
                if round.best_value.is_none_or(|b| cut.value() < b) {
                    round.best_value = Some(cut.value());
                }
                if found.as_ref().is_none_or(|f| cut.rank_cmp(f).is_lt()) {
                    found = Some(cut);
                }
            }
        }
        stats.timings.islands_ms += ms(t2);
        log::debug!("round {:?}", round);
        stats.rounds.push(round);
    }
    Ok(match found {
        Some(cut) if cut.value() <= lambda_bar => (cut, true),
        _ => (approx, false),
    })
}
