//! Randomized border discovery: weighted edge contraction down to `tau`
//! vertices followed by a uniformly random labelling of what is left.
//!
//! Every trial draws from its own ChaCha8 stream seeded with
//! `seed ^ trial_index`, so results do not depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KcutError, Result};
use crate::graph::{contract_by_map, ContractionMap, Graph, KCut};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorderParams {
    /// Number of parts in each listed cut.
    pub s: usize,
    pub beta: f64,
    /// Contraction stops at this many vertices.
    pub tau: usize,
    pub trials: u64,
    pub seed: u64,
}

impl BorderParams {
    /// `tau = ceil(8 beta k^2 + 2k)` and `trials = min(cap, ceil(n^(beta k) ln n))`.
    pub fn derive(k: usize, s: usize, beta: f64, n: usize, cap: u64, seed: u64) -> BorderParams {
        let k_f = k as f64;
        let tau = (8.0 * beta * k_f * k_f + 2.0 * k_f).ceil() as usize;
        let n_f = (n.max(2)) as f64;
        let want = (n_f.powf(beta * k_f) * n_f.ln()).ceil();
        let trials = if want >= cap as f64 { cap } else { want as u64 };
        BorderParams {
            s,
            beta,
            tau,
            trials: trials.max(1),
            seed,
        }
    }
}

/// Contracts random edges, chosen with probability proportional to weight,
/// until at most `tau` vertices (or no edges) remain.
pub fn contract_random<R: Rng>(
    g: &Graph,
    tau: usize,
    rng: &mut R,
) -> Result<(Graph, ContractionMap)> {
    let mut uf = UnionFind::new(g.n());
    let mut live: Vec<(usize, usize, u64)> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
    let mut vertices = g.n();
    let mut prefix: Vec<u64> = Vec::with_capacity(live.len());
    while vertices > tau {
        live.retain(|&(u, v, _)| !uf.same(u, v));
        if live.is_empty() {
            break;
        }
        prefix.clear();
        let mut total = 0u64;
        for &(_, _, w) in &live {
            total += w;
            prefix.push(total);
        }
        let pick = rng.gen_range(0..total);
        let at = prefix.partition_point(|&p| p <= pick);
        let (u, v, _) = live[at];
        uf.union(u, v);
        vertices -= 1;
    }
    let map = ContractionMap::new(uf.dense_labels(), uf.set_count())?;
    let h = contract_by_map(g, &map)?;
    Ok((h, map))
}

/// Independent uniform labels in `0..s`, retried until every label is used
/// (at most `100 s^2` attempts).
pub fn random_s_cut<R: Rng>(g: &Graph, s: usize, rng: &mut R) -> Option<KCut> {
    let n = g.n();
    if s == 0 || s > n {
        return None;
    }
    if s == 1 {
        return KCut::new(g, vec![0; n], 1).ok();
    }
    let mut labels = vec![0; n];
    for _ in 0..100 * s * s {
        let mut seen = vec![false; s];
        for l in labels.iter_mut() {
            *l = rng.gen_range(0..s);
            seen[*l] = true;
        }
        if seen.iter().all(|&b| b) {
            return KCut::new(g, labels, s).ok();
        }
    }
    None
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial)
}

/// One contraction plus guess, lifted back to `g`. Canonical labels.
fn trial(g: &Graph, params: &BorderParams, t: u64) -> Result<Option<Vec<usize>>> {
    let mut rng = trial_rng(params.seed, t);
    let (h, map) = contract_random(g, params.tau, &mut rng)?;
    Ok(random_s_cut(&h, params.s, &mut rng)
        .map(|cut| crate::graph::canonical_labels(&map.lift_labels(cut.labels()))))
}

/// Distinct s-cuts found over `params.trials` seeded trials, sorted by value
/// and then canonical labels.
pub fn enumerate_borders(g: &Graph, params: &BorderParams) -> Result<Vec<KCut>> {
    if params.s == 0 || params.s > g.n() {
        return Err(KcutError::Domain(format!(
            "s = {} outside 1..={}",
            params.s,
            g.n()
        )));
    }
    if params.s == 1 {
        // every trial returns the same single-part cut
        return Ok(vec![KCut::new(g, vec![0; g.n()], 1)?]);
    }
    let found: Vec<Option<Vec<usize>>> = (0..params.trials)
        .into_par_iter()
        .map(|t| trial(g, params, t))
        .collect::<Result<_>>()?;
    let mut labels: Vec<Vec<usize>> = found.into_iter().flatten().collect();
    labels.sort_unstable();
    labels.dedup();
    let mut cuts: Vec<KCut> = labels
        .into_iter()
        .map(|l| KCut::new(g, l, params.s))
        .collect::<Result<_>>()?;
    cuts.sort_by(|a, b| {
        a.value()
            .cmp(&b.value())
            .then_with(|| a.labels().cmp(b.labels()))
    });
    Ok(cuts)
}

/// True when contraction under `map` never merged vertices that `labels`
/// separates, i.e. the cut survived.
pub fn cut_survives(map: &ContractionMap, labels: &[usize]) -> bool {
    let mut host = vec![usize::MAX; map.target_len()];
    map.as_slice().iter().zip(labels).all(|(&t, &l)| {
        if host[t] == usize::MAX {
            host[t] = l;
        }
        host[t] == l
    })
}

/// Number of `trials` seeded contractions to `tau` in which `labels`
/// survives.
pub fn survival_count(
    g: &Graph,
    labels: &[usize],
    tau: usize,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            contract_random(g, tau, &mut rng).map(|(_, map)| cut_survives(&map, labels))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().filter(|&h| h).count() as u64)
}
