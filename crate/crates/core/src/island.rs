//! Exact r-island search: the cheapest way to cut `r` vertices off as
//! singletons, via triangle detection on a graph whose vertices are the
//! `r/3`-subsets of the input.
//!
//! Each triangle `(S1, S2, S3)` is searched under a guess of nine numbers
//! (internal weights, outgoing weights and pairwise weights of the three
//! subsets), which together fix the cut value. Guesses are tried in order of
//! that value, so the first value at which a triangle exists is optimal.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{KcutError, Result};
use crate::graph::{Graph, KCut, Weight};
use crate::matrix::{matmul, IntMatrix};
use crate::oracle::island_cost;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IslandPath {
    /// r = 1 or 2, solved by direct enumeration.
    Shortcut,
    /// r >= 3, solved by the subset-triangle search.
    Matmul,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IslandStats {
    pub path: IslandPath,
    /// Isolated dummy vertices added so the island count divides by 3.
    pub padding: usize,
    pub subsets: usize,
    pub classes: usize,
    pub guesses_examined: u64,
    /// `(C(t,2)+1)^3 (t n + 1)^3 (t^2 + 1)^3` for `t = r/3` after padding.
    pub guess_bound: u128,
    pub triangles: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IslandSolution {
    pub value: Weight,
    pub islands: Vec<usize>,
    pub stats: IslandStats,
}

/// A vertex subset with its internal and outgoing edge weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetProfile {
    pub subset: Vec<usize>,
    pub w_s: Weight,
    pub w_s_v: Weight,
}

impl SubsetProfile {
    pub fn new(g: &Graph, subset: Vec<usize>) -> SubsetProfile {
        let mut w_s = 0;
        let mut w_s_v = 0;
        for &v in &subset {
            for &(u, w) in g.neighbors(v) {
                if subset.contains(&u) {
                    w_s += w;
                } else {
                    w_s_v += w;
                }
            }
        }
        SubsetProfile {
            subset,
            w_s: w_s / 2,
            w_s_v,
        }
    }

    fn class(&self) -> (Weight, Weight) {
        (self.w_s, self.w_s_v)
    }
}

/// The nine guessed numbers for one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParameterGuess {
    pub w_s: [Weight; 3],
    pub w_v: [Weight; 3],
    /// Pairwise weights for (S1,S2), (S2,S3), (S3,S1).
    pub pair: [Weight; 3],
}

impl ParameterGuess {
    /// Cut value implied by the guess: every internal and pairwise edge once,
    /// plus the outgoing edges that leave the union.
    pub fn value(&self) -> Weight {
        let [a12, a23, a31] = self.pair;
        let [w1, w2, w3] = self.w_s;
        let [v1, v2, v3] = self.w_v;
        w1 + w2 + w3 + a12 + a23 + a31 + (v1 - a12 - a31) + (v2 - a12 - a23) + (v3 - a23 - a31)
    }

    fn feasible(&self) -> bool {
        let [a12, a23, a31] = self.pair;
        self.w_v[0] >= a12 + a31 && self.w_v[1] >= a12 + a23 && self.w_v[2] >= a23 + a31
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Guess-count bound for subset size `t` on `n` vertices.
pub fn guess_bound(t: usize, n: usize) -> u128 {
    let (t, n) = (t as u128, n as u128);
    ((binomial(t, 2) + 1) * (t * n + 1) * (t * t + 1)).pow(3)
}

/// Minimum r-island value and island set (ties: lexicographically smallest).
pub fn solve_r_island(g: &Graph, r: usize) -> Result<(Weight, Vec<usize>)> {
    solve_r_island_with_stats(g, r).map(|s| (s.value, s.islands))
}

type Candidate = (Weight, (usize, Vec<usize>), Vec<usize>);

pub fn solve_r_island_with_stats(g: &Graph, r: usize) -> Result<IslandSolution> {
    if !g.is_simple() {
        return Err(KcutError::NotSimple);
    }
    if r == 0 || r >= g.n() {
        return Err(KcutError::Domain(format!(
            "r = {r} outside 1..{} for n = {}",
            g.n(),
            g.n()
        )));
    }
    match r {
        1 | 2 => Ok(shortcut(g, r)),
        _ => triangle_search(g, r),
    }
}

fn shortcut(g: &Graph, r: usize) -> IslandSolution {
    let n = g.n();
    let (value, islands) = if r == 1 {
        let v = (0..n).min_by_key(|&v| (g.degree(v), v)).expect("n >= 2");
        (g.degree(v), vec![v])
    } else {
        (0..n)
            .tuple_combinations()
            .map(|(a, b)| (g.degree(a) + g.degree(b) - g.edge_weight(a, b), vec![a, b]))
            .min()
            .expect("n >= 3")
    };
    IslandSolution {
        value,
        islands,
        stats: IslandStats {
            path: IslandPath::Shortcut,
            padding: 0,
            subsets: 0,
            classes: 0,
            guesses_examined: 0,
            guess_bound: 0,
            triangles: 0,
        },
    }
}

fn pair_weight(g: &Graph, s: &[usize], t: &[usize]) -> Option<Weight> {
    if s.iter().any(|v| t.contains(v)) {
        return None;
    }
    Some(
        s.iter()
            .flat_map(|&a| t.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.edge_weight(a, b))
            .sum(),
    )
}

// Tie-break among equal-value triangles: more dummies first, then the
// lexicographically smallest set of real vertices.
fn candidate_key(set: &[usize], real: usize) -> (usize, Vec<usize>) {
    let reals: Vec<usize> = set.iter().copied().filter(|&v| v < real).collect();
    (set.len() - reals.len(), reals)
}

fn triangle_search(g: &Graph, r: usize) -> Result<IslandSolution> {
    let n = g.n();
    let padding = (3 - r % 3) % 3;
    let padded =
        Graph::from_weighted_edges(n + padding, g.edges().iter().map(|e| (e.u, e.v, e.w)))?;
    let t = (r + padding) / 3;

    let profiles: Vec<SubsetProfile> = (0..padded.n())
        .combinations(t)
        .map(|s| SubsetProfile::new(&padded, s))
        .collect();
    let mut classes: BTreeMap<(Weight, Weight), Vec<usize>> = BTreeMap::new();
    for (i, p) in profiles.iter().enumerate() {
        classes.entry(p.class()).or_default().push(i);
    }
    let keys: Vec<(Weight, Weight)> = classes.keys().copied().collect();
    let max_pair = (t * t) as Weight;

    let mut guesses: Vec<(Weight, [usize; 3], ParameterGuess)> = Vec::new();
    // classes in nondecreasing order: every triple of subsets can be listed so
    let c = keys.len();
    let triples = (0..c).flat_map(|a| (a..c).flat_map(move |b| (b..c).map(move |d| (a, b, d))));
    for (c1, c2, c3) in triples {
        let cls = [c1, c2, c3];
        for pair in (0..=max_pair)
            .cartesian_product(0..=max_pair)
            .cartesian_product(0..=max_pair)
            .map(|((a, b), c)| [a, b, c])
        {
            let guess = ParameterGuess {
                w_s: cls.map(|c| keys[c].0),
                w_v: cls.map(|c| keys[c].1),
                pair,
            };
            if guess.feasible() {
                guesses.push((guess.value(), cls, guess));
            }
        }
    }
    guesses.sort_by_key(|&(value, cls, guess)| (value, cls, guess.pair));

    let mut stats = IslandStats {
        path: IslandPath::Matmul,
        padding,
        subsets: profiles.len(),
        classes: keys.len(),
        guesses_examined: 0,
        guess_bound: guess_bound(t, padded.n()),
        triangles: 0,
    };
    // (value, tie-break key, island)
    let mut best: Option<Candidate> = None;
    for &(value, cls, guess) in &guesses {
        if best.as_ref().is_some_and(|(b, _, _)| value > *b) {
            break;
        }
        stats.guesses_examined += 1;
        let f: [&Vec<usize>; 3] = cls.map(|c| &classes[&keys[c]]);
        let adjacency = |x: &[usize], y: &[usize], want: Weight| -> Result<IntMatrix> {
            let mut m = IntMatrix::zeros(x.len(), y.len());
            for (i, &s) in x.iter().enumerate() {
                for (j, &u) in y.iter().enumerate() {
                    if pair_weight(&padded, &profiles[s].subset, &profiles[u].subset) == Some(want)
                    {
                        m.set(i, j, 1);
                    }
                }
            }
            Ok(m)
        };
        let a12 = adjacency(f[0], f[1], guess.pair[0])?;
        let a23 = adjacency(f[1], f[2], guess.pair[1])?;
        let a31 = adjacency(f[2], f[0], guess.pair[2])?;
        let b = matmul(&a12, &a23)?;
        for i in 0..f[0].len() {
            for j in 0..f[2].len() {
                if b.get(i, j) == 0 || a31.get(j, i) == 0 {
                    continue;
                }
                // recover every middle vertex so ties are settled exactly
                for m in 0..f[1].len() {
                    if a12.get(i, m) == 0 || a23.get(m, j) == 0 {
                        continue;
                    }
                    stats.triangles += 1;
                    let mut set: Vec<usize> = [f[0][i], f[1][m], f[2][j]]
                        .iter()
                        .flat_map(|&p| profiles[p].subset.iter().copied())
                        .collect();
                    set.sort_unstable();
                    let direct = island_cost(&padded, &set);
                    if direct != value {
                        return Err(KcutError::Invariant(format!(
                            "guessed value {value} but islands {set:?} cost {direct}"
                        )));
                    }
                    let key = candidate_key(&set, n);
                    let better = match &best {
                        None => true,
                        Some((_, bk, _)) => {
                            (std::cmp::Reverse(key.0), &key.1) < (std::cmp::Reverse(bk.0), &bk.1)
                        }
                    };
                    if better {
                        best = Some((value, key, set));
                    }
                }
            }
        }
    }
    if stats.guesses_examined as u128 > stats.guess_bound {
        return Err(KcutError::Invariant(
            "guess count exceeded its bound".into(),
        ));
    }
    let (value, (dummies, islands), _) =
        best.ok_or_else(|| KcutError::Invariant("no island triangle found".into()))?;
    if dummies != padding || islands.len() != r {
        return Err(KcutError::Invariant(format!(
            "optimum used {dummies} of {padding} dummy vertices"
        )));
    }
    Ok(IslandSolution {
        value,
        islands,
        stats,
    })
}

/// Counters accumulated over island extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExtendStats {
    pub compositions: u64,
    pub island_solves: u64,
    pub matmul_solves: u64,
}

/// Best k-cut obtained from a (k - i)-cut by carving `i` islands out of its
/// non-singleton parts. `None` when the parts cannot hold `i` islands.
pub fn extend_border(g: &Graph, border: &KCut, i: usize) -> Result<Option<KCut>> {
    extend_border_with_stats(g, border, i).map(|(cut, _)| cut)
}

pub fn extend_border_with_stats(
    g: &Graph,
    border: &KCut,
    i: usize,
) -> Result<(Option<KCut>, ExtendStats)> {
    let mut stats = ExtendStats::default();
    let cut = extend_border_cached(g, border, i, &mut IslandCache::default(), &mut stats)?;
    Ok((cut, stats))
}

/// Island solutions keyed by (vertex set of the host part, island count), in
/// the ids of the graph they were carved from.
#[derive(Debug, Default)]
pub struct IslandCache {
    solved: HashMap<(Vec<usize>, usize), (Weight, Vec<usize>)>,
}

impl IslandCache {
    pub fn len(&self) -> usize {
        self.solved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solved.is_empty()
    }
}

/// [`extend_border`] sharing island solutions across calls on the same graph.
pub fn extend_border_cached(
    g: &Graph,
    border: &KCut,
    i: usize,
    cache: &mut IslandCache,
    stats: &mut ExtendStats,
) -> Result<Option<KCut>> {
    if i == 0 {
        return Ok(Some(border.clone()));
    }
    let parts = border.components();
    let hosts: Vec<usize> = (0..parts.len()).filter(|&p| parts[p].len() >= 2).collect();
    let room: usize = hosts.iter().map(|&p| parts[p].len() - 1).sum();
    if room < i {
        return Ok(None);
    }

    let mut best: Option<KCut> = None;
    let mut counts = vec![0usize; hosts.len()];
    let mut compositions = Vec::new();
    compose(&hosts, &parts, i, 0, &mut counts, &mut compositions);
    let canon = border.canonical_labels();
    for counts in compositions {
        stats.compositions += 1;
        let mut labels = canon.clone();
        let mut next = border.k();
        let mut expected = border.value();
        for (&h, &c) in hosts.iter().zip(&counts) {
            if c == 0 {
                continue;
            }
            let key = (parts[h].clone(), c);
            if !cache.solved.contains_key(&key) {
                let (sub, back) = g.induced_subgraph(&parts[h]);
                let sol = solve_r_island_with_stats(&sub, c)?;
                stats.island_solves += 1;
                if sol.stats.path == IslandPath::Matmul {
                    stats.matmul_solves += 1;
                }
                let islands = sol.islands.iter().map(|&v| back[v]).collect();
                cache.solved.insert(key.clone(), (sol.value, islands));
            }
            let (value, islands) = &cache.solved[&key];
            expected += value;
            for &v in islands {
                labels[v] = next;
                next += 1;
            }
        }
        let cut = KCut::new(g, labels, next)?;
        if cut.value() != expected {
            return Err(KcutError::Invariant(format!(
                "extended cut recomputes to {} but accounting gave {expected}",
                cut.value()
            )));
        }
        if best.as_ref().is_none_or(|b| cut.rank_cmp(b).is_lt()) {
            best = Some(cut);
        }
    }
    Ok(best.map(KCut::canonicalize))
}

fn compose(
    hosts: &[usize],
    parts: &[Vec<usize>],
    left: usize,
    at: usize,
    counts: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if at == hosts.len() {
        if left == 0 {
            out.push(counts.clone());
        }
        return;
    }
    let cap = parts[hosts[at]].len() - 1;
    for c in 0..=left.min(cap) {
        counts[at] = c;
        compose(hosts, parts, left - c, at + 1, counts, out);
    }
    counts[at] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::{brute_force_min_kcut, brute_force_r_island};
    use proptest::prelude::*;

    #[test]
    fn star_three_leaves() {
        let sol = solve_r_island_with_stats(&star(4), 3).unwrap();
        assert_eq!((sol.value, sol.islands), (3, vec![1, 2, 3]));
        assert_eq!(sol.stats.path, IslandPath::Matmul);
    }

    #[test]
    fn path_endpoint() {
        assert_eq!(solve_r_island(&path(3), 1).unwrap(), (1, vec![0]));
    }

    #[test]
    fn k6_three_islands() {
        assert_eq!(
            solve_r_island(&complete(6), 3).unwrap(),
            (12, vec![0, 1, 2])
        );
        assert_eq!(brute_force_r_island(&complete(6), 3).unwrap().0, 12);
    }

    #[test]
    fn k4_three_islands() {
        assert_eq!(solve_r_island(&complete(4), 3).unwrap(), (6, vec![0, 1, 2]));
    }

    #[test]
    fn padding_is_stripped() {
        let g = cycle(8);
        for r in [4, 5] {
            let sol = solve_r_island_with_stats(&g, r).unwrap();
            assert_eq!(sol.stats.padding, 6 - r);
            assert_eq!(sol.islands.len(), r);
            assert_eq!(
                (sol.value, sol.islands),
                brute_force_r_island(&g, r).unwrap()
            );
        }
    }

    #[test]
    fn guesses_respect_bound() {
        let sol = solve_r_island_with_stats(&cycle(9), 3).unwrap();
        assert!(sol.stats.guesses_examined > 0);
        assert!(u128::from(sol.stats.guesses_examined) <= sol.stats.guess_bound);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_r_island(&path(3), 0).is_err());
        assert!(solve_r_island(&path(3), 3).is_err());
        let w = Graph::from_weighted_edges(3, [(0, 1, 2), (1, 2, 1)]).unwrap();
        assert_eq!(solve_r_island(&w, 1), Err(KcutError::NotSimple));
    }

    #[test]
    fn claim_value_matches_formula() {
        let guess = ParameterGuess {
            w_s: [0, 1, 0],
            w_v: [3, 2, 4],
            pair: [1, 0, 2],
        };
        // 1 internal + 3 pairwise + outgoing (0 + 1 + 2)
        assert_eq!(guess.value(), 7);
    }

    #[test]
    fn extend_identity_and_infeasible() {
        let g = path(4);
        let cut = KCut::new(&g, vec![0, 0, 1, 1], 2).unwrap();
        assert_eq!(extend_border(&g, &cut, 0).unwrap(), Some(cut.clone()));
        assert_eq!(extend_border(&g, &cut, 3).unwrap(), None);
    }

    #[test]
    fn extend_bridge_cut_by_one_island() {
        let g = cliques_bridge(5, 2, 1);
        let parts = vec![(0..5).collect::<Vec<_>>(), (5..10).collect()];
        let cut = KCut::from_parts(&g, &parts).unwrap();
        assert_eq!(cut.value(), 1);
        let out = extend_border(&g, &cut, 1).unwrap().unwrap();
        assert_eq!(out.k(), 3);
        assert_eq!(out.value(), 5);
        assert_eq!(out.value(), brute_force_min_kcut(&g, 3).unwrap().value());
        // every single island costs 4 on top of the bridge, endpoints included
        assert_eq!(out.components().iter().filter(|p| p.len() == 1).count(), 1);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (4usize..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let edges = (0..n)
                    .tuple_combinations()
                    .zip(bits)
                    .filter(|(_, b)| *b)
                    .map(|(e, _)| e);
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_oracle(g in arb_graph(9), r in 1usize..=5) {
            prop_assume!(r < g.n());
            prop_assert_eq!(solve_r_island(&g, r).unwrap(), brute_force_r_island(&g, r).unwrap());
        }
    }
}
