//! Exact reference solvers and the classical polynomial subroutines.
//!
//! The brute-force enumerators here are the ground truth every other stage is
//! tested against, so they deliberately avoid sharing code paths with the
//! solvers they check.

use itertools::Itertools;

use crate::error::{KcutError, Result};
use crate::graph::{connected_components, contract, Graph, KCut, VertexPartition, Weight};

pub const DEFAULT_KCUT_LIMIT: usize = 14;
pub const DEFAULT_ISLAND_LIMIT: usize = 18;

fn check_k(g: &Graph, k: usize) -> Result<()> {
    if k < 2 {
        return Err(KcutError::Domain(format!("k = {k} must be at least 2")));
    }
    if k > g.n() {
        return Err(KcutError::Domain(format!("k = {k} exceeds n = {}", g.n())));
    }
    Ok(())
}

/// Walks every restricted growth string with exactly `k` distinct labels in
/// lexicographic order, reporting each complete labelling with its value.
struct PartitionWalk<'a, F: FnMut(&[usize], Weight)> {
    k: usize,
    lower: Vec<Vec<(usize, Weight)>>,
    labels: Vec<usize>,
    visit: &'a mut F,
}

impl<F: FnMut(&[usize], Weight)> PartitionWalk<'_, F> {
    fn run(&mut self, v: usize, used: usize, value: Weight) {
        let n = self.labels.len();
        if v == n {
            if used == self.k {
                (self.visit)(&self.labels, value);
            }
            return;
        }
        let top = (used + 1).min(self.k);
        for l in 0..top {
            let now_used = used.max(l + 1);
            if n - v - 1 < self.k - now_used {
                continue;
            }
            let added: Weight = self.lower[v]
                .iter()
                .filter(|&&(u, _)| self.labels[u] != l)
                .map(|&(_, w)| w)
                .sum();
            self.labels[v] = l;
            self.run(v + 1, now_used, value + added);
        }
    }
}

fn walk_partitions<F: FnMut(&[usize], Weight)>(g: &Graph, k: usize, visit: &mut F) {
    let lower = (0..g.n())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&(u, _)| u < v)
                .collect()
        })
        .collect();
    let mut walk = PartitionWalk {
        k,
        lower,
        labels: vec![0; g.n()],
        visit,
    };
    walk.run(0, 0, 0);
}

/// Minimum k-cut by exhaustive enumeration, default size limit.
pub fn brute_force_min_kcut(g: &Graph, k: usize) -> Result<KCut> {
    brute_force_min_kcut_with_limit(g, k, DEFAULT_KCUT_LIMIT)
}

/// Minimum k-cut over all set partitions into exactly `k` blocks. Ties go to
/// the lexicographically smallest canonical label string.
pub fn brute_force_min_kcut_with_limit(g: &Graph, k: usize, limit: usize) -> Result<KCut> {
    if g.n() > limit {
        return Err(KcutError::TooLarge { n: g.n(), limit });
    }
    check_k(g, k)?;
    let mut best: Option<(Weight, Vec<usize>)> = None;
    walk_partitions(g, k, &mut |labels, value| {
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, labels.to_vec()));
        }
    });
    let (_, labels) = best.expect("k <= n guarantees a partition");
    KCut::new(g, labels, k)
}

/// Every minimum k-cut, as canonical labellings in lexicographic order.
pub fn all_min_kcuts(g: &Graph, k: usize, limit: usize) -> Result<Vec<KCut>> {
    if g.n() > limit {
        return Err(KcutError::TooLarge { n: g.n(), limit });
    }
    check_k(g, k)?;
    let mut best = Weight::MAX;
    let mut found: Vec<Vec<usize>> = Vec::new();
    walk_partitions(g, k, &mut |labels, value| {
        if value < best {
            best = value;
            found.clear();
        }
        if value == best {
            found.push(labels.to_vec());
        }
    });
    found.into_iter().map(|l| KCut::new(g, l, k)).collect()
}

/// Weight of edges touching `islands` (each island its own part, the rest
/// one part). Internal island edges count once.
pub fn island_cost(g: &Graph, islands: &[usize]) -> Weight {
    let mut mark = vec![false; g.n()];
    for &v in islands {
        mark[v] = true;
    }
    g.edges()
        .iter()
        .filter(|e| mark[e.u] || mark[e.v])
        .map(|e| e.w)
        .sum()
}

/// Optimal r-island set by enumerating all r-subsets in lexicographic order.
pub fn brute_force_r_island(g: &Graph, r: usize) -> Result<(Weight, Vec<usize>)> {
    brute_force_r_island_with_limit(g, r, DEFAULT_ISLAND_LIMIT)
}

pub fn brute_force_r_island_with_limit(
    g: &Graph,
    r: usize,
    limit: usize,
) -> Result<(Weight, Vec<usize>)> {
    if g.n() > limit {
        return Err(KcutError::TooLarge { n: g.n(), limit });
    }
    if r == 0 || r >= g.n() {
        return Err(KcutError::Domain(format!(
            "r = {r} outside 1..{} for n = {}",
            g.n(),
            g.n()
        )));
    }
    let mut best: Option<(Weight, Vec<usize>)> = None;
    for subset in (0..g.n()).combinations(r) {
        let value = island_cost(g, &subset);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, subset));
        }
    }
    Ok(best.expect("r < n"))
}

/// Global minimum cut (Stoer-Wagner). Returns the value and one side, sorted.
/// A disconnected graph yields 0 with its first component as the side.
pub fn stoer_wagner_mincut(g: &Graph) -> Result<(Weight, Vec<usize>)> {
    let n = g.n();
    if n < 2 {
        return Err(KcutError::Domain(
            "minimum cut needs at least two vertices".into(),
        ));
    }
    let comps = connected_components(g);
    if comps.len() > 1 {
        return Ok((0, comps.blocks()[0].clone()));
    }

    let mut w = vec![vec![0 as Weight; n]; n];
    for e in g.edges() {
        w[e.u][e.v] = e.w;
        w[e.v][e.u] = e.w;
    }
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(Weight, Vec<usize>)> = None;

    while active.len() > 1 {
        let mut key = vec![0 as Weight; n];
        let mut added = vec![false; n];
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let pick = active
                .iter()
                .copied()
                .filter(|&v| !added[v])
                .max_by(|&a, &b| key[a].cmp(&key[b]).then(b.cmp(&a)))
                .expect("unadded vertex remains");
            added[pick] = true;
            if step == active.len() - 1 {
                let phase = key[pick];
                if best.as_ref().is_none_or(|(b, _)| phase < *b) {
                    let mut side = members[pick].clone();
                    side.sort_unstable();
                    best = Some((phase, side));
                }
                last = pick;
            } else {
                prev = pick;
                for &v in &active {
                    if !added[v] {
                        key[v] += w[pick][v];
                    }
                }
            }
        }
        // merge `last` into `prev`
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &v in &active {
            if v != prev && v != last {
                w[prev][v] += w[last][v];
                w[v][prev] = w[prev][v];
            }
        }
        active.retain(|&v| v != last);
    }
    Ok(best.expect("n >= 2"))
}

/// Groups components into `k` parts when there are at least `k` of them:
/// the first `k - 1` components stay separate and the rest share a part.
pub fn zero_cut_from_components(g: &Graph, k: usize) -> Result<Option<KCut>> {
    check_k(g, k)?;
    let comps = connected_components(g);
    if comps.len() < k {
        return Ok(None);
    }
    let labels: Vec<usize> = comps.block_of().into_iter().map(|c| c.min(k - 1)).collect();
    KCut::new(g, labels, k).map(Some)
}

/// Greedy splitting 2-approximation: repeatedly apply the cheapest minimum
/// cut among the current parts' induced subgraphs until there are `k` parts.
pub fn sv_2approx(g: &Graph, k: usize) -> Result<KCut> {
    check_k(g, k)?;
    let mut parts: Vec<Vec<usize>> = vec![(0..g.n()).collect()];
    let mut split_cache: Vec<Option<(Weight, Vec<usize>)>> = vec![None];
    let mut total: Weight = 0;

    while parts.len() < k {
        let mut choice: Option<(Weight, usize)> = None;
        for (i, part) in parts.iter().enumerate() {
            if part.len() < 2 {
                continue;
            }
            if split_cache[i].is_none() {
                let (sub, back) = g.induced_subgraph(part);
                let (value, side) = stoer_wagner_mincut(&sub)?;
                split_cache[i] = Some((value, side.into_iter().map(|v| back[v]).collect()));
            }
            let value = split_cache[i].as_ref().unwrap().0;
            if choice.is_none_or(|(b, _)| value < b) {
                choice = Some((value, i));
            }
        }
        let (value, i) = choice.expect("k <= n leaves a splittable part");
        let (_, side) = split_cache[i].take().unwrap();
        let rest: Vec<usize> = parts[i]
            .iter()
            .copied()
            .filter(|v| !side.contains(v))
            .collect();
        parts[i] = side;
        parts.push(rest);
        split_cache.push(None);
        total += value;
    }

    let cut = KCut::from_parts(g, &parts)?;
    if cut.value() != total {
        return Err(KcutError::Invariant(format!(
            "greedy split accounting {total} != recomputed {}",
            cut.value()
        )));
    }
    Ok(cut.canonicalize())
}

/// Exact minimum k-cut by branch and bound. Vertices are placed in
/// maximum-adjacency order; a partial assignment is pruned when its crossing
/// weight plus the unavoidable cost of the unplaced vertices reaches the
/// incumbent. Without an incumbent the first complete assignment seeds it.
pub fn branch_and_bound_min_kcut(g: &Graph, k: usize, incumbent: Option<KCut>) -> Result<KCut> {
    check_k(g, k)?;
    let n = g.n();
    let order = max_adjacency_order(g);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }

    struct Search<'a> {
        g: &'a Graph,
        k: usize,
        order: Vec<usize>,
        pos: Vec<usize>,
        label: Vec<usize>,
        // weight from each vertex to each part among placed vertices
        link: Vec<Vec<Weight>>,
        best_value: Weight,
        best_labels: Option<Vec<usize>>,
    }

    impl Search<'_> {
        fn bound(&self, depth: usize) -> Weight {
            self.order[depth..]
                .iter()
                .map(|&v| {
                    let row = &self.link[v];
                    row.iter().sum::<Weight>() - row.iter().copied().max().unwrap_or(0)
                })
                .sum()
        }

        fn place(&mut self, v: usize, l: usize, sign_add: bool) {
            let depth = self.pos[v];
            for &(u, w) in self.g.neighbors(v) {
                if self.pos[u] > depth {
                    if sign_add {
                        self.link[u][l] += w;
                    } else {
                        self.link[u][l] -= w;
                    }
                }
            }
        }

        fn run(&mut self, depth: usize, used: usize, value: Weight) {
            let n = self.order.len();
            if depth == n {
                if used == self.k && (self.best_labels.is_none() || value < self.best_value) {
                    self.best_value = value;
                    self.best_labels = Some(self.label.clone());
                }
                return;
            }
            let v = self.order[depth];
            let top = (used + 1).min(self.k);
            let mut options: Vec<(Weight, usize)> = (0..top)
                .filter(|&l| n - depth > self.k - used.max(l + 1))
                .map(|l| {
                    let row = &self.link[v];
                    (row.iter().sum::<Weight>() - row[l], l)
                })
                .collect();
            options.sort_unstable();
            for (added, l) in options {
                let value = value + added;
                if self.best_labels.is_some() && value >= self.best_value {
                    continue;
                }
                self.label[v] = l;
                self.place(v, l, true);
                let lb = value + self.bound(depth + 1);
                if self.best_labels.is_none() || lb < self.best_value {
                    self.run(depth + 1, used.max(l + 1), value);
                }
                self.place(v, l, false);
            }
        }
    }

    let (best_value, best_labels) = match incumbent {
        Some(c) => (c.value(), Some(c.labels().to_vec())),
        None => (Weight::MAX, None),
    };
    let mut search = Search {
        g,
        k,
        order,
        pos,
        label: vec![0; n],
        link: vec![vec![0; k]; n],
        best_value,
        best_labels,
    };
    search.run(0, 0, 0);
    let labels = search.best_labels.expect("k <= n guarantees a partition");
    Ok(KCut::new(g, labels, k)?.canonicalize())
}

fn max_adjacency_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut key = vec![0 as Weight; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| key[a].cmp(&key[b]).then(b.cmp(&a)))
            .unwrap();
        placed[v] = true;
        order.push(v);
        for &(u, w) in g.neighbors(v) {
            key[u] += w;
        }
    }
    order
}

/// All minimum k-cuts of a graph whose `groups` are certified unsplittable:
/// if every group's internal minimum cut exceeds `upper` (an upper bound on
/// the minimum k-cut value), no minimum k-cut separates a group, so it is
/// enough to enumerate the contracted graph. Returns `None` when a group
/// fails the certificate.
pub fn certified_min_kcuts(
    g: &Graph,
    k: usize,
    groups: &[Vec<usize>],
    upper: Weight,
    limit: usize,
) -> Result<Option<Vec<KCut>>> {
    check_k(g, k)?;
    let mut in_group = vec![false; g.n()];
    let mut blocks = Vec::new();
    for group in groups {
        if group.len() >= 2 {
            let (sub, _) = g.induced_subgraph(group);
            let (inner, _) = stoer_wagner_mincut(&sub)?;
            if inner <= upper {
                return Ok(None);
            }
        }
        for &v in group {
            in_group[v] = true;
        }
        blocks.push(group.clone());
    }
    blocks.extend((0..g.n()).filter(|&v| !in_group[v]).map(|v| vec![v]));
    let partition = VertexPartition::new(g.n(), blocks)?;
    let (h, map) = contract(g, &partition)?;
    if h.n() < k {
        return Ok(None);
    }
    let mut cuts: Vec<KCut> = all_min_kcuts(&h, k, limit)?
        .into_iter()
        .map(|c| KCut::new(g, map.lift_labels(c.labels()), k).map(KCut::canonicalize))
        .collect::<Result<_>>()?;
    cuts.sort_by_key(|c| c.canonical_labels());
    Ok(Some(cuts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn min_kcut_examples() {
        assert_eq!(brute_force_min_kcut(&cycle(5), 2).unwrap().value(), 2);
        assert_eq!(
            brute_force_min_kcut(&cliques_bridge(3, 2, 1), 2)
                .unwrap()
                .value(),
            1
        );
        assert_eq!(brute_force_min_kcut(&cycle(6), 3).unwrap().value(), 3);
    }

    #[test]
    fn min_kcut_tie_break_is_lexicographic() {
        // every single-vertex split of K4 costs 3; lexicographically first is
        // labels [0,0,0,1]
        let cut = brute_force_min_kcut(&complete(4), 2).unwrap();
        assert_eq!(cut.labels(), &[0, 0, 0, 1]);
    }

    #[test]
    fn min_kcut_errors() {
        assert!(matches!(
            brute_force_min_kcut(&cycle(15), 2),
            Err(KcutError::TooLarge { n: 15, limit: 14 })
        ));
        assert!(matches!(
            brute_force_min_kcut(&cycle(4), 5),
            Err(KcutError::Domain(_))
        ));
        assert!(matches!(
            brute_force_min_kcut(&cycle(4), 1),
            Err(KcutError::Domain(_))
        ));
    }

    #[test]
    fn all_min_cuts_of_cycle() {
        // C5 min 2-cuts: choose any 2 of 5 edges -> 10 cuts
        let cuts = all_min_kcuts(&cycle(5), 2, 14).unwrap();
        assert_eq!(cuts.len(), 10);
        assert!(cuts.iter().all(|c| c.value() == 2));
    }

    #[test]
    fn island_examples() {
        assert_eq!(
            brute_force_r_island(&star(4), 3).unwrap(),
            (3, vec![1, 2, 3])
        );
        assert_eq!(brute_force_r_island(&path(3), 1).unwrap(), (1, vec![0]));
        assert_eq!(
            brute_force_r_island(&complete(4), 3).unwrap(),
            (6, vec![0, 1, 2])
        );
        assert!(brute_force_r_island(&path(3), 3).is_err());
        assert!(brute_force_r_island(&path(3), 0).is_err());
    }

    #[test]
    fn stoer_wagner_examples() {
        assert_eq!(stoer_wagner_mincut(&cliques_bridge(3, 2, 1)).unwrap().0, 1);
        assert_eq!(stoer_wagner_mincut(&complete(4)).unwrap().0, 3);
        assert_eq!(stoer_wagner_mincut(&cycle(8)).unwrap().0, 2);
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(stoer_wagner_mincut(&two).unwrap(), (0, vec![0, 1]));
        assert!(stoer_wagner_mincut(&Graph::empty(1)).is_err());
    }

    #[test]
    fn stoer_wagner_side_is_a_cut() {
        let g = cliques_bridge(4, 3, 2);
        let (value, side) = stoer_wagner_mincut(&g).unwrap();
        let mut labels = vec![1; g.n()];
        for v in side {
            labels[v] = 0;
        }
        assert_eq!(KCut::new(&g, labels, 2).unwrap().value(), value);
    }

    #[test]
    fn sv_examples() {
        assert_eq!(sv_2approx(&cliques_bridge(3, 2, 1), 2).unwrap().value(), 1);
        // first split of C6 cuts two edges, the second splits a path with one
        let c6 = sv_2approx(&cycle(6), 3).unwrap();
        assert_eq!(c6.value(), 3);
        assert!(c6.value() <= 4);
        let two = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(sv_2approx(&two, 3).unwrap().value(), 0);
        assert!(sv_2approx(&cycle(3), 4).is_err());
    }

    #[test]
    fn zero_cut_grouping() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let cut = zero_cut_from_components(&g, 2).unwrap().unwrap();
        assert_eq!(cut.value(), 0);
        assert_eq!(cut.components(), vec![vec![0, 1], vec![2, 3, 4, 5]]);
        assert!(zero_cut_from_components(&cycle(4), 2).unwrap().is_none());
    }

    #[test]
    fn branch_and_bound_matches_enumeration() {
        for g in [cycle(7), complete(6), cliques_bridge(3, 3, 2), star(6)] {
            for k in 2..=4 {
                let exact = brute_force_min_kcut(&g, k).unwrap().value();
                assert_eq!(
                    branch_and_bound_min_kcut(&g, k, None).unwrap().value(),
                    exact
                );
                let seed = sv_2approx(&g, k).unwrap();
                assert_eq!(
                    branch_and_bound_min_kcut(&g, k, Some(seed))
                        .unwrap()
                        .value(),
                    exact
                );
            }
        }
    }

    #[test]
    fn certified_cuts_on_bridged_cliques() {
        let g = cliques_bridge(6, 3, 2);
        let groups: Vec<Vec<usize>> = (0..3).map(|c| (c * 6..c * 6 + 6).collect()).collect();
        let upper = sv_2approx(&g, 3).unwrap().value();
        let cuts = certified_min_kcuts(&g, 3, &groups, upper, 14)
            .unwrap()
            .unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].value(), 2);
        // a group that is cheap to split fails the certificate
        let weak = vec![vec![0, 1, 2, 3, 4, 5, 6]];
        assert!(certified_min_kcuts(&g, 2, &weak, 1, 14).unwrap().is_none());
    }
}
