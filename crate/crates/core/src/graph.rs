//! Weighted undirected multigraphs, k-cuts, vertex partitions and contraction.
//!
//! Vertices are dense ids `0..n`. Parallel edges are always stored merged into a
//! single entry whose weight is the multiplicity, so a "multigraph" is simply a
//! graph with some weight above one. Edge lists and adjacency lists are kept
//! sorted by id; every traversal in the crate relies on that order for
//! reproducible tie-breaking.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{KcutError, Result};

pub type Weight = u64;

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, Weight)>>,
    degree: Vec<Weight>,
    total: Weight,
    simple: bool,
}

impl Graph {
    /// Builds a graph from weighted pairs, merging repeated pairs by summing
    /// their weights.
    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, Weight)>,
    {
        let mut merged: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(KcutError::Domain(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(KcutError::Domain(format!("self-loop at vertex {a}")));
            }
            if w == 0 {
                return Err(KcutError::Domain(format!(
                    "edge ({a}, {b}) has zero weight"
                )));
            }
            let key = (a.min(b), a.max(b));
            let slot = merged.entry(key).or_insert(0);
            *slot = slot
                .checked_add(w)
                .ok_or(KcutError::Overflow("edge weight"))?;
        }
        Self::from_merged(n, merged)
    }

    /// Builds a unit-weight graph.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_weighted_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1)))
    }

    fn from_merged(n: usize, merged: BTreeMap<(usize, usize), Weight>) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        let mut degree = vec![0u64; n];
        let mut edges = Vec::with_capacity(merged.len());
        let mut total: Weight = 0;
        for ((u, v), w) in merged {
            edges.push(Edge { u, v, w });
            adj[u].push((v, w));
            adj[v].push((u, w));
            degree[u] = degree[u]
                .checked_add(w)
                .ok_or(KcutError::Overflow("degree"))?;
            degree[v] = degree[v]
                .checked_add(w)
                .ok_or(KcutError::Overflow("degree"))?;
            total = total
                .checked_add(w)
                .ok_or(KcutError::Overflow("total weight"))?;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let simple = edges.iter().all(|e| e.w == 1);
        Ok(Graph {
            n,
            edges,
            adj,
            degree,
            total,
            simple,
        })
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            degree: vec![0; n],
            total: 0,
            simple: true,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Merged edge entries sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of distinct adjacent pairs.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Total edge weight (m for simple graphs).
    pub fn total_weight(&self) -> Weight {
        self.total
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.adj[v]
    }

    /// Weighted degree.
    pub fn degree(&self, v: usize) -> Weight {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[Weight] {
        &self.degree
    }

    /// Minimum weighted degree; 0 for the empty vertex set.
    pub fn min_degree(&self) -> Weight {
        self.degree.iter().copied().min().unwrap_or(0)
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Weight {
        match self.adj[a].binary_search_by(|&(x, _)| x.cmp(&b)) {
            Ok(i) => self.adj[a][i].1,
            Err(_) => 0,
        }
    }

    /// Subgraph induced by `vertices`, relabelled densely in the given order.
    /// Returns the subgraph and the local-to-original id table.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut merged = BTreeMap::new();
        for e in &self.edges {
            let (a, b) = (local[e.u], local[e.v]);
            if a != usize::MAX && b != usize::MAX {
                merged.insert((a.min(b), a.max(b)), e.w);
            }
        }
        let g = Self::from_merged(vertices.len(), merged).expect("weights already validated");
        (g, vertices.to_vec())
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            if e.w == 1 {
                out.push_str(&format!("{} {}\n", e.u, e.v));
            } else {
                out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
            }
        }
        out
    }
}

/// Parses the edge-list format: a header line `n m`, then `m` lines of
/// `u v` or `u v w`. Lines starting with `#` and blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen_pairs: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| KcutError::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some((n, m)) = header else {
            if fields.len() != 2 {
                return Err(err(format!("expected header `n m`, found `{line}`")));
            }
            let n = fields[0]
                .parse::<usize>()
                .map_err(|_| err(format!("bad vertex count `{}`", fields[0])))?;
            let m = fields[1]
                .parse::<usize>()
                .map_err(|_| err(format!("bad edge count `{}`", fields[1])))?;
            header = Some((n, m));
            continue;
        };
        if edges.len() == m {
            return Err(err(format!("more than {m} edge lines")));
        }
        if fields.len() != 2 && fields.len() != 3 {
            return Err(err(format!("expected `u v [w]`, found `{line}`")));
        }
        let u = fields[0]
            .parse::<usize>()
            .map_err(|_| err(format!("bad vertex id `{}`", fields[0])))?;
        let v = fields[1]
            .parse::<usize>()
            .map_err(|_| err(format!("bad vertex id `{}`", fields[1])))?;
        let w = match fields.get(2) {
            None => 1,
            Some(s) => {
                let w = s
                    .parse::<i128>()
                    .map_err(|_| err(format!("bad weight `{s}`")))?;
                if w <= 0 {
                    return Err(err(format!("non-positive weight {w}")));
                }
                Weight::try_from(w).map_err(|_| err(format!("weight {w} out of range")))?
            }
        };
        if u >= n || v >= n {
            return Err(err(format!("vertex id out of range (n = {n})")));
        }
        if u == v {
            return Err(KcutError::Parse {
                line: line_no,
                message: "self-loop".into(),
            });
        }
        *seen_pairs.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        edges.push((u, v, w));
    }

    let Some((n, m)) = header else {
        return Err(KcutError::Parse {
            line: last_line.max(1),
            message: "missing header".into(),
        });
    };
    if edges.len() != m {
        return Err(KcutError::Parse {
            line: last_line.max(1),
            message: format!("expected {m} edge lines, found {}", edges.len()),
        });
    }
    Graph::from_weighted_edges(n, edges)
}

/// Assignment of every vertex to one of `k` nonempty parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KCut {
    k: usize,
    labels: Vec<usize>,
    value: Weight,
}

impl KCut {
    /// Validates `labels` against `g` and computes the cut value.
    pub fn new(g: &Graph, labels: Vec<usize>, k: usize) -> Result<KCut> {
        let value = crossing_weight(g, &labels, k)?;
        Ok(KCut { k, labels, value })
    }

    /// Builds a cut from a list of vertex groups; group `i` becomes part `i`.
    pub fn from_parts(g: &Graph, parts: &[Vec<usize>]) -> Result<KCut> {
        let mut labels = vec![usize::MAX; g.n()];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= g.n() || labels[v] != usize::MAX {
                    return Err(KcutError::InvalidCut(format!(
                        "vertex {v} missing from graph or listed twice"
                    )));
                }
                labels[v] = i;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(KcutError::InvalidCut(
                "parts do not cover every vertex".into(),
            ));
        }
        KCut::new(g, labels, parts.len())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn value(&self) -> Weight {
        self.value
    }

    /// Labels renumbered by first occurrence (a restricted growth string), so
    /// that two cuts describing the same set partition compare equal.
    pub fn canonical_labels(&self) -> Vec<usize> {
        canonical_labels(&self.labels)
    }

    pub fn canonicalize(mut self) -> KCut {
        self.labels = canonical_labels(&self.labels);
        self
    }

    /// Parts as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let canon = self.canonical_labels();
        let mut parts = vec![Vec::new(); self.k];
        for (v, &l) in canon.iter().enumerate() {
            parts[l].push(v);
        }
        parts
    }

    /// Total order used for every tie-break: value, then canonical labels.
    pub fn rank_cmp(&self, other: &KCut) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.canonical_labels().cmp(&other.canonical_labels()))
    }
}

/// Renumbers labels by order of first appearance.
pub fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = remap.len();
            *remap.entry(l).or_insert(next)
        })
        .collect()
}

fn crossing_weight(g: &Graph, labels: &[usize], k: usize) -> Result<Weight> {
    if labels.len() != g.n() {
        return Err(KcutError::InvalidCut(format!(
            "{} labels for {} vertices",
            labels.len(),
            g.n()
        )));
    }
    let mut used = vec![false; k];
    for &l in labels {
        if l >= k {
            return Err(KcutError::InvalidCut(format!("label {l} outside 0..{k}")));
        }
        used[l] = true;
    }
    if let Some(empty) = used.iter().position(|&u| !u) {
        return Err(KcutError::InvalidCut(format!("part {empty} is empty")));
    }
    let mut value: Weight = 0;
    for e in g.edges() {
        if labels[e.u] != labels[e.v] {
            value = value
                .checked_add(e.w)
                .ok_or(KcutError::Overflow("cut value"))?;
        }
    }
    Ok(value)
}

/// Recomputes the crossing weight of `cut` on `g` from scratch.
pub fn cut_value(g: &Graph, cut: &KCut) -> Result<Weight> {
    crossing_weight(g, cut.labels(), cut.k())
}

/// Edges whose endpoints carry different labels, in sorted order.
pub fn crossing_edges(g: &Graph, labels: &[usize]) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .filter(|e| labels[e.u] != labels[e.v])
        .map(|e| (e.u, e.v))
        .collect()
}

/// Disjoint nonempty vertex blocks covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<VertexPartition> {
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(KcutError::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &v in block.iter() {
                if v >= n {
                    return Err(KcutError::InvalidPartition(format!(
                        "vertex {v} outside 0..{n}"
                    )));
                }
                if seen[v] {
                    return Err(KcutError::InvalidPartition(format!(
                        "vertex {v} in two blocks"
                    )));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(KcutError::InvalidPartition(format!("vertex {v} uncovered")));
        }
        Ok(VertexPartition { blocks })
    }

    pub fn singletons(n: usize) -> VertexPartition {
        VertexPartition {
            blocks: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// Groups vertices by label; blocks ordered by smallest member.
    pub fn from_labels(labels: &[usize]) -> VertexPartition {
        let canon = canonical_labels(labels);
        let count = canon.iter().max().map_or(0, |&m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (v, &l) in canon.iter().enumerate() {
            blocks[l].push(v);
        }
        VertexPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of every vertex.
    pub fn block_of(&self) -> Vec<usize> {
        let n = self.blocks.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                out[v] = i;
            }
        }
        out
    }
}

/// Original vertex -> super-vertex table produced by a contraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionMap {
    map: Vec<usize>,
    targets: usize,
}

impl ContractionMap {
    pub fn identity(n: usize) -> ContractionMap {
        ContractionMap {
            map: (0..n).collect(),
            targets: n,
        }
    }

    /// `map` must be surjective onto `0..targets`.
    pub fn new(map: Vec<usize>, targets: usize) -> Result<ContractionMap> {
        let mut hit = vec![false; targets];
        for &t in &map {
            if t >= targets {
                return Err(KcutError::InvalidPartition(format!(
                    "super-vertex {t} outside 0..{targets}"
                )));
            }
            hit[t] = true;
        }
        if hit.iter().any(|&h| !h) {
            return Err(KcutError::InvalidPartition(
                "contraction map not surjective".into(),
            ));
        }
        Ok(ContractionMap { map, targets })
    }

    pub fn get(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn source_len(&self) -> usize {
        self.map.len()
    }

    pub fn target_len(&self) -> usize {
        self.targets
    }

    /// Applies `next` (a map on the contracted graph) after `self`.
    pub fn then(&self, next: &ContractionMap) -> ContractionMap {
        ContractionMap {
            map: self.map.iter().map(|&s| next.map[s]).collect(),
            targets: next.targets,
        }
    }

    /// Pulls per-super-vertex labels back to the original vertices.
    pub fn lift_labels(&self, labels: &[usize]) -> Vec<usize> {
        self.map.iter().map(|&s| labels[s]).collect()
    }

    pub fn partition(&self) -> VertexPartition {
        let mut blocks = vec![Vec::new(); self.targets];
        for (v, &s) in self.map.iter().enumerate() {
            blocks[s].push(v);
        }
        VertexPartition { blocks }
    }
}

/// Contracts every block of `p` into one vertex. Block `i` becomes vertex `i`;
/// intra-block edges vanish and parallel super-edges merge by weight.
pub fn contract(g: &Graph, p: &VertexPartition) -> Result<(Graph, ContractionMap)> {
    let total: usize = p.blocks().iter().map(Vec::len).sum();
    if total != g.n() {
        return Err(KcutError::InvalidPartition(format!(
            "partition covers {total} vertices, graph has {}",
            g.n()
        )));
    }
    let map = ContractionMap::new(p.block_of(), p.len())?;
    let h = contract_by_map(g, &map)?;
    Ok((h, map))
}

pub fn contract_by_map(g: &Graph, map: &ContractionMap) -> Result<Graph> {
    let mut merged: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (map.get(e.u), map.get(e.v));
        if a != b {
            let slot = merged.entry((a.min(b), a.max(b))).or_insert(0);
            *slot = slot
                .checked_add(e.w)
                .ok_or(KcutError::Overflow("edge weight"))?;
        }
    }
    Graph::from_merged(map.target_len(), merged)
}

/// Connected components, ordered by smallest member.
pub fn connected_components(g: &Graph) -> VertexPartition {
    let mut comp = vec![usize::MAX; g.n()];
    let mut blocks = Vec::new();
    for start in 0..g.n() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = vec![start];
        comp[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(u, _) in g.neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    block.push(u);
                    queue.push_back(u);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    VertexPartition { blocks }
}

/// Nonnegative fraction compared exactly by cross-multiplication.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den > 0, "zero denominator");
        Ratio { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Conductance of a vertex set. `Infinite` arises only when the smaller
/// volume side has no incident edges at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Conductance {
    Finite(Ratio),
    Infinite,
}

impl Conductance {
    pub fn from_parts(boundary: Weight, min_volume: Weight) -> Conductance {
        if min_volume == 0 {
            Conductance::Infinite
        } else {
            Conductance::Finite(Ratio::new(boundary, min_volume))
        }
    }

    pub fn is_below(&self, gamma: Ratio) -> bool {
        match self {
            Conductance::Finite(r) => *r < gamma,
            Conductance::Infinite => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Conductance::Finite(r) => r.to_f64(),
            Conductance::Infinite => f64::INFINITY,
        }
    }
}

/// |boundary(S)| / min(vol(S), vol(V \ S)) with weighted degrees.
pub fn conductance(g: &Graph, s: &[usize]) -> Result<Conductance> {
    if g.total_weight() == 0 {
        return Err(KcutError::Domain("conductance of an edgeless graph".into()));
    }
    let mut inside = vec![false; g.n()];
    for &v in s {
        if v >= g.n() {
            return Err(KcutError::Domain(format!("vertex {v} outside graph")));
        }
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == g.n() {
        return Err(KcutError::Domain(
            "conductance needs a proper nonempty subset".into(),
        ));
    }
    let vol_s: Weight = (0..g.n()).filter(|&v| inside[v]).map(|v| g.degree(v)).sum();
    let vol_rest = 2 * g.total_weight() - vol_s;
    let boundary: Weight = g
        .edges()
        .iter()
        .filter(|e| inside[e.u] != inside[e.v])
        .map(|e| e.w)
        .sum();
    Ok(Conductance::from_parts(boundary, vol_s.min(vol_rest)))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        Graph::from_edges(n, e).unwrap()
    }

    /// `count` cliques of `size` vertices; clique `i` links its last vertex
    /// to the first vertex of clique `i + 1` (`bridges` of those links).
    pub fn cliques_bridge(size: usize, count: usize, bridges: usize) -> Graph {
        let mut e = Vec::new();
        for c in 0..count {
            let base = c * size;
            for a in 0..size {
                for b in a + 1..size {
                    e.push((base + a, base + b));
                }
            }
        }
        for c in 0..bridges.min(count.saturating_sub(1)) {
            e.push((c * size + size - 1, (c + 1) * size));
        }
        Graph::from_edges(size * count, e).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }
}
