//! Vertex sparsification: a partition of the vertex set whose contraction
//! keeps a border of every minimum k-cut.
//!
//! Stages, in order: forest sparsification with `s = lambda_bar`,
//! regularization (low-degree vertices become trivial parts), expander
//! decomposition with `gamma = 1/delta`, trimming, shaving and shattering.
//! The final partition is every nonempty core plus a singleton block for each
//! remaining vertex.

pub mod border;
pub mod expander;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{KcutError, Result};
use crate::graph::{Graph, Ratio, VertexPartition, Weight};
use crate::sparsify::ni_sparsify;

pub use border::Border;
pub use expander::{expander_decompose, inter_block_budget, inter_block_weight, CERTIFY_LIMIT};

/// Constant in the part-count bound `q <= C * k * log2(n)^2 * n / lambda_bar`.
pub const PART_COUNT_CONSTANT: f64 = 64.0;

/// Trimming keeps a vertex only while more than this fraction of its degree
/// stays inside its cluster.
pub const TRIM_FRACTION: Ratio = Ratio { num: 2, den: 5 };

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KTParams {
    pub k: usize,
    /// Vertex count after regularization.
    pub n: usize,
    /// Minimum degree after regularization.
    pub min_degree: Weight,
    /// `1 / (k * log2 n)`, with `log2 n` floored at 1.
    pub epsilon: f64,
    /// `1 / min_degree`.
    #[serde(serialize_with = "ratio_as_f64")]
    pub gamma: Ratio,
    #[serde(serialize_with = "ratio_as_f64")]
    pub trim_fraction: Ratio,
    /// Regularization removes vertices with degree below this.
    pub min_degree_floor: f64,
}

fn ratio_as_f64<S: serde::Serializer>(r: &Ratio, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(r.to_f64())
}

impl KTParams {
    pub fn derive(k: usize, n: usize, min_degree: Weight, lambda_bar: Weight) -> KTParams {
        let log_n = (n.max(2) as f64).log2().max(1.0);
        KTParams {
            k,
            n,
            min_degree,
            epsilon: 1.0 / (k as f64 * log_n),
            gamma: Ratio::new(1, min_degree.max(1)),
            trim_fraction: TRIM_FRACTION,
            min_degree_floor: lambda_bar as f64 / (2.0 * (k as f64 - 1.0)),
        }
    }
}

/// Graph left after regularization, plus the removed trivial vertices.
#[derive(Debug, Clone)]
pub struct Regularized {
    pub graph: Graph,
    /// Local id -> id in the input graph.
    pub kept: Vec<usize>,
    /// Removed vertices in removal order.
    pub removed: Vec<usize>,
}

/// Repeatedly removes the lowest-id vertex whose current degree is below
/// `lambda_bar / (2(k-1))`. More than `k - 1` removals would exhibit a k-cut
/// cheaper than `lambda_bar / 2`, which a valid 2-approximation rules out, so
/// that case is reported as an invariant violation.
pub fn regularize(g: &Graph, k: usize, lambda_bar: Weight) -> Result<Regularized> {
    if !g.is_simple() {
        return Err(KcutError::NotSimple);
    }
    if k < 2 {
        return Err(KcutError::Domain("k must be at least 2".into()));
    }
    let scale = 2 * (k as Weight - 1);
    let below = |d: Weight| d * scale < lambda_bar;
    let mut degree: Vec<Weight> = g.degrees().to_vec();
    let mut alive = vec![true; g.n()];
    let mut queue: BTreeSet<usize> = (0..g.n()).filter(|&v| below(degree[v])).collect();
    let mut removed = Vec::new();
    while let Some(v) = queue.pop_first() {
        alive[v] = false;
        removed.push(v);
        for &(u, w) in g.neighbors(v) {
            if alive[u] {
                degree[u] -= w;
                if below(degree[u]) {
                    queue.insert(u);
                }
            }
        }
    }
    if removed.len() >= k {
        return Err(KcutError::Invariant(format!(
            "regularization removed {} >= k = {k} vertices; lambda_bar = {lambda_bar} is not an upper bound",
            removed.len()
        )));
    }
    let kept: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
    let (graph, kept) = g.induced_subgraph(&kept);
    Ok(Regularized {
        graph,
        kept,
        removed,
    })
}

/// Clusters `C_i`, singleton set `S` and cores `A_i`.
///
/// Invariants: clusters are disjoint, `cores[i]` is a subset of `clusters[i]`,
/// and the cores together with the singletons partition the vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterState {
    pub clusters: Vec<Vec<usize>>,
    pub singletons: BTreeSet<usize>,
    pub cores: Vec<Vec<usize>>,
}

impl ClusterState {
    pub fn from_partition(p: &VertexPartition) -> ClusterState {
        ClusterState {
            clusters: p.blocks().to_vec(),
            singletons: BTreeSet::new(),
            cores: p.blocks().to_vec(),
        }
    }

    fn cluster_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut of = vec![None; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                of[v] = Some(i);
            }
        }
        of
    }

    /// Final blocks: nonempty cores, then one block per singleton.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.cores
            .iter()
            .filter(|c| !c.is_empty())
            .cloned()
            .chain(self.singletons.iter().map(|&v| vec![v]))
            .collect()
    }
}

fn internal_degrees(g: &Graph, cluster_of: &[Option<usize>]) -> Vec<Weight> {
    (0..g.n())
        .map(|v| match cluster_of[v] {
            None => 0,
            Some(c) => g
                .neighbors(v)
                .iter()
                .filter(|&&(u, _)| cluster_of[u] == Some(c))
                .map(|&(_, w)| w)
                .sum(),
        })
        .collect()
}

fn trim_violation(inside: Weight, degree: Weight) -> bool {
    inside * TRIM_FRACTION.den <= degree * TRIM_FRACTION.num
}

fn shave_violation(inside: Weight, degree: Weight, epsilon: f64) -> bool {
    inside as f64 <= (1.0 - epsilon) * degree as f64
}

/// Moves cluster vertices keeping at most 2/5 of their degree inside their
/// cluster into the singletons, lowest id first, until none remain.
pub fn trim(g: &Graph, state: &ClusterState) -> ClusterState {
    let mut cluster_of = state.cluster_of(g.n());
    let mut inside = internal_degrees(g, &cluster_of);
    let mut queue: BTreeSet<usize> = (0..g.n())
        .filter(|&v| cluster_of[v].is_some() && trim_violation(inside[v], g.degree(v)))
        .collect();
    let mut singletons = state.singletons.clone();
    while let Some(v) = queue.pop_first() {
        let c = cluster_of[v].take().expect("queued vertices are clustered");
        singletons.insert(v);
        for &(u, w) in g.neighbors(v) {
            if cluster_of[u] == Some(c) {
                inside[u] -= w;
                if trim_violation(inside[u], g.degree(u)) {
                    queue.insert(u);
                }
            }
        }
    }
    let clusters: Vec<Vec<usize>> = state
        .clusters
        .iter()
        .map(|c| {
            c.iter()
                .copied()
                .filter(|&v| cluster_of[v].is_some())
                .collect()
        })
        .collect();
    ClusterState {
        cores: clusters.clone(),
        clusters,
        singletons,
    }
}

/// One simultaneous pass: cluster vertices keeping at most `(1 - epsilon)` of
/// their degree inside join the singletons; the rest of each cluster is its core.
pub fn shave(g: &Graph, state: &ClusterState, epsilon: f64) -> ClusterState {
    let cluster_of = state.cluster_of(g.n());
    let inside = internal_degrees(g, &cluster_of);
    let mut singletons = state.singletons.clone();
    let cores = state
        .clusters
        .iter()
        .map(|c| {
            let (keep, shaved): (Vec<usize>, Vec<usize>) = c
                .iter()
                .partition(|&&v| !shave_violation(inside[v], g.degree(v), epsilon));
            singletons.extend(shaved);
            keep
        })
        .collect();
    ClusterState {
        clusters: state.clusters.clone(),
        singletons,
        cores,
    }
}

/// Dissolves every core with at most `k` vertices into singletons.
pub fn shatter(state: &ClusterState, k: usize) -> ClusterState {
    let mut singletons = state.singletons.clone();
    let cores = state
        .cores
        .iter()
        .map(|a| {
            if a.len() <= k {
                singletons.extend(a.iter().copied());
                Vec::new()
            } else {
                a.clone()
            }
        })
        .collect();
    ClusterState {
        clusters: state.clusters.clone(),
        singletons,
        cores,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageCounts {
    pub regularized_removed: usize,
    pub clusters: usize,
    pub trimmed: usize,
    pub shaved: usize,
    pub shattered: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSummary {
    pub epsilon: f64,
    pub gamma: f64,
}

/// Serialized as `{"q", "stages": {...}, "params": {"epsilon", "gamma"}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub q: usize,
    pub stages: StageCounts,
    pub params: ParamSummary,
}

/// Intermediate results, in the regularized graph's local ids.
#[derive(Debug, Clone)]
pub struct KtTrace {
    pub params: KTParams,
    pub regularized: Regularized,
    pub expander: VertexPartition,
    pub trimmed: ClusterState,
    pub shaved: ClusterState,
    pub shattered: ClusterState,
}

#[derive(Debug, Clone)]
pub struct KtOutcome {
    /// Partition of the full input vertex set.
    pub partition: VertexPartition,
    pub report: PartitionReport,
    pub trace: KtTrace,
}

/// Runs every stage on simple `g` with upper bound `lambda_bar >= lambda_k`.
pub fn kt_partition(g: &Graph, k: usize, lambda_bar: Weight) -> Result<KtOutcome> {
    if !g.is_simple() {
        return Err(KcutError::NotSimple);
    }
    if lambda_bar == 0 {
        return Err(KcutError::Domain(
            "lambda_bar = 0: disconnected inputs must be handled before partitioning".into(),
        ));
    }
    if k < 2 || k > g.n() {
        return Err(KcutError::Domain(format!("k = {k} outside 2..={}", g.n())));
    }
    let sparse = ni_sparsify(g, lambda_bar)?;
    let regularized = regularize(&sparse, k, lambda_bar)?;
    let gr = &regularized.graph;
    let params = KTParams::derive(k, gr.n(), gr.min_degree(), lambda_bar);

    let expander = expander_decompose(gr, params.gamma);
    let start = ClusterState::from_partition(&expander);
    let trimmed = trim(gr, &start);
    let shaved = shave(gr, &trimmed, params.epsilon);
    let shattered = shatter(&shaved, k);

    let mut blocks: Vec<Vec<usize>> = shattered
        .blocks()
        .into_iter()
        .map(|b| b.into_iter().map(|v| regularized.kept[v]).collect())
        .collect();
    blocks.extend(regularized.removed.iter().map(|&v| vec![v]));
    let partition = VertexPartition::new(g.n(), blocks)?;

    let report = PartitionReport {
        q: partition.len(),
        stages: StageCounts {
            regularized_removed: regularized.removed.len(),
            clusters: expander.len(),
            trimmed: trimmed.singletons.len(),
            shaved: shaved.singletons.len() - trimmed.singletons.len(),
            shattered: shattered.singletons.len() - shaved.singletons.len(),
        },
        params: ParamSummary {
            epsilon: params.epsilon,
            gamma: params.gamma.to_f64(),
        },
    };
    let trace = KtTrace {
        params,
        regularized,
        expander,
        trimmed,
        shaved,
        shattered,
    };
    check_stage_postconditions(&trace)?;
    log::debug!("partition: {:?}", report);
    Ok(KtOutcome {
        partition,
        report,
        trace,
    })
}

/// Re-checks the trim, shave and shatter thresholds on a finished trace.
pub fn check_stage_postconditions(trace: &KtTrace) -> Result<()> {
    let g = &trace.regularized.graph;
    let fail = |msg: String| Err(KcutError::Invariant(msg));
    let mut of = vec![None; g.n()];
    for (i, c) in trace.trimmed.clusters.iter().enumerate() {
        for &v in c {
            of[v] = Some(i);
        }
    }
    let inside = internal_degrees(g, &of);
    for c in &trace.trimmed.clusters {
        for &v in c {
            if trim_violation(inside[v], g.degree(v)) {
                return fail(format!("vertex {v} kept by trimming at ratio <= 2/5"));
            }
        }
    }
    for (core, cluster) in trace.shaved.cores.iter().zip(&trace.shaved.clusters) {
        for &v in core {
            if !cluster.contains(&v) {
                return fail(format!("core vertex {v} outside its cluster"));
            }
            if shave_violation(inside[v], g.degree(v), trace.params.epsilon) {
                return fail(format!(
                    "core vertex {v} kept by shaving at ratio <= 1 - eps"
                ));
            }
        }
    }
    for core in &trace.shattered.cores {
        if !core.is_empty() && core.len() <= trace.params.k {
            return fail(format!("core of size {} survived shattering", core.len()));
        }
    }
    let covered: usize = trace.shattered.cores.iter().map(Vec::len).sum::<usize>()
        + trace.shattered.singletons.len();
    if covered != g.n() {
        return fail(format!(
            "cores and singletons cover {covered} of {} vertices",
            g.n()
        ));
    }
    Ok(())
}

/// `C * k * log2(n)^2 * n / lambda_bar`.
pub fn part_count_bound(n: usize, k: usize, lambda_bar: Weight) -> f64 {
    let log_n = (n.max(2) as f64).log2();
    PART_COUNT_CONSTANT * k as f64 * log_n * log_n * n as f64 / (lambda_bar.max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::sv_2approx;

    #[test]
    fn regularize_keeps_high_degree_graphs() {
        let g = complete(6);
        let r = regularize(&g, 2, 5).unwrap();
        assert!(r.removed.is_empty());
        assert_eq!(r.graph, g);

        let s = star(9);
        let r = regularize(&s, 2, 1).unwrap();
        assert!(r.removed.is_empty());

        let kk = cliques_bridge(6, 2, 1);
        let r = regularize(&kk, 2, 2).unwrap();
        assert!(r.removed.is_empty());
    }

    #[test]
    fn regularize_removes_low_degree_vertices() {
        // pendant vertex 5 on K5, k = 3, lambda_bar = 8: threshold 2
        let mut e: Vec<(usize, usize)> = complete(5).edges().iter().map(|e| (e.u, e.v)).collect();
        e.push((0, 5));
        let g = Graph::from_edges(6, e).unwrap();
        let r = regularize(&g, 3, 8).unwrap();
        assert_eq!(r.removed, vec![5]);
        assert_eq!(r.kept, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn regularize_flags_bad_upper_bound() {
        // a path with lambda_bar far too large for k = 2
        let g = path(4);
        assert!(matches!(
            regularize(&g, 2, 100),
            Err(KcutError::Invariant(_))
        ));
    }

    #[test]
    fn trim_whole_component_unchanged() {
        let g = cycle(6);
        let state =
            ClusterState::from_partition(&VertexPartition::new(6, vec![(0..6).collect()]).unwrap());
        assert_eq!(trim(&g, &state), state);
    }

    #[test]
    fn trim_keeps_pendant_inside_cluster() {
        let mut e: Vec<(usize, usize)> = complete(5).edges().iter().map(|e| (e.u, e.v)).collect();
        e.push((4, 5));
        let g = Graph::from_edges(6, e).unwrap();
        let state =
            ClusterState::from_partition(&VertexPartition::new(6, vec![(0..6).collect()]).unwrap());
        let t = trim(&g, &state);
        assert!(t.singletons.is_empty());
    }

    #[test]
    fn trim_threshold_is_inclusive() {
        // K6 (5-regular). Cluster A = {0, 1, 2}, B = {3, 4, 5}: each vertex
        // keeps 2 of 5 edges inside, exactly the 2/5 threshold.
        let g = complete(6);
        let p = VertexPartition::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let t = trim(&g, &ClusterState::from_partition(&p));
        assert_eq!(t.singletons.len(), 6);
        assert!(t.clusters.iter().all(Vec::is_empty));
        // with 3 of 5 inside nobody moves
        let p = VertexPartition::new(6, vec![vec![0, 1, 2, 3], vec![4, 5]]).unwrap();
        let t = trim(&g, &ClusterState::from_partition(&p));
        // {4,5} keep 1 of 5 -> trimmed; then the 4-clique keeps 3 of 5
        assert_eq!(t.singletons, BTreeSet::from([4, 5]));
        assert_eq!(t.clusters[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn shave_examples() {
        let g = complete(5);
        let state =
            ClusterState::from_partition(&VertexPartition::new(5, vec![(0..5).collect()]).unwrap());
        let s = shave(&g, &state, 0.1);
        assert_eq!(s.cores[0], vec![0, 1, 2, 3, 4]);

        // vertex 0 has 10 neighbours, one of them (10) outside the cluster
        let mut e: Vec<(usize, usize)> = (1..=10).map(|u| (0, u)).collect();
        for a in 1..10 {
            for b in a + 1..10 {
                e.push((a, b));
            }
        }
        e.push((10, 11));
        let g = Graph::from_edges(12, e).unwrap();
        assert_eq!(g.degree(0), 10);
        let p = VertexPartition::new(12, vec![(0..10).collect(), vec![10, 11]]).unwrap();
        let s = shave(&g, &ClusterState::from_partition(&p), 1.0 / 20.0);
        assert!(s.singletons.contains(&0));
        assert!(!s.cores[0].contains(&0));
    }

    #[test]
    fn shave_skips_trimmed_vertices() {
        let g = complete(6);
        let p = VertexPartition::new(6, vec![vec![0, 1, 2, 3], vec![4, 5]]).unwrap();
        let t = trim(&g, &ClusterState::from_partition(&p));
        let s = shave(&g, &t, 0.5);
        assert_eq!(s.singletons, t.singletons);
        assert_eq!(s.cores[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn shatter_bounds() {
        let state = ClusterState {
            clusters: vec![vec![0, 1, 2], vec![3, 4, 5, 6], vec![]],
            singletons: BTreeSet::new(),
            cores: vec![vec![0, 1, 2], vec![3, 4, 5, 6], vec![]],
        };
        let s = shatter(&state, 3);
        assert!(s.cores[0].is_empty());
        assert_eq!(s.cores[1], vec![3, 4, 5, 6]);
        assert_eq!(s.singletons, BTreeSet::from([0, 1, 2]));
        let empty = ClusterState {
            clusters: vec![vec![0]],
            singletons: BTreeSet::from([0]),
            cores: vec![vec![]],
        };
        assert_eq!(shatter(&empty, 2), empty);
    }

    #[test]
    fn complete_graph_is_one_part() {
        let g = complete(8);
        let lb = sv_2approx(&g, 2).unwrap().value();
        assert_eq!(lb, 7);
        let out = kt_partition(&g, 2, lb).unwrap();
        assert_eq!(out.report.q, 1);
        assert_eq!(out.partition.blocks(), &[(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn bridged_k8s_isolate_bridge_endpoints() {
        let g = cliques_bridge(8, 2, 1);
        let lb = sv_2approx(&g, 2).unwrap().value();
        assert_eq!(lb, 1);
        let out = kt_partition(&g, 2, lb).unwrap();
        let mut blocks = out.partition.blocks().to_vec();
        blocks.sort();
        assert_eq!(
            blocks,
            vec![
                (0..7).collect::<Vec<_>>(),
                vec![7],
                vec![8],
                (9..16).collect::<Vec<_>>()
            ]
        );
    }

    #[test]
    fn tiny_graphs_shatter_everything() {
        // K5 has a 5-vertex core, more than k = 2, so it survives
        let g = complete(5);
        let out = kt_partition(&g, 2, sv_2approx(&g, 2).unwrap().value()).unwrap();
        assert_eq!(out.report.q, 1);
        // with n <= k every core is at most k vertices
        let out = kt_partition(&complete(5), 5, 10).unwrap();
        assert_eq!(out.report.q, 5);
        // a path breaks into pairs, all shattered
        let out = kt_partition(&path(5), 2, 1).unwrap();
        assert_eq!(out.report.q, 5);
    }

    #[test]
    fn report_json_shape() {
        let g = cliques_bridge(5, 2, 1);
        let out = kt_partition(&g, 2, 1).unwrap();
        let v = serde_json::to_value(&out.report).unwrap();
        for key in [
            "regularized_removed",
            "clusters",
            "trimmed",
            "shaved",
            "shattered",
        ] {
            assert!(v["stages"][key].is_u64(), "{key}");
        }
        assert!(v["params"]["epsilon"].is_f64());
        assert!(v["params"]["gamma"].is_f64());
        assert_eq!(v["q"], out.partition.len());
    }

    #[test]
    fn rejects_zero_upper_bound() {
        assert!(kt_partition(&cycle(4), 2, 0).is_err());
    }
}
