//! Constructive expander decomposition by recursive low-conductance cuts.
//!
//! Blocks of at most [`CERTIFY_LIMIT`] vertices are searched exhaustively, so
//! a block that survives is a certified expander. Larger blocks use a spectral
//! sweep over the Fiedler vector of the normalized Laplacian, which may miss a
//! low-conductance cut; for those only the edge budget is checked.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::graph::{connected_components, Conductance, Graph, Ratio, VertexPartition, Weight};

/// Largest block searched exhaustively.
pub const CERTIFY_LIMIT: usize = 16;

/// Constant in the inter-block budget `C * gamma * m * log2(m)`.
pub const BUDGET_CONSTANT: f64 = 10.0;

/// Splits `g` into blocks whose induced subgraphs admit no cut of conductance
/// below `gamma` (exactly for small blocks, heuristically for large ones).
pub fn expander_decompose(g: &Graph, gamma: Ratio) -> VertexPartition {
    let mut done: Vec<Vec<usize>> = Vec::new();
    let mut work: Vec<Vec<usize>> = connected_components(g).blocks().to_vec();
    while let Some(block) = work.pop() {
        if block.len() == 1 {
            done.push(block);
            continue;
        }
        let (h, back) = g.induced_subgraph(&block);
        let cut = if block.len() <= CERTIFY_LIMIT {
            exhaustive_min_conductance(&h)
        } else {
            sweep_min_conductance(&h)
        };
        match cut {
            Some((phi, side)) if phi.is_below(gamma) => {
                let mut inside = vec![false; h.n()];
                for &v in &side {
                    inside[v] = true;
                }
                let (a, b): (Vec<usize>, Vec<usize>) = (0..h.n()).partition(|&v| inside[v]);
                for half in [a, b] {
                    let (sub, sub_back) = h.induced_subgraph(&half);
                    for comp in connected_components(&sub).blocks() {
                        work.push(comp.iter().map(|&v| back[sub_back[v]]).collect());
                    }
                }
            }
            _ => done.push(block),
        }
    }
    for b in &mut done {
        b.sort_unstable();
    }
    done.sort_unstable_by_key(|b| b[0]);
    VertexPartition::new(g.n(), done).expect("decomposition covers every vertex once")
}

/// Minimum-conductance proper subset over all `2^(n-1) - 1` cuts of a graph
/// with at most [`CERTIFY_LIMIT`] vertices. The first minimum in mask order
/// wins. `None` for graphs with fewer than two vertices.
pub fn exhaustive_min_conductance(h: &Graph) -> Option<(Conductance, Vec<usize>)> {
    let n = h.n();
    assert!(
        n <= CERTIFY_LIMIT,
        "exhaustive search limited to {CERTIFY_LIMIT} vertices"
    );
    if n < 2 {
        return None;
    }
    let total_vol = 2 * h.total_weight();
    let nbrs: Vec<Vec<(usize, Weight)>> = (0..n).map(|v| h.neighbors(v).to_vec()).collect();
    let mut best: Option<(Conductance, u32)> = None;
    // fix the top vertex outside S: S and its complement give the same value
    for mask in 1u32..(1u32 << (n - 1)) {
        let mut vol: Weight = 0;
        let mut boundary: Weight = 0;
        for (v, adj) in nbrs.iter().enumerate() {
            if mask >> v & 1 == 1 {
                vol += h.degree(v);
                for &(u, w) in adj {
                    if mask >> u & 1 == 0 {
                        boundary += w;
                    }
                }
            }
        }
        let phi = Conductance::from_parts(boundary, vol.min(total_vol - vol));
        if best.is_none_or(|(b, _)| phi < b) {
            best = Some((phi, mask));
        }
    }
    best.map(|(phi, mask)| (phi, (0..n).filter(|&v| mask >> v & 1 == 1).collect()))
}

/// Best prefix cut of the vertex order given by the Fiedler vector of the
/// normalized Laplacian (scaled by `D^{-1/2}`).
pub fn sweep_min_conductance(h: &Graph) -> Option<(Conductance, Vec<usize>)> {
    let n = h.n();
    if n < 2 || h.total_weight() == 0 {
        return None;
    }
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|v| {
            let d = h.degree(v) as f64;
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut lap = DMatrix::<f64>::identity(n, n);
    for e in h.edges() {
        let x = e.w as f64 * inv_sqrt[e.u] * inv_sqrt[e.v];
        lap[(e.u, e.v)] -= x;
        lap[(e.v, e.u)] -= x;
    }
    let eig = SymmetricEigen::new(lap);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let fiedler = eig.eigenvectors.column(idx[1]);

    let mut order: Vec<usize> = (0..n).collect();
    let score: Vec<f64> = (0..n).map(|v| fiedler[v] * inv_sqrt[v]).collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));

    let total_vol = 2 * h.total_weight();
    let mut inside = vec![false; n];
    let mut vol: Weight = 0;
    let mut boundary: i128 = 0;
    let mut best: Option<(Conductance, usize)> = None;
    for (i, &v) in order.iter().enumerate().take(n - 1) {
        inside[v] = true;
        vol += h.degree(v);
        for &(u, w) in h.neighbors(v) {
            if inside[u] {
                boundary -= w as i128;
            } else {
                boundary += w as i128;
            }
        }
        let phi = Conductance::from_parts(boundary as Weight, vol.min(total_vol - vol));
        if best.is_none_or(|(b, _)| phi < b) {
            best = Some((phi, i + 1));
        }
    }
    best.map(|(phi, len)| {
        let mut side = order[..len].to_vec();
        side.sort_unstable();
        (phi, side)
    })
}

/// Total weight of edges running between different blocks.
pub fn inter_block_weight(g: &Graph, p: &VertexPartition) -> Weight {
    let of = p.block_of();
    g.edges()
        .iter()
        .filter(|e| of[e.u] != of[e.v])
        .map(|e| e.w)
        .sum()
}

/// The budget `C * gamma * m * log2(m)` the decomposition must respect.
pub fn inter_block_budget(g: &Graph, gamma: Ratio) -> f64 {
    let m = g.total_weight() as f64;
    if m <= 1.0 {
        return 0.0;
    }
    BUDGET_CONSTANT * gamma.to_f64() * m * m.log2()
}
