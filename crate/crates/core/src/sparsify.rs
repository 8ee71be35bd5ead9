//! Forest-decomposition sparsification: the union of `s` successively peeled
//! maximal spanning forests keeps every k-cut of value at most `s` intact.
//!
//! Any edge left out of all `s` forests has its endpoints joined inside every
//! forest, so each forest contributes a distinct crossing edge to any cut that
//! separates them; such a cut therefore has value above `s`.

use crate::error::{KcutError, Result};
use crate::graph::{Graph, Weight};
use crate::union_find::UnionFind;

/// `s` edge-disjoint forests; forest `i` is a maximal spanning forest of the
/// graph minus forests `0..i`, scanned in sorted edge order. Forests past the
/// point where edges run out are empty; at most `m + 1` are materialized.
pub fn forest_decomposition(g: &Graph, s: Weight) -> Result<Vec<Vec<(usize, usize)>>> {
    if !g.is_simple() {
        return Err(KcutError::NotSimple);
    }
    if s == 0 {
        return Err(KcutError::Domain(
            "sparsification parameter must be at least 1".into(),
        ));
    }
    let mut remaining: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut forests = Vec::new();
    for _ in 0..s {
        let mut uf = UnionFind::new(g.n());
        let mut forest = Vec::new();
        let mut rest = Vec::with_capacity(remaining.len());
        for (u, v) in remaining {
            if uf.union(u, v) {
                forest.push((u, v));
            } else {
                rest.push((u, v));
            }
        }
        forests.push(forest);
        remaining = rest;
        if remaining.is_empty() {
            break;
        }
    }
    let wanted = s.min(g.total_weight() + 1) as usize;
    while forests.len() < wanted {
        forests.push(Vec::new());
    }
    Ok(forests)
}

/// Union of the first `s` forests as a subgraph of `g`.
pub fn ni_sparsify(g: &Graph, s: Weight) -> Result<Graph> {
    let forests = forest_decomposition(g, s)?;
    Graph::from_edges(g.n(), forests.into_iter().flatten())
}
