//! Deterministic instance generators. Every generator draws from a ChaCha8
//! stream seeded with the caller's seed, so `(kind, seed)` fixes the graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{KcutError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceKind {
    Gnp {
        n: usize,
        p: f64,
    },
    /// `k` clusters of `size` vertices with edge probability `p_in` inside and
    /// `p_out` between, plus `islands` extra vertices hanging off the
    /// clusters. Consecutive clusters are always joined by one edge so the
    /// graph is connected.
    Planted {
        k: usize,
        size: usize,
        p_in: f64,
        p_out: f64,
        islands: usize,
    },
    Cycle {
        n: usize,
    },
    CliquesBridge {
        size: usize,
        count: usize,
        bridges: usize,
    },
}

/// What the planted generator built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Planted {
    pub clusters: Vec<Vec<usize>>,
    pub islands: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub planted: Option<Planted>,
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(KcutError::Domain(format!("probability {p} outside [0, 1]")))
    }
}

pub fn gen_instance(kind: &InstanceKind, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        InstanceKind::Gnp { n, p } => {
            check_p(p)?;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Ok(Instance {
                graph: Graph::from_edges(n, edges)?,
                planted: None,
            })
        }
        InstanceKind::Planted {
            k,
            size,
            p_in,
            p_out,
            islands,
        } => {
            check_p(p_in)?;
            check_p(p_out)?;
            if k == 0 || size < 2 {
                return Err(KcutError::Domain(
                    "planted needs k >= 1 and size >= 2".into(),
                ));
            }
            let n = k * size + islands;
            let clusters: Vec<Vec<usize>> = (0..k)
                .map(|c| (c * size..(c + 1) * size).collect())
                .collect();
            let mut edges = Vec::new();
            for u in 0..k * size {
                for v in u + 1..k * size {
                    let p = if u / size == v / size { p_in } else { p_out };
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            for c in 1..k {
                let u = clusters[c - 1][rng.gen_range(0..size)];
                let v = clusters[c][rng.gen_range(0..size)];
                edges.push((u, v));
            }
            // an island attaches to a few vertices of one cluster
            let island_ids: Vec<usize> = (k * size..n).collect();
            for (j, &x) in island_ids.iter().enumerate() {
                let host = &clusters[j % k];
                let want = rng.gen_range(1..=size.div_ceil(2));
                let mut picked: Vec<usize> = host.clone();
                for i in 0..want {
                    let r = rng.gen_range(i..picked.len());
                    picked.swap(i, r);
                }
                edges.extend(picked[..want].iter().map(|&v| (v, x)));
            }
            edges.sort_unstable();
            edges.dedup();
            Ok(Instance {
                graph: Graph::from_edges(n, edges)?,
                planted: Some(Planted {
                    clusters,
                    islands: island_ids,
                }),
            })
        }
        InstanceKind::Cycle { n } => {
            if n < 3 {
                return Err(KcutError::Domain("cycle needs n >= 3".into()));
            }
            Ok(Instance {
                graph: Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))?,
                planted: None,
            })
        }
        InstanceKind::CliquesBridge {
            size,
            count,
            bridges,
        } => {
            if size < 2 || count == 0 || bridges > size {
                return Err(KcutError::Domain(
                    "cliques_bridge needs size >= 2, count >= 1, bridges <= size".into(),
                ));
            }
            let mut edges = Vec::new();
            for c in 0..count {
                let base = c * size;
                for u in 0..size {
                    for v in u + 1..size {
                        edges.push((base + u, base + v));
                    }
                }
                if c + 1 < count {
                    // bridge b joins the b-th last vertex of this clique to the
                    // b-th vertex of the next one
                    for b in 0..bridges {
                        edges.push((base + size - 1 - b, base + size + b));
                    }
                }
            }
            Ok(Instance {
                graph: Graph::from_edges(size * count, edges)?,
                planted: None,
            })
        }
    }
}
