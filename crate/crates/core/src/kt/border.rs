use std::collections::BTreeMap;

use crate::error::{KcutError, Result};
use crate::graph::{Graph, KCut, VertexPartition, Weight};

/// A k-cut with some of its singleton parts merged into non-singleton parts.
///
/// `base_cut` has `k - islands.len()` parts; `merged` maps each island vertex
/// to the `base_cut` label of the part that absorbed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Border {
    base_cut: KCut,
    merged: BTreeMap<usize, usize>,
    islands: Vec<usize>,
}

impl Border {
    /// Merges each island `v` of `sigma` (a singleton part of `cut`) into the
    /// non-singleton part whose `cut` label is `sigma[v]`.
    pub fn from_kcut(g: &Graph, cut: &KCut, sigma: &BTreeMap<usize, usize>) -> Result<Border> {
        let parts = cut.components();
        let canon = cut.canonical_labels();
        // `sigma` uses the caller's labels; translate to canonical ones
        let to_canon: BTreeMap<usize, usize> = cut
            .labels()
            .iter()
            .zip(&canon)
            .map(|(&l, &c)| (l, c))
            .collect();
        let mut host_of = BTreeMap::new();
        for (&island, &host) in sigma {
            let own = canon[island];
            if parts[own].len() != 1 {
                return Err(KcutError::InvalidCut(format!(
                    "vertex {island} is not a singleton component"
                )));
            }
            let host = *to_canon
                .get(&host)
                .ok_or_else(|| KcutError::InvalidCut(format!("no part labelled {host}")))?;
            if parts[host].len() < 2 {
                return Err(KcutError::InvalidCut(format!(
                    "island {island} must merge into a non-singleton part"
                )));
            }
            host_of.insert(island, host);
        }
        // drop the islands' own parts and renumber the survivors densely
        let mut new_id = vec![usize::MAX; parts.len()];
        let mut next = 0;
        for (i, slot) in new_id.iter_mut().enumerate() {
            let absorbed = parts[i].len() == 1 && host_of.contains_key(&parts[i][0]);
            if !absorbed {
                *slot = next;
                next += 1;
            }
        }
        let labels: Vec<usize> = canon
            .iter()
            .enumerate()
            .map(|(v, &c)| match host_of.get(&v) {
                Some(&h) => new_id[h],
                None => new_id[c],
            })
            .collect();
        let base_cut = KCut::new(g, labels, next)?;
        let merged = host_of.iter().map(|(&v, &h)| (v, new_id[h])).collect();
        Ok(Border {
            base_cut,
            merged,
            islands: host_of.keys().copied().collect(),
        })
    }

    /// Every border of `cut`: all island subsets of its singleton parts and all
    /// assignments of those islands to non-singleton parts.
    pub fn enumerate(g: &Graph, cut: &KCut) -> Result<Vec<Border>> {
        let parts = cut.components();
        let singles: Vec<usize> = parts
            .iter()
            .filter(|p| p.len() == 1)
            .map(|p| p[0])
            .collect();
        let hosts: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].len() > 1).collect();
        let canon_cut = cut.clone().canonicalize();
        let mut out = Vec::new();
        for subset in 0u32..(1u32 << singles.len()) {
            let islands: Vec<usize> = (0..singles.len())
                .filter(|&i| subset >> i & 1 == 1)
                .map(|i| singles[i])
                .collect();
            if !islands.is_empty() && hosts.is_empty() {
                continue;
            }
            let combos = hosts.len().pow(islands.len() as u32);
            for mut code in 0..combos {
                let mut sigma = BTreeMap::new();
                for &v in &islands {
                    sigma.insert(v, hosts[code % hosts.len()]);
                    code /= hosts.len();
                }
                out.push(Border::from_kcut(g, &canon_cut, &sigma)?);
            }
        }
        Ok(out)
    }

    pub fn base_cut(&self) -> &KCut {
        &self.base_cut
    }

    pub fn merged(&self) -> &BTreeMap<usize, usize> {
        &self.merged
    }

    pub fn islands(&self) -> &[usize] {
        &self.islands
    }

    pub fn value(&self) -> Weight {
        self.base_cut.value()
    }

    /// Splits every island back out as its own part.
    pub fn reconstruct(&self, g: &Graph) -> Result<KCut> {
        let mut labels = self.base_cut.labels().to_vec();
        let mut next = self.base_cut.k();
        for &v in &self.islands {
            labels[v] = next;
            next += 1;
        }
        KCut::new(g, labels, next)
    }

    /// True when every block of `p` lies inside a single part of the border,
    /// i.e. all border edges run between distinct blocks.
    pub fn agrees_with(&self, p: &VertexPartition) -> bool {
        let labels = self.base_cut.labels();
        p.blocks()
            .iter()
            .all(|b| b.iter().all(|&v| labels[v] == labels[b[0]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn merge_and_reconstruct() {
        // K5 x 2 + bridge; 3-cut: {0}, {1..4}, {5..9}
        let g = cliques_bridge(5, 2, 1);
        let mut labels = vec![1; 10];
        labels[0] = 0;
        for l in labels.iter_mut().skip(5) {
            *l = 2;
        }
        let cut = KCut::new(&g, labels, 3).unwrap();
        assert_eq!(cut.value(), 5);
        let sigma = BTreeMap::from([(0, 1)]);
        let b = Border::from_kcut(&g, &cut, &sigma).unwrap();
        assert_eq!(b.base_cut().k(), 2);
        assert_eq!(b.value(), 1);
        assert_eq!(b.islands(), &[0]);
        let back = b.reconstruct(&g).unwrap();
        assert_eq!(back.value(), cut.value());
        assert_eq!(back.components(), cut.components());
    }

    #[test]
    fn rejects_non_singleton_island() {
        let g = path(4);
        let cut = KCut::new(&g, vec![0, 0, 1, 1], 2).unwrap();
        assert!(Border::from_kcut(&g, &cut, &BTreeMap::from([(0, 1)])).is_err());
    }

    #[test]
    fn enumerate_counts() {
        // parts {0},{1},{2,3},{4,5}: 2 singletons, 2 hosts -> 1 + 2 + 2 + 4 = 9
        let g = path(6);
        let cut = KCut::new(&g, vec![0, 1, 2, 2, 3, 3], 4).unwrap();
        let all = Border::enumerate(&g, &cut).unwrap();
        assert_eq!(all.len(), 9);
        for b in &all {
            assert_eq!(b.base_cut().k() + b.islands().len(), 4);
            assert_eq!(b.reconstruct(&g).unwrap().value(), cut.value());
        }
    }

    #[test]
    fn agreement_with_partition() {
        let g = path(4);
        let cut = KCut::new(&g, vec![0, 0, 1, 1], 2).unwrap();
        let b = Border::from_kcut(&g, &cut, &BTreeMap::new()).unwrap();
        let ok = VertexPartition::new(4, vec![vec![0, 1], vec![2], vec![3]]).unwrap();
        let bad = VertexPartition::new(4, vec![vec![0], vec![1, 2], vec![3]]).unwrap();
        assert!(b.agrees_with(&ok));
        assert!(!b.agrees_with(&bad));
    }
}
