use std::collections::BTreeSet;

use itertools::Itertools;

use super::{BitSet, Graph, GraphError};

/// All maximal cliques by Bron–Kerbosch with Tomita pivoting. Each clique
/// is sorted; the list is in lexicographic order.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    bron_kerbosch(g, &mut current, BitSet::full(g.n()), BitSet::new(g.n()), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    g: &Graph,
    current: &mut Vec<usize>,
    mut candidates: BitSet,
    mut excluded: BitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|&u| (candidates.intersection_count(g.neighbors(u)), std::cmp::Reverse(u)))
        .expect("candidates is non-empty");
    let mut branch = candidates.clone();
    branch.difference_with(g.neighbors(pivot));
    for v in branch.iter().collect::<Vec<_>>() {
        current.push(v);
        bron_kerbosch(
            g,
            current,
            candidates.intersection(g.neighbors(v)),
            excluded.intersection(g.neighbors(v)),
            out,
        );
        current.pop();
        candidates.remove(v);
        excluded.insert(v);
    }
}

/// Every clique on exactly `d` vertices, each sorted, in lexicographic order.
///
/// Every d-clique lies inside some maximal clique, so the d-subsets of the
/// maximal cliques cover them all; duplicates are merged.
pub fn cliques_of_size(g: &Graph, d: usize) -> Result<Vec<Vec<usize>>, GraphError> {
    if d == 0 {
        return Err(GraphError::ZeroCliqueSize);
    }
    let mut found = BTreeSet::new();
    for c in maximal_cliques(g) {
        if c.len() >= d {
            for sub in c.iter().copied().combinations(d) {
                found.insert(sub);
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::kneser_graph_pairs;

    #[test]
    fn triangle_has_one_triangle() {
        assert_eq!(cliques_of_size(&Graph::complete(3), 3).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn petersen_is_triangle_free() {
        let p = kneser_graph_pairs(5);
        let mut triples = 0;
        for a in 0..10 {
            for b in a + 1..10 {
                for c in b + 1..10 {
                    if p.is_clique(&[a, b, c]) {
                        triples += 1;
                    }
                }
            }
        }
        assert_eq!(triples, 0);
        assert!(cliques_of_size(&p, 3).unwrap().is_empty());
        assert_eq!(cliques_of_size(&p, 2).unwrap().len(), 15);
    }

    #[test]
    fn zero_size_rejected() {
        assert!(matches!(
            cliques_of_size(&Graph::complete(2), 0),
            Err(GraphError::ZeroCliqueSize)
        ));
    }

    #[test]
    fn maximal_cliques_of_cycle() {
        let c = maximal_cliques(&Graph::cycle(5));
        assert_eq!(c, vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]);
        assert_eq!(maximal_cliques(&Graph::empty(3)), vec![vec![0], vec![1], vec![2]]);
    }
}
