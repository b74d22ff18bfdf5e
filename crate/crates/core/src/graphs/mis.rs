//! Exact maximum independent set by branch and bound.
//!
//! The search runs as a maximum-clique search on the complement graph.
//! Candidates are bounded with a greedy sequential colouring: vertices of
//! one colour class are pairwise non-adjacent, so the number of colours
//! bounds the clique that can still be added. Colouring proceeds in
//! increasing vertex order, which makes the returned set deterministic.

use super::{BitSet, Graph, GraphError};

/// Largest graph the exact search accepts by default.
pub const DEFAULT_SEARCH_BUDGET: usize = 200;

/// A maximum independent set of `g`, sorted ascending.
pub fn max_independent_set(g: &Graph) -> Result<Vec<usize>, GraphError> {
    max_independent_set_with_budget(g, DEFAULT_SEARCH_BUDGET)
}

pub fn max_independent_set_with_budget(
    g: &Graph,
    budget: usize,
) -> Result<Vec<usize>, GraphError> {
    if g.n() > budget {
        return Err(GraphError::BudgetExceeded { n: g.n(), budget });
    }
    Ok(clique_search(&g.complement()))
}

pub fn independence_number(g: &Graph) -> Result<usize, GraphError> {
    max_independent_set(g).map(|s| s.len())
}

/// A maximum clique of `g`, sorted ascending.
pub fn max_clique(g: &Graph) -> Result<Vec<usize>, GraphError> {
    max_independent_set(&g.complement())
}

fn clique_search(h: &Graph) -> Vec<usize> {
    let mut search = CliqueSearch {
        adj: (0..h.n()).map(|v| h.neighbors(v).clone()).collect(),
        best: Vec::new(),
        current: Vec::new(),
    };
    search.expand(BitSet::full(h.n()));
    let mut best = search.best;
    best.sort_unstable();
    best
}

struct CliqueSearch {
    adj: Vec<BitSet>,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl CliqueSearch {
    fn expand(&mut self, mut candidates: BitSet) {
        let (order, colours) = self.colour_sort(&candidates);
        for idx in (0..order.len()).rev() {
            if self.current.len() + colours[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            let next = candidates.intersection(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            candidates.remove(v);
        }
    }

    /// Vertices of `candidates` grouped by greedy colour class, with the
    /// running colour count of each position.
    fn colour_sort(&self, candidates: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = candidates.clone();
        let mut order = Vec::with_capacity(candidates.count());
        let mut colours = Vec::with_capacity(order.capacity());
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut class = uncoloured.clone();
            while let Some(v) = class.first() {
                class.remove(v);
                class.difference_with(&self.adj[v]);
                uncoloured.remove(v);
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::strong_product;

    fn brute_force_alpha(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|mask| {
                let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                g.is_independent(&set)
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_named_graphs() {
        assert_eq!(independence_number(&Graph::cycle(5)).unwrap(), 2);
        for n in 1..8 {
            assert_eq!(independence_number(&Graph::complete(n)).unwrap(), 1);
            assert_eq!(independence_number(&Graph::empty(n)).unwrap(), n);
        }
        assert_eq!(independence_number(&Graph::empty(0)).unwrap(), 0);
    }

    #[test]
    fn pentagon_squared() {
        let c5 = Graph::cycle(5);
        let p = strong_product(&c5, &c5);
        assert_eq!(p.n(), 25);
        let brute = brute_force_alpha(&p);
        assert_eq!(brute, 5);
        let set = max_independent_set(&p).unwrap();
        assert_eq!(set.len(), 5);
        assert!(p.is_independent(&set));
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::empty(10);
        assert!(matches!(
            max_independent_set_with_budget(&g, 9),
            Err(GraphError::BudgetExceeded { n: 10, budget: 9 })
        ));
    }

    #[test]
    fn deterministic_result() {
        let g = Graph::cycle(9);
        let a = max_independent_set(&g).unwrap();
        let b = max_independent_set(&g).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn max_clique_of_cycle_complement() {
        let g = Graph::cycle(7).complement();
        assert_eq!(max_clique(&g).unwrap().len(), 3);
    }
}
