//! Greedy load-balanced spanning tree packing.
//!
//! Tree `i` is a minimum spanning tree under the key `load_e / w_e`, where
//! `load_e` counts earlier trees that used `e`. Keys are compared exactly by
//! cross-multiplication; ties go to the lower edge index.

use std::cmp::Ordering;

use crate::error::{KcutError, Result};
use crate::graph::{Forest, Partition, WeightedGraph};
use crate::union_find::DisjointSet;

fn pack(g: &WeightedGraph, count: usize) -> Vec<Forest> {
    let edges = g.edges();
    let mut load = vec![0u64; edges.len()];
    let mut order: Vec<usize> = (0..edges.len()).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        order.sort_by(|&a, &b| {
            let lhs = load[a] as u128 * edges[b].weight as u128;
            let rhs = load[b] as u128 * edges[a].weight as u128;
            lhs.cmp(&rhs).then(a.cmp(&b))
        });
        let mut ds = DisjointSet::new(g.universe());
        let mut chosen = Vec::new();
        for &i in &order {
            let e = &edges[i];
            if ds.union(e.u, e.v) {
                load[i] += 1;
                chosen.push((e.u, e.v));
            }
        }
        out.push(Forest::new(g.vertices().clone(), chosen).expect("kruskal output is acyclic"));
    }
    out
}

/// `tree_count` spanning trees of a connected graph.
pub fn greedy_tree_pack(g: &WeightedGraph, tree_count: usize) -> Result<Vec<Forest>> {
    let components = g.component_count();
    if components > 1 {
        return Err(KcutError::Disconnected { components });
    }
    Ok(pack(g, tree_count))
}

/// Same packing, but on a disconnected graph each output is a maximal
/// spanning forest.
pub fn greedy_forest_pack(g: &WeightedGraph, tree_count: usize) -> Vec<Forest> {
    pack(g, tree_count)
}

/// `c_pack · k³ · m`, at least 1.
pub fn pack_size_for(k: usize, m: usize, c_pack: usize) -> usize {
    c_pack.saturating_mul(k.pow(3)).saturating_mul(m).max(1)
}

/// Index of the tree crossing `p` the fewest times, with that count.
/// Returns `None` for an empty tree list.
pub fn best_tree_crossing(trees: &[Forest], p: &Partition) -> Option<(usize, usize)> {
    trees
        .iter()
        .enumerate()
        .map(|(i, t)| (i, t.partition_crossing(p)))
        .min_by(|a, b| match a.1.cmp(&b.1) {
            Ordering::Equal => a.0.cmp(&b.0),
            o => o,
        })
}

/// Drops repeated trees, keeping first occurrences in order.
pub fn dedup_trees(trees: Vec<Forest>) -> Vec<Forest> {
    let mut seen = std::collections::HashSet::new();
    trees.into_iter().filter(|t| seen.insert(t.edges().to_vec())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path};
    use crate::vertex_set::VertexSet;

    #[test]
    fn tree_input_packs_itself() {
        let g = WeightedGraph::new(5, [(0, 1, 3), (1, 2, 1), (1, 3, 2), (3, 4, 7)]).unwrap();
        for t in greedy_tree_pack(&g, 4).unwrap() {
            assert_eq!(t.edges(), &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        }
    }

    #[test]
    fn c4_rotates_the_omitted_edge() {
        let g = cycle(4);
        let trees = greedy_tree_pack(&g, 4).unwrap();
        let mut omitted: Vec<(usize, usize)> = trees
            .iter()
            .map(|t| {
                assert_eq!(t.edges().len(), 3);
                *[(0, 1), (1, 2), (2, 3), (0, 3)].iter().find(|e| !t.edges().contains(e)).unwrap()
            })
            .collect();
        omitted.sort();
        omitted.dedup();
        assert_eq!(omitted.len(), 4);
    }

    #[test]
    fn k3_uses_each_tree_once() {
        let trees = greedy_tree_pack(&complete(3), 3).unwrap();
        assert_eq!(dedup_trees(trees).len(), 3);
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = WeightedGraph::new(4, [(0, 1, 1), (2, 3, 1)]).unwrap();
        assert!(matches!(greedy_tree_pack(&g, 1), Err(KcutError::Disconnected { components: 2 })));
        let forests = greedy_forest_pack(&g, 2);
        assert_eq!(forests[0].component_count(), 2);
    }

    #[test]
    fn pack_sizes() {
        assert_eq!(pack_size_for(3, 10, 1), 270);
        assert_eq!(pack_size_for(2, 1, 1), 8);
        assert_eq!(pack_size_for(2, 3, 2), 48);
    }

    #[test]
    fn crossing_counts() {
        let p5 = Forest::new(VertexSet::full(5), vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let arcs = Partition::new(vec![
            VertexSet::from_vertices(5, [0, 1]),
            VertexSet::from_vertices(5, [2]),
            VertexSet::from_vertices(5, [3, 4]),
        ])
        .unwrap();
        assert_eq!(best_tree_crossing(std::slice::from_ref(&p5), &arcs), Some((0, 2)));
        let whole = Partition::new(vec![VertexSet::full(5)]).unwrap();
        assert_eq!(best_tree_crossing(std::slice::from_ref(&p5), &whole), Some((0, 0)));
        let singles = Partition::new((0..5).map(|v| VertexSet::singleton(5, v)).collect()).unwrap();
        let trees = greedy_tree_pack(&path(5), 1).unwrap();
        assert_eq!(best_tree_crossing(&trees, &singles), Some((0, 4)));
        assert_eq!(best_tree_crossing(&[], &singles), None);
    }
}
