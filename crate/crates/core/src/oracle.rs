//! Brute-force ground truth. Every routine here is deliberately naive and
//! shares no search code with the algorithms it checks.

use crate::combinatorics::for_each_grouping;
use crate::error::{KcutError, Result};
use crate::graph::{Forest, Partition, Weight, WeightedGraph};
use crate::vertex_set::VertexSet;

pub const MAX_PARTITION_VERTICES: usize = 12;
pub const MAX_CENSUS_VERTICES: usize = 20;

fn local_edges(g: &WeightedGraph) -> (Vec<usize>, Vec<(usize, usize, Weight)>) {
    let verts = g.vertices().to_vec();
    let mut local = vec![usize::MAX; g.universe()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let edges = g.edges().iter().map(|e| (local[e.u], local[e.v], e.weight)).collect();
    (verts, edges)
}

/// Optimum k-cut weight and every partition attaining it, by scanning all
/// restricted-growth strings with exactly `k` blocks.
pub fn brute_min_kcuts(g: &WeightedGraph, k: usize) -> Result<(Weight, Vec<Partition>)> {
    let n = g.vertex_count();
    if n > MAX_PARTITION_VERTICES {
        return Err(KcutError::TooLarge(format!("{n} vertices (oracle limit {MAX_PARTITION_VERTICES})")));
    }
    if k == 0 || k > n {
        return Err(KcutError::TooFewVertices { needed: k.max(1), available: n });
    }
    let (_, edges) = local_edges(g);
    let mut best = Weight::MAX;
    let mut argmin: Vec<Vec<usize>> = Vec::new();
    for_each_grouping(n, k, |labels| {
        let w: Weight = edges.iter().filter(|e| labels[e.0] != labels[e.1]).map(|e| e.2).sum();
        if w < best {
            best = w;
            argmin.clear();
        }
        if w == best {
            argmin.push(labels.to_vec());
        }
    });
    let mut parts: Vec<Partition> = argmin.iter().map(|l| Partition::from_labels(g.vertices(), l)).collect();
    parts.sort();
    Ok((best, parts))
}

/// Every proper nonempty vertex subset whose boundary weight satisfies
/// `keep`. Complementary sides are both listed.
pub fn brute_cut_census(g: &WeightedGraph, keep: impl Fn(Weight) -> bool) -> Result<Vec<VertexSet>> {
    let n = g.vertex_count();
    if n > MAX_CENSUS_VERTICES {
        return Err(KcutError::TooLarge(format!("{n} vertices (census limit {MAX_CENSUS_VERTICES})")));
    }
    let (verts, edges) = local_edges(g);
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n).saturating_sub(1) {
        let w: Weight = edges
            .iter()
            .filter(|e| (mask >> e.0 & 1) != (mask >> e.1 & 1))
            .map(|e| e.2)
            .sum();
        if keep(w) {
            out.push(VertexSet::from_vertices(
                g.universe(),
                (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]),
            ));
        }
    }
    out.sort();
    Ok(out)
}

/// Every `(F, s, k)`-valid partition, found by filtering all k-partitions
/// of the forest's vertices: a partition is valid iff the forest edges it
/// cuts number at most `s` and the forest has at least `s` edges (the
/// remaining deletions can then be spent inside parts).
pub fn brute_valid_partitions(f: &Forest, s: usize, k: usize) -> Result<Vec<Partition>> {
    let n = f.vertices().count();
    if n > MAX_PARTITION_VERTICES {
        return Err(KcutError::TooLarge(format!("{n} vertices (oracle limit {MAX_PARTITION_VERTICES})")));
    }
    if s > f.edges().len() || s + f.component_count() < k {
        return Ok(Vec::new());
    }
    let verts = f.vertices().to_vec();
    let mut local = vec![usize::MAX; f.vertices().universe()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let edges: Vec<(usize, usize)> = f.edges().iter().map(|&(a, b)| (local[a], local[b])).collect();
    let mut out = Vec::new();
    for_each_grouping(n, k, |labels| {
        let cut = edges.iter().filter(|&&(a, b)| labels[a] != labels[b]).count();
        if cut <= s {
            out.push(Partition::from_labels(f.vertices(), labels));
        }
    });
    out.sort();
    Ok(out)
}
