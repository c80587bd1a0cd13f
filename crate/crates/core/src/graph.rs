//! Weighted multigraphs, vertex partitions and forests.
//!
//! Vertices always carry their *original* ids. Deleting vertices shrinks the
//! active set but never relabels, so a [`VertexSet`] computed on a subgraph
//! can be compared directly against one computed on the full graph.

use std::collections::BTreeMap;

use crate::error::{KcutError, Result};
use crate::union_find::DisjointSet;
use crate::vertex_set::VertexSet;

pub type Weight = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
}

/// Undirected graph with nonnegative integer weights in merged form: no
/// self-loops, at most one edge per vertex pair, edges sorted by `(u, v)`
/// with `u < v`. Zero-weight edges are dropped since they never contribute
/// to a cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    active: VertexSet,
    edges: Vec<Edge>,
    total_weight: Weight,
}

impl WeightedGraph {
    /// Builds a graph on vertices `0..n`, summing parallel edges.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Weight)>,
    {
        Self::on_vertices(VertexSet::full(n), edges)
    }

    /// Builds a graph whose vertex set is `active` inside a larger universe.
    pub fn on_vertices<I>(active: VertexSet, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Weight)>,
    {
        let universe = active.universe();
        let mut merged: BTreeMap<(usize, usize), Weight> = BTreeMap::new();
        let mut total: Weight = 0;
        for (a, b, w) in edges {
            for x in [a, b] {
                if !active.contains(x) {
                    return Err(KcutError::VertexOutOfRange {
                        vertex: x,
                        universe,
                    });
                }
            }
            if a == b {
                return Err(KcutError::SelfLoop(a));
            }
            total = total.checked_add(w).ok_or(KcutError::WeightOverflow)?;
            *merged.entry((a.min(b), a.max(b))).or_insert(0) += w;
        }
        let edges = merged
            .into_iter()
            .filter(|&(_, w)| w > 0)
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        Ok(WeightedGraph {
            active,
            edges,
            total_weight: total,
        })
    }

    pub fn universe(&self) -> usize {
        self.active.universe()
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.active
    }

    pub fn vertex_count(&self) -> usize {
        self.active.count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    /// Total weight of edges with exactly one endpoint in `s`.
    pub fn boundary_weight(&self, s: &VertexSet) -> Weight {
        self.edges
            .iter()
            .filter(|e| s.contains(e.u) != s.contains(e.v))
            .map(|e| e.weight)
            .sum()
    }

    /// Weight of edges joining different parts of `p`, each counted once.
    pub fn partition_weight(&self, p: &Partition) -> Result<Weight> {
        if p.covered() != self.active {
            return Err(KcutError::IncompleteCover);
        }
        let labels = p.labels();
        Ok(self
            .edges
            .iter()
            .filter(|e| labels[e.u] != labels[e.v])
            .map(|e| e.weight)
            .sum())
    }

    /// Connected components of the active vertices, ordered by minimum vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut ds = DisjointSet::new(self.universe());
        for e in &self.edges {
            ds.union(e.u, e.v);
        }
        group_by_root(&self.active, &mut ds)
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Induced subgraph on the active vertices outside `a`.
    pub fn delete_vertices(&self, a: &VertexSet) -> Result<WeightedGraph> {
        let remaining = self.active.difference(a);
        if remaining.is_empty() {
            return Err(KcutError::FullDeletion);
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| !a.contains(e.u) && !a.contains(e.v))
            .copied()
            .collect();
        let total_weight = edges.iter().map(|e| e.weight).sum();
        Ok(WeightedGraph {
            active: remaining,
            edges,
            total_weight,
        })
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: Weight) -> Result<WeightedGraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                e.weight
                    .checked_mul(factor)
                    .map(|w| (e.u, e.v, w))
                    .ok_or(KcutError::WeightOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedGraph::on_vertices(self.active.clone(), edges)
    }

    /// Contracts edge `e` of a compact graph (active set `0..h`).
    ///
    /// `mapping[i]` is the set of original vertices absorbed by supernode `i`.
    /// The merged supernode takes the smaller id and higher ids shift down by
    /// one; parallel edges are summed and the contracted edge disappears.
    pub fn contract_edge(
        &self,
        e: usize,
        mapping: &[VertexSet],
    ) -> Result<(WeightedGraph, Vec<VertexSet>)> {
        let h = self.universe();
        if self.vertex_count() != h || mapping.len() != h {
            return Err(KcutError::InvalidArgument(
                "contract_edge needs a compact graph and one mapping entry per vertex".into(),
            ));
        }
        let edge = *self.edges.get(e).ok_or(KcutError::EdgeNotFound(e))?;
        let (keep, gone) = (edge.u, edge.v);
        let relabel = |x: usize| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        };
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|d| (relabel(d.u), relabel(d.v), d.weight))
            .filter(|&(a, b, _)| a != b)
            .collect();
        let mut new_mapping = Vec::with_capacity(h - 1);
        for (i, block) in mapping.iter().enumerate() {
            if i == gone {
                continue;
            }
            if i == keep {
                new_mapping.push(block.union(&mapping[gone]));
            } else {
                new_mapping.push(block.clone());
            }
        }
        Ok((WeightedGraph::new(h - 1, edges)?, new_mapping))
    }
}

pub(crate) fn group_by_root(active: &VertexSet, ds: &mut DisjointSet) -> Vec<VertexSet> {
    let universe = active.universe();
    let mut by_root: BTreeMap<usize, VertexSet> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new();
    for v in active.iter() {
        let r = ds.find(v);
        by_root
            .entry(r)
            .or_insert_with(|| {
                order.push(r);
                VertexSet::empty(universe)
            })
            .insert(v);
    }
    // `order` is by first (= minimum) vertex seen
    order
        .into_iter()
        .map(|r| by_root.remove(&r).expect("root present"))
        .collect()
}

/// A set of disjoint nonempty vertex sets, kept sorted by minimum vertex.
///
/// The derived ordering compares the part lists lexicographically, which
/// makes the canonical form usable as a set key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<VertexSet>,
}

impl Partition {
    pub fn new(mut parts: Vec<VertexSet>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Ok(Partition { parts });
        };
        let universe = first.universe();
        let mut seen = VertexSet::empty(universe);
        for p in &parts {
            if p.universe() != universe {
                return Err(KcutError::InvalidArgument("parts over different universes".into()));
            }
            if p.is_empty() {
                return Err(KcutError::EmptyPart);
            }
            if p.intersects(&seen) {
                return Err(KcutError::OverlappingParts);
            }
            seen.union_with(p);
        }
        parts.sort_by_key(|p| p.first());
        Ok(Partition { parts })
    }

    /// Groups vertices of `vertices` by label; labels need not be contiguous.
    pub fn from_labels(vertices: &VertexSet, labels: &[usize]) -> Self {
        let mut groups: BTreeMap<usize, VertexSet> = BTreeMap::new();
        for v in vertices.iter() {
            groups
                .entry(labels[v])
                .or_insert_with(|| VertexSet::empty(vertices.universe()))
                .insert(v);
        }
        let mut parts: Vec<_> = groups.into_values().collect();
        parts.sort_by_key(|p| p.first());
        Partition { parts }
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.parts.first().map_or(0, |p| p.universe())
    }

    pub fn covered(&self) -> VertexSet {
        let mut all = VertexSet::empty(self.universe());
        for p in &self.parts {
            all.union_with(p);
        }
        all
    }

    /// Part index per vertex; `usize::MAX` for uncovered vertices.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![usize::MAX; self.universe()];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                labels[v] = i;
            }
        }
        labels
    }

    /// Adds `part` (disjoint from every existing part) and re-canonicalizes.
    pub fn with_part(&self, part: VertexSet) -> Self {
        let mut parts = self.parts.clone();
        parts.push(part);
        parts.sort_by_key(|p| p.first());
        Partition { parts }
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|p| p.to_vec()).collect()
    }
}

/// Acyclic edge subset over an active vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    active: VertexSet,
    edges: Vec<(usize, usize)>,
}

impl Forest {
    pub fn new(active: VertexSet, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut ds = DisjointSet::new(active.universe());
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for x in [a, b] {
                if !active.contains(x) {
                    return Err(KcutError::VertexOutOfRange {
                        vertex: x,
                        universe: active.universe(),
                    });
                }
            }
            if a == b {
                return Err(KcutError::SelfLoop(a));
            }
            if !ds.union(a, b) {
                return Err(KcutError::CycleInForest);
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        Ok(Forest {
            active,
            edges: normalized,
        })
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.active
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// κ(F): every active vertex counts, isolated ones included.
    pub fn component_count(&self) -> usize {
        self.active.count() - self.edges.len()
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_without(&[])
    }

    /// Components after deleting the forest edges at the given indices.
    pub fn components_without(&self, deleted: &[usize]) -> Vec<VertexSet> {
        let mut ds = DisjointSet::new(self.active.universe());
        let mut skip = deleted.iter().peekable();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if skip.peek() == Some(&&i) {
                skip.next();
                continue;
            }
            ds.union(a, b);
        }
        group_by_root(&self.active, &mut ds)
    }

    /// F[V − a]: drops the vertices of `a` and every incident edge.
    pub fn restrict(&self, a: &VertexSet) -> Result<Forest> {
        let remaining = self.active.difference(a);
        if remaining.is_empty() {
            return Err(KcutError::FullDeletion);
        }
        Ok(Forest {
            active: remaining,
            edges: self
                .edges
                .iter()
                .filter(|&&(x, y)| !a.contains(x) && !a.contains(y))
                .copied()
                .collect(),
        })
    }

    /// Number of forest edges with exactly one endpoint in `a`.
    pub fn crossing(&self, a: &VertexSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(x, y)| a.contains(x) != a.contains(y))
            .count()
    }

    /// Number of forest edges whose endpoints lie in different parts.
    pub fn partition_crossing(&self, p: &Partition) -> usize {
        let labels = p.labels();
        self.edges
            .iter()
            .filter(|&&(x, y)| labels[x] != labels[y])
            .count()
    }
}
