//! Randomized edge contraction: the small-cut enumerator and repeated
//! contraction for minimum k-cuts.
//!
//! A contraction phase picks edges with probability proportional to weight
//! until the requested number of supernodes remains. It is implemented with
//! independent exponential clocks: edge `e` fires at time `Exp(w_e)` and
//! edges are contracted in firing order, skipping those whose endpoints are
//! already merged. By memorylessness, the next non-loop edge to fire is
//! distributed proportionally to weight, which is exactly the sequential
//! process.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{for_each_grouping, stirling2};
use crate::config::{mix_seed, Rational, ScheduleConfig};
use crate::error::{KcutError, Result};
use crate::graph::{group_by_root, Partition, Weight, WeightedGraph};
use crate::union_find::DisjointSet;
use crate::vertex_set::VertexSet;

/// A cut side together with its boundary weight in the graph it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutRecord {
    pub set: VertexSet,
    pub weight: Weight,
    pub forest_crossings: Option<usize>,
}

impl CutRecord {
    pub fn new(set: VertexSet, weight: Weight) -> Self {
        CutRecord {
            set,
            weight,
            forest_crossings: None,
        }
    }
}

/// Normalization against an upper bound `opt_upper` on the minimum k-cut.
///
/// A normalized weight is `w̄ = 2k·w / opt_upper`, so the optimum k-cut
/// totals `2k`. Comparisons are done by integer cross-multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormContext {
    pub opt_upper: Weight,
    pub k: usize,
}

impl NormContext {
    pub fn new(opt_upper: Weight, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(KcutError::InvalidArgument("k must be positive".into()));
        }
        Ok(NormContext { opt_upper, k })
    }

    /// `w̄(weight) ≤ beta`, evaluated exactly.
    pub fn within(&self, weight: Weight, beta: &Rational) -> bool {
        if *beta.numer() < 0 {
            return false;
        }
        let lhs = 2 * self.k as i128 * weight as i128 * beta.denom();
        let rhs = beta.numer() * self.opt_upper as i128;
        lhs <= rhs
    }

    /// `w̄(weight)`, or `None` when the bound is zero.
    pub fn normalized(&self, weight: Weight) -> Option<Rational> {
        (self.opt_upper > 0).then(|| Rational::new(2 * self.k as i128 * weight as i128, self.opt_upper as i128))
    }
}

/// Outcome of one contraction phase.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// Contracted graph on supernodes `0..blocks.len()`.
    pub graph: WeightedGraph,
    /// Original vertices absorbed by each supernode, ordered by minimum vertex.
    pub blocks: Vec<VertexSet>,
}

/// Contract random edges (probability ∝ weight) until at most `target`
/// supernodes remain, or no edge is left.
pub(crate) fn contract_blocks<R: Rng>(g: &WeightedGraph, target: usize, rng: &mut R) -> Vec<VertexSet> {
    let mut ds = DisjointSet::new(g.universe());
    let mut remaining = g.vertex_count();
    if remaining > target {
        let mut clocks: Vec<(f64, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
                (-u.ln() / e.weight as f64, i)
            })
            .collect();
        clocks.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, i) in clocks {
            let e = &g.edges()[i];
            if ds.union(e.u, e.v) {
                remaining -= 1;
                if remaining <= target {
                    break;
                }
            }
        }
    }
    group_by_root(g.vertices(), &mut ds)
}

fn quotient(g: &WeightedGraph, blocks: &[VertexSet]) -> WeightedGraph {
    let mut label = vec![usize::MAX; g.universe()];
    for (i, b) in blocks.iter().enumerate() {
        for v in b.iter() {
            label[v] = i;
        }
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| (label[e.u], label[e.v], e.weight))
        .filter(|&(a, b, _)| a != b);
    WeightedGraph::new(blocks.len(), edges).expect("quotient of a valid graph")
}

fn blocks_weight(g: &WeightedGraph, blocks: &[VertexSet]) -> Weight {
    let mut label = vec![usize::MAX; g.universe()];
    for (i, b) in blocks.iter().enumerate() {
        for v in b.iter() {
            label[v] = i;
        }
    }
    g.edges().iter().filter(|e| label[e.u] != label[e.v]).map(|e| e.weight).sum()
}

/// One contraction phase down to exactly `h` supernodes.
pub fn contraction_phase(g: &WeightedGraph, h: usize, seed: u64) -> Result<Contraction> {
    let n = g.vertex_count();
    if h == 0 || n < h {
        return Err(KcutError::TooFewVertices { needed: h.max(1), available: n });
    }
    let components = g.component_count();
    if components > h {
        return Err(KcutError::Disconnected { components });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = contract_blocks(g, h, &mut rng);
    Ok(Contraction {
        graph: quotient(g, &blocks),
        blocks,
    })
}

/// `ceil(c_rep · n^exponent · ln n)`, at least 1.
pub fn repetitions(n: usize, exponent: f64, c_rep: f64) -> u64 {
    let n = n.max(2) as f64;
    let r = (c_rep * n.powf(exponent) * n.ln()).ceil();
    if r >= u64::MAX as f64 {
        u64::MAX
    } else {
        (r as u64).max(1)
    }
}

const MAX_EXPANDED_BLOCKS: usize = 24;
const MAX_SCAN_VERTICES: usize = 26;
const CHUNK: u64 = 512;

/// Whether an exact scan over all `2^n` vertex subsets is cheaper than
/// `reps` contraction phases to `h` supernodes.
fn scan_is_cheaper(g: &WeightedGraph, h: usize, reps: u64) -> bool {
    let n = g.vertex_count();
    if n > MAX_SCAN_VERTICES {
        return false;
    }
    let m = g.edge_count() as f64;
    let scan = (1u64 << n) as f64 * (2.0 * m / n.max(1) as f64 + 1.0);
    let phase = m * (m + 1.0).log2().max(1.0) + (1u64 << h.min(MAX_EXPANDED_BLOCKS)) as f64;
    scan <= reps as f64 * phase
}

/// All proper nonempty subsets of the active vertices whose boundary weight
/// satisfies `keep`, via a Gray-code walk with incremental boundary updates.
pub(crate) fn scan_all_cuts(g: &WeightedGraph, keep: impl Fn(Weight) -> bool) -> Result<Vec<CutRecord>> {
    let verts = g.vertices().to_vec();
    let n = verts.len();
    if n > MAX_SCAN_VERTICES {
        return Err(KcutError::TooLarge(format!("exact cut scan over {n} vertices")));
    }
    let mut local = vec![usize::MAX; g.universe()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let mut adj: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); n];
    let mut degree = vec![0 as Weight; n];
    for e in g.edges() {
        let (a, b) = (local[e.u], local[e.v]);
        adj[a].push((b, e.weight));
        adj[b].push((a, e.weight));
        degree[a] += e.weight;
        degree[b] += e.weight;
    }
    let mut out = Vec::new();
    let mut inside = vec![false; n];
    let mut mask: u64 = 0;
    let mut boundary: i128 = 0;
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let w_to_set: i128 = adj[v].iter().filter(|(u, _)| inside[*u]).map(|&(_, w)| w as i128).sum();
        if inside[v] {
            boundary += 2 * w_to_set - degree[v] as i128;
        } else {
            boundary += degree[v] as i128 - 2 * w_to_set;
        }
        inside[v] = !inside[v];
        mask ^= 1 << v;
        if mask == full {
            continue;
        }
        let weight = boundary as Weight;
        if keep(weight) {
            let set = VertexSet::from_vertices(g.universe(), (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]));
            out.push(CutRecord::new(set, weight));
        }
    }
    Ok(out)
}

/// Distinct cut sides seen over repeated contraction phases, plus the
/// lightest `h`-cut formed by any phase's blocks.
pub(crate) struct SampledCuts {
    pub cuts: Vec<CutRecord>,
    pub best_h_cut: Option<Weight>,
}

fn expand_blocks(blocks: &[VertexSet], universe: usize, out: &mut HashSet<VertexSet>) -> Result<()> {
    let b = blocks.len();
    if b > MAX_EXPANDED_BLOCKS {
        return Err(KcutError::TooLarge(format!("{b} supernodes to expand")));
    }
    for mask in 1u64..(1u64 << b).saturating_sub(1) {
        let mut s = VertexSet::empty(universe);
        for (i, block) in blocks.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.union_with(block);
            }
        }
        out.insert(s);
    }
    Ok(())
}

/// Runs `phases` contraction phases to `h` supernodes (in parallel chunks,
/// each with its own derived seed) and collects every supernode union.
/// When `expand` is false only the h-cut bound is tracked.
pub(crate) fn sample_cuts(g: &WeightedGraph, h: usize, phases: u64, seed: u64, expand: bool) -> Result<SampledCuts> {
    let chunks = phases.div_ceil(CHUNK);
    let partials: Vec<Result<(HashSet<VertexSet>, Option<Weight>)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, c));
            let mut seen = HashSet::new();
            let mut best: Option<Weight> = None;
            let count = CHUNK.min(phases - c * CHUNK);
            for _ in 0..count {
                let blocks = contract_blocks(g, h, &mut rng);
                if blocks.len() == h {
                    let w = blocks_weight(g, &blocks);
                    best = Some(best.map_or(w, |b| b.min(w)));
                }
                if expand {
                    expand_blocks(&blocks, g.universe(), &mut seen)?;
                }
            }
            Ok((seen, best))
        })
        .collect();
    let mut all: HashSet<VertexSet> = HashSet::new();
    let mut best: Option<Weight> = None;
    for p in partials {
        let (seen, b) = p?;
        all.extend(seen);
        if let Some(b) = b {
            best = Some(best.map_or(b, |x| x.min(b)));
        }
    }
    let mut cuts: Vec<CutRecord> = all
        .into_iter()
        .map(|s| {
            let w = g.boundary_weight(&s);
            CutRecord::new(s, w)
        })
        .collect();
    cuts.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| a.set.cmp(&b.set)));
    Ok(SampledCuts { cuts, best_h_cut: best })
}

/// Candidate cut sides for a threshold test: either sampled by contraction
/// to `h` supernodes or, when cheaper, every proper subset exactly.
pub(crate) fn candidate_cuts(
    g: &WeightedGraph,
    h: usize,
    alpha: f64,
    cfg: &ScheduleConfig,
    seed: u64,
    keep: impl Fn(Weight) -> bool,
) -> Result<Vec<CutRecord>> {
    let n = g.vertex_count();
    if n < 2 {
        return Ok(Vec::new());
    }
    let h = h.clamp(1, n);
    let reps = repetitions(n, 2.0 * alpha, cfg.c_rep);
    if h == n || (cfg.exhaustive_cutover && scan_is_cheaper(g, h, reps)) {
        return scan_all_cuts(g, keep);
    }
    let sampled = sample_cuts(g, h, reps, seed, true)?;
    Ok(sampled.cuts.into_iter().filter(|c| keep(c.weight)).collect())
}

/// Every `A ⊆ V` (proper, nonempty) with `w(∂A) ≤ α·OPT_h / h`, w.h.p.
///
/// `OPT_h` is replaced by the lightest h-cut `Ĥ ≥ OPT_h` formed by the
/// blocks of any phase, which only enlarges the threshold. Output is sorted
/// by weight, then canonical set order.
pub fn enum_small_cuts(
    g: &WeightedGraph,
    h: usize,
    alpha: Rational,
    cfg: &ScheduleConfig,
    seed: u64,
) -> Result<Vec<CutRecord>> {
    if h < 2 {
        return Err(KcutError::InvalidArgument("h must be at least 2".into()));
    }
    if *alpha.numer() < 0 {
        return Err(KcutError::InvalidArgument("alpha must be nonnegative".into()));
    }
    let n = g.vertex_count();
    if n < h {
        return Err(KcutError::TooFewVertices { needed: h, available: n });
    }
    let components = g.component_count();
    if components > h {
        return Err(KcutError::Disconnected { components });
    }
    let alpha_f = crate::config::to_f64(&alpha);
    let reps = repetitions(n, 2.0 * alpha_f, cfg.c_rep);
    let exact = h == n || (cfg.exhaustive_cutover && scan_is_cheaper(g, h, reps));
    let (cuts, h_bound) = if exact {
        let bound_phases = reps.min(repetitions(n, 2.0, cfg.c_rep));
        let bound = sample_cuts(g, h, bound_phases, seed, false)?.best_h_cut;
        (scan_all_cuts(g, |_| true)?, bound)
    } else {
        let s = sample_cuts(g, h, reps, seed, true)?;
        (s.cuts, s.best_h_cut)
    };
    let Some(h_bound) = h_bound else {
        return Ok(Vec::new());
    };
    // w·h ≤ α·Ĥ
    let keep = |w: Weight| w as i128 * h as i128 * alpha.denom() <= alpha.numer() * h_bound as i128;
    let mut out: Vec<CutRecord> = cuts.into_iter().filter(|c| keep(c.weight)).collect();
    out.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| a.set.cmp(&b.set)));
    Ok(out)
}

/// All groupings of `pieces` into exactly `k` parts.
pub(crate) fn groupings(pieces: &[VertexSet], k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let universe = pieces.first().map_or(0, |p| p.universe());
    for_each_grouping(pieces.len(), k, |labels| {
        let mut parts = vec![VertexSet::empty(universe); k];
        for (piece, &l) in pieces.iter().zip(labels) {
            parts[l].union_with(piece);
        }
        out.push(Partition::new(parts).expect("disjoint pieces"));
    });
    out
}

/// Exact minimum k-cuts by building parts one at a time (each new part holds
/// the smallest unassigned vertex) with weight-bound pruning.
pub(crate) fn exact_min_kcuts(g: &WeightedGraph, k: usize) -> (Weight, Vec<Partition>) {
    struct Search<'a> {
        g: &'a WeightedGraph,
        best: Weight,
        found: Vec<Vec<VertexSet>>,
    }
    impl Search<'_> {
        fn rec(&mut self, rest: &VertexSet, parts_left: usize, cost: Weight, parts: &mut Vec<VertexSet>) {
            if cost > self.best {
                return;
            }
            if parts_left == 1 {
                if cost < self.best {
                    self.best = cost;
                    self.found.clear();
                }
                parts.push(rest.clone());
                self.found.push(parts.clone());
                parts.pop();
                return;
            }
            let anchor = rest.first().expect("nonempty rest");
            let others: Vec<usize> = rest.iter().filter(|&v| v != anchor).collect();
            let r = others.len();
            // the part may take at most r - (parts_left - 1) extra vertices
            let max_extra = r + 1 - parts_left;
            for mask in 0u64..(1u64 << r) {
                if mask.count_ones() as usize > max_extra {
                    continue;
                }
                let mut part = VertexSet::singleton(rest.universe(), anchor);
                for (i, &v) in others.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        part.insert(v);
                    }
                }
                let remainder = rest.difference(&part);
                let between: Weight = self
                    .g
                    .edges()
                    .iter()
                    .filter(|e| {
                        (part.contains(e.u) && remainder.contains(e.v)) || (part.contains(e.v) && remainder.contains(e.u))
                    })
                    .map(|e| e.weight)
                    .sum();
                parts.push(part);
                self.rec(&remainder, parts_left - 1, cost + between, parts);
                parts.pop();
            }
        }
    }
    let mut search = Search {
        g,
        best: Weight::MAX,
        found: Vec::new(),
    };
    search.rec(g.vertices(), k, 0, &mut Vec::new());
    let mut parts: Vec<Partition> = search
        .found
        .into_iter()
        .map(|p| Partition::new(p).expect("disjoint parts"))
        .collect();
    parts.sort();
    parts.dedup();
    (search.best, parts)
}

/// All minimum k-cuts, w.h.p., by repeated contraction to `k` supernodes
/// (`c_rep · n^{2(k-1)} · ln n` phases). Falls back to an exact
/// branch-and-bound enumeration when that is cheaper and the cutover is on.
pub fn karger_stein_min_kcut(
    g: &WeightedGraph,
    k: usize,
    cfg: &ScheduleConfig,
    seed: u64,
) -> Result<(Weight, Vec<Partition>)> {
    let n = g.vertex_count();
    if k == 0 {
        return Err(KcutError::InvalidArgument("k must be positive".into()));
    }
    if n < k {
        return Err(KcutError::TooFewVertices { needed: k, available: n });
    }
    let components = g.components();
    if components.len() >= k {
        let mut parts = groupings(&components, k);
        parts.sort();
        return Ok((0, parts));
    }
    let reps = repetitions(n, 2.0 * (k as f64 - 1.0), cfg.c_rep);
    if k == 1 || (cfg.exhaustive_cutover && n <= 20 && stirling2(n, k) <= reps as f64) {
        return Ok(exact_min_kcuts(g, k));
    }
    let chunks = reps.div_ceil(CHUNK);
    let partials: Vec<(Weight, HashMap<Partition, ()>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, c));
            let mut best = Weight::MAX;
            let mut found = HashMap::new();
            for _ in 0..CHUNK.min(reps - c * CHUNK) {
                let blocks = contract_blocks(g, k, &mut rng);
                let w = blocks_weight(g, &blocks);
                if w < best {
                    best = w;
                    found.clear();
                }
                if w == best {
                    found.insert(Partition::new(blocks).expect("disjoint blocks"), ());
                }
            }
            (best, found)
        })
        .collect();
    let best = partials.iter().map(|p| p.0).min().unwrap_or(Weight::MAX);
    let mut parts: Vec<Partition> = partials
        .into_iter()
        .filter(|p| p.0 == best)
        .flat_map(|p| p.1.into_keys())
        .collect();
    parts.sort();
    parts.dedup();
    Ok((best, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::rational;
    use crate::generators::{cycle, path};

    fn sampling_only() -> ScheduleConfig {
        ScheduleConfig {
            exhaustive_cutover: false,
            ..ScheduleConfig::default()
        }
    }

    #[test]
    fn phase_identity_when_already_small() {
        let g = cycle(4);
        let c = contraction_phase(&g, 4, 1).unwrap();
        assert_eq!(c.blocks.len(), 4);
        assert_eq!(c.graph, g);
    }

    #[test]
    fn phase_on_single_edge() {
        let c = contraction_phase(&path(2), 1, 9).unwrap();
        assert_eq!(c.blocks.len(), 1);
        assert_eq!(c.blocks[0].to_vec(), vec![0, 1]);
    }

    #[test]
    fn phase_on_c4_leaves_two_arcs() {
        let g = cycle(4);
        for seed in 0..50 {
            let c = contraction_phase(&g, 2, seed).unwrap();
            assert_eq!(c.blocks.len(), 2);
            for b in &c.blocks {
                // an arc of C4 has boundary exactly 2
                assert_eq!(g.boundary_weight(b), 2);
            }
            assert_eq!(c.graph.total_weight(), 2);
        }
    }

    #[test]
    fn phase_errors() {
        assert!(matches!(contraction_phase(&path(2), 3, 0), Err(KcutError::TooFewVertices { .. })));
        let g = WeightedGraph::new(4, [(0, 1, 1), (2, 3, 1)]).unwrap();
        assert!(matches!(contraction_phase(&g, 1, 0), Err(KcutError::Disconnected { components: 2 })));
    }

    #[test]
    fn small_cuts_on_c6() {
        let cuts = enum_small_cuts(&cycle(6), 2, rational(2, 1), &sampling_only(), 3).unwrap();
        assert_eq!(cuts.len(), 30);
        assert!(cuts.iter().all(|c| c.weight == 2));
    }

    #[test]
    fn small_cuts_alpha_zero_is_empty() {
        let cuts = enum_small_cuts(&cycle(6), 2, rational(0, 1), &sampling_only(), 3).unwrap();
        assert!(cuts.is_empty());
    }

    #[test]
    fn small_cuts_c5_within_cap() {
        let cuts = enum_small_cuts(&cycle(5), 2, rational(2, 1), &sampling_only(), 5).unwrap();
        assert_eq!(cuts.len(), 20);
        assert!(20.0 <= 4.0 * 5f64.powi(4));
    }

    #[test]
    fn scan_and_sampling_agree() {
        let g = cycle(7);
        let a = enum_small_cuts(&g, 3, rational(3, 2), &sampling_only(), 1).unwrap();
        let b = enum_small_cuts(&g, 3, rational(3, 2), &ScheduleConfig::default(), 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn karger_stein_examples() {
        let cfg = sampling_only();
        let (w, parts) = karger_stein_min_kcut(&cycle(5), 3, &cfg, 11).unwrap();
        assert_eq!(w, 3);
        assert_eq!(parts.len(), 10);
        let (w, parts) = karger_stein_min_kcut(&path(3), 3, &cfg, 11).unwrap();
        assert_eq!(w, 2);
        assert_eq!(parts.len(), 1);
        // a tree with one lightest edge
        let tree = WeightedGraph::new(5, [(0, 1, 4), (1, 2, 1), (1, 3, 3), (3, 4, 2)]).unwrap();
        let (w, parts) = karger_stein_min_kcut(&tree, 2, &cfg, 2).unwrap();
        assert_eq!(w, 1);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].parts()[1].to_vec(), vec![2]);
        assert!(matches!(
            karger_stein_min_kcut(&path(2), 3, &cfg, 0),
            Err(KcutError::TooFewVertices { .. })
        ));
    }

    #[test]
    fn exact_fallback_matches_sampling() {
        let g = cycle(6);
        let a = karger_stein_min_kcut(&g, 3, &sampling_only(), 4).unwrap();
        let b = karger_stein_min_kcut(&g, 3, &ScheduleConfig::default(), 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn seeds_are_deterministic() {
        let g = cycle(8);
        let cfg = sampling_only();
        let a = enum_small_cuts(&g, 2, rational(3, 2), &cfg, 42).unwrap();
        let b = enum_small_cuts(&g, 2, rational(3, 2), &cfg, 42).unwrap();
        assert_eq!(a, b);
        let x = contraction_phase(&g, 3, 5).unwrap().blocks;
        let y = contraction_phase(&g, 3, 5).unwrap().blocks;
        assert_eq!(x, y);
    }

    #[test]
    fn norm_context_threshold_is_exact() {
        let norm = NormContext::new(3, 3).unwrap();
        // C6, k=3: w̄ ≤ 4 ⇔ 6w ≤ 12
        assert!(norm.within(2, &rational(4, 1)));
        assert!(!norm.within(3, &rational(4, 1)));
        assert!(!norm.within(2, &rational(59, 20)));
        assert_eq!(norm.normalized(2), Some(rational(4, 1)));
        assert!(!norm.within(0, &rational(-1, 1)));
    }
}
