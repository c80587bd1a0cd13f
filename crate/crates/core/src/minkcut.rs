//! Recursive enumeration of all minimum k-cuts.
//!
//! For a forest `F` and a budget `s` of forest edges to delete, a call either
//! falls back to contraction (small `k`), brute-forces every valid partition
//! (small budget), or guesses one part `A` of the optimum, grouped by the
//! number `ℓ` of forest edges it cuts, and recurses on `G − A` with `k − 1`
//! and `s − ℓ`.
//!
//! Cut weights are compared in normalized units `w̄ = 2k·w / U` where `U` is
//! the best k-cut value known so far. Since `U ≥ OPT`, every threshold is at
//! least as permissive as with the true optimum.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{for_each_combination, for_each_grouping};
use crate::config::{mix_seed, rational, to_f64, Rational, ScheduleConfig};
use crate::contraction::{candidate_cuts, groupings, karger_stein_min_kcut, CutRecord, NormContext};
use crate::error::{KcutError, Result};
use crate::graph::{Forest, Partition, Weight, WeightedGraph};
use crate::tree_packing::{dedup_trees, greedy_forest_pack, pack_size_for};
use crate::vertex_set::VertexSet;

const MAX_FOREST_COMPONENTS: usize = 20;

fn int(v: usize) -> Rational {
    Rational::from_integer(v as i128)
}

/// `z(k, s) = s − (7/4 + slack)·k`.
pub fn budget_z(k: usize, s: usize, cfg: &ScheduleConfig) -> Rational {
    int(s) - (rational(7, 4) + cfg.budget_slack()) * int(k)
}

/// The line through `(3 − γ, 2)` and `(4, 2s/k)` in the (weight, crossings)
/// plane: `g(w) = ((2s/k − 2)/(1+γ))·w + 8/(1+γ) + (s/k)(2 − 8/(1+γ))`.
pub fn line_g(k: usize, s: usize, cfg: &ScheduleConfig, w: &Rational) -> Result<Rational> {
    if s <= k {
        return Err(KcutError::InvalidArgument(format!("line needs s > k, got s={s}, k={k}")));
    }
    let one = Rational::one();
    let g1 = one + cfg.gamma;
    let ratio = int(s) / int(k);
    Ok((ratio * 2 - 2) / g1 * w + rational(8, 1) / g1 + ratio * (rational(2, 1) - rational(8, 1) / g1))
}

/// `β_ℓ = g⁻¹(ℓ) = (kℓ(1+γ) − 8k + s(6 − 2γ)) / (2(s − k))`.
pub fn beta_ell(k: usize, s: usize, cfg: &ScheduleConfig, ell: usize) -> Result<Rational> {
    if s <= k {
        return Err(KcutError::InvalidArgument(format!("line needs s > k, got s={s}, k={k}")));
    }
    let gamma = cfg.gamma;
    let num = int(k) * int(ell) * (Rational::one() + gamma) - int(8 * k) + int(s) * (rational(6, 1) - gamma * 2);
    Ok(num / (int(s - k) * 2))
}

/// Exponent of the number of branches on a part of normalized weight `w`.
pub fn branch_cap_d(w: &Rational, cfg: &ScheduleConfig) -> Rational {
    let g = cfg.gamma;
    if *w <= rational(3, 1) - g {
        Rational::one()
    } else if *w <= rational(4, 1) - g {
        rational(11, 4)
    } else if *w <= rational(14, 3) - g {
        rational(15, 4)
    } else {
        *w
    }
}

/// Normalized thresholds for `ℓ = 2, 3, 4`.
fn fixed_beta(ell: usize, cfg: &ScheduleConfig) -> Option<Rational> {
    let g = cfg.gamma;
    match ell {
        2 => Some(rational(3, 1) - g),
        3 => Some(rational(4, 1) - g),
        4 => Some(rational(14, 3) - g),
        _ => None,
    }
}

/// Potential `Φ(k, s)`: the integral over `t ∈ [0, z(k, s)]` of
/// `min(1/9, c·4t / (6.5t + 4.875·k0))` with `c = 1 − slack`, or 1 when
/// the budget is negative.
///
/// With `u = z/k0` the integral below the crossover `u* = 4.875/(36c − 6.5)`
/// is `(c/1.625)(u − 0.75·ln(4u/3 + 1))·k0`; above it the integrand is 1/9.
pub fn potential_phi(k: usize, s: usize, k0: usize, cfg: &ScheduleConfig) -> f64 {
    let z = to_f64(&budget_z(k, s, cfg));
    if z < 0.0 {
        return 1.0;
    }
    let k0 = k0 as f64;
    let c = 1.0 - to_f64(&cfg.budget_slack());
    let below = |u: f64| c / 1.625 * (u - 0.75 * (4.0 * u / 3.0).ln_1p()) * k0;
    let u = z / k0;
    let denom = 36.0 * c - 6.5;
    if denom <= 0.0 {
        return below(u);
    }
    let u_star = 4.875 / denom;
    if u <= u_star {
        below(u)
    } else {
        below(u_star) + (u - u_star) * k0 / 9.0
    }
}

/// Budget-gain ratio `(ℓ − d(w)) / (ℓ − (1.75 + slack))`.
pub fn gain_ratio(w: &Rational, ell: usize, cfg: &ScheduleConfig) -> Result<Rational> {
    let denom = int(ell) - rational(7, 4) - cfg.budget_slack();
    if denom.is_zero() {
        return Err(KcutError::InvalidArgument(format!("ℓ={ell} makes the budget change zero")));
    }
    Ok((int(ell) - branch_cap_d(w, cfg)) / denom)
}

/// `min(1/9, (1 − slack)·4z / (6.5z + 4.875·k0))` at `z = z(k, s) ≥ 0`.
pub fn gain_bound(k: usize, s: usize, k0: usize, cfg: &ScheduleConfig) -> Result<Rational> {
    let z = budget_z(k, s, cfg);
    if z < Rational::zero() {
        return Err(KcutError::InvalidArgument(format!("negative budget at k={k}, s={s}")));
    }
    let smooth = (Rational::one() - cfg.budget_slack()) * z * 4 / (z * rational(13, 2) + int(k0) * rational(39, 8));
    Ok(smooth.min(rational(1, 9)))
}

/// `⌈cap_const · 2^k · n^e⌉`, saturating.
fn family_cap(cfg: &ScheduleConfig, k: usize, n: usize, exponent: f64) -> usize {
    let v = cfg.cap_const as f64 * 2f64.powi(k as i32) * (n as f64).powf(exponent);
    if v >= usize::MAX as f64 {
        usize::MAX
    } else {
        v.ceil() as usize
    }
}

/// The `cap` lightest sides `A` with `w̄(A) ≤ beta` (all of them when `cap`
/// is `None`), sorted by weight and then canonical set order.
pub fn enum_cuts(
    g: &WeightedGraph,
    norm: &NormContext,
    beta: &Rational,
    cap: Option<usize>,
    cfg: &ScheduleConfig,
    seed: u64,
) -> Result<Vec<CutRecord>> {
    let n = g.vertex_count();
    if n < 2 || *beta.numer() < 0 {
        return Ok(Vec::new());
    }
    let alpha = to_f64(beta) / 2.0;
    let mut cuts = candidate_cuts(g, norm.k.min(n), alpha, cfg, seed, |w| norm.within(w, beta))?;
    cuts.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| a.set.cmp(&b.set)));
    if let Some(cap) = cap {
        cuts.truncate(cap);
    }
    Ok(cuts)
}

fn check_budget(f: &Forest, s: usize, k: usize) -> Result<()> {
    let components = f.component_count();
    if s > f.edges().len() || s + components < k {
        return Err(KcutError::InvalidBudget {
            s,
            k,
            forest_edges: f.edges().len(),
            components,
        });
    }
    Ok(())
}

/// Calls `visit(pieces, labels)` for every way to delete `s` forest edges
/// and group the resulting pieces into exactly `k` parts.
fn for_each_forest_grouping(f: &Forest, s: usize, k: usize, mut visit: impl FnMut(&[VertexSet], &[usize])) {
    for_each_combination(f.edges().len(), s, |deleted| {
        let pieces = f.components_without(deleted);
        for_each_grouping(pieces.len(), k, |labels| visit(&pieces, labels));
    });
}

fn assemble(pieces: &[VertexSet], labels: &[usize], k: usize, prefix: &[VertexSet]) -> Partition {
    let universe = pieces[0].universe();
    let mut parts = prefix.to_vec();
    parts.extend(std::iter::repeat_with(|| VertexSet::empty(universe)).take(k));
    let base = prefix.len();
    for (piece, &l) in pieces.iter().zip(labels) {
        parts[base + l].union_with(piece);
    }
    Partition::new(parts).expect("pieces are disjoint")
}

/// Every `(F, s, k)`-valid partition, each once, in canonical order.
pub fn valid_partitions(f: &Forest, s: usize, k: usize) -> Result<Vec<Partition>> {
    check_budget(f, s, k)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut out = BTreeSet::new();
    for_each_forest_grouping(f, s, k, |pieces, labels| {
        out.insert(assemble(pieces, labels, k, &[]));
    });
    Ok(out.into_iter().collect())
}

/// Counters collected during one search.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Telemetry {
    /// Calls that passed the budget checks, per recursion depth.
    pub calls_by_depth: Vec<u64>,
    /// Parts branched on, per recursion depth.
    pub branches_by_depth: Vec<u64>,
    /// Largest `Φ(k, s)` seen at a branching call, per depth.
    pub potential_by_depth: Vec<f64>,
    /// Candidate sides generated, indexed by forest crossings `ℓ`.
    pub family_sizes: Vec<u64>,
    pub base_case_calls: u64,
    pub brute_force_calls: u64,
    pub brute_force_partitions: u64,
}

impl Telemetry {
    fn bump(v: &mut Vec<u64>, i: usize, by: u64) {
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] += by;
    }

    pub fn merge(&mut self, other: &Telemetry) {
        for (i, &x) in other.calls_by_depth.iter().enumerate() {
            Self::bump(&mut self.calls_by_depth, i, x);
        }
        for (i, &x) in other.branches_by_depth.iter().enumerate() {
            Self::bump(&mut self.branches_by_depth, i, x);
        }
        for (i, &x) in other.family_sizes.iter().enumerate() {
            Self::bump(&mut self.family_sizes, i, x);
        }
        for (i, &x) in other.potential_by_depth.iter().enumerate() {
            if self.potential_by_depth.len() <= i {
                self.potential_by_depth.resize(i + 1, f64::NEG_INFINITY);
            }
            self.potential_by_depth[i] = self.potential_by_depth[i].max(x);
        }
        self.base_case_calls += other.base_case_calls;
        self.brute_force_calls += other.brute_force_calls;
        self.brute_force_partitions += other.brute_force_partitions;
    }
}

/// Input of one recursive call.
#[derive(Clone, Debug)]
pub struct BranchState {
    pub g: WeightedGraph,
    pub k: usize,
    pub forest: Forest,
    pub s: usize,
    pub norm: NormContext,
    /// Part count of the top-level problem.
    pub k0: usize,
}

impl BranchState {
    pub fn new(g: WeightedGraph, k: usize, forest: Forest, s: usize, norm: NormContext) -> Result<Self> {
        if forest.vertices() != g.vertices() {
            return Err(KcutError::InvalidArgument("forest and graph have different vertex sets".into()));
        }
        if g.edge_count() > 0 {
            for &(a, b) in forest.edges() {
                if g.edges().binary_search_by(|e| (e.u, e.v).cmp(&(a, b))).is_err() {
                    return Err(KcutError::InvalidArgument(format!("forest edge ({a}, {b}) is not a graph edge")));
                }
            }
        }
        check_budget(&forest, s, k)?;
        Ok(BranchState {
            g,
            k,
            forest,
            s,
            norm,
            k0: k,
        })
    }
}

/// Lightest partitions found by a search, with their weight.
#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub weight: Option<Weight>,
    pub partitions: Vec<Partition>,
    pub telemetry: Telemetry,
}

struct Candidate {
    set: VertexSet,
    weight: Weight,
    crossings: usize,
}

struct Search<'a> {
    cfg: &'a ScheduleConfig,
    k0: usize,
    seed: u64,
    calls: u64,
    upper: Weight,
    found: BTreeSet<Partition>,
    telemetry: Telemetry,
}

impl Search<'_> {
    fn next_seed(&mut self) -> u64 {
        self.calls += 1;
        mix_seed(self.seed, self.calls)
    }

    fn record(&mut self, total: Weight, p: Partition) {
        if total < self.upper {
            self.upper = total;
            self.found.clear();
        }
        if total == self.upper {
            self.found.insert(p);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn solve(
        &mut self,
        g: &WeightedGraph,
        f: &Forest,
        k: usize,
        s: usize,
        prefix: &mut Vec<VertexSet>,
        fixed: Weight,
        depth: usize,
    ) -> Result<()> {
        if fixed > self.upper || s > f.edges().len() {
            return Ok(());
        }
        if k == 1 {
            let mut parts = prefix.clone();
            parts.push(g.vertices().clone());
            self.record(fixed, Partition::new(parts).expect("disjoint parts"));
            return Ok(());
        }
        let kappa = f.component_count();
        if g.vertex_count() < k || s + kappa < k {
            return Ok(());
        }
        Telemetry::bump(&mut self.telemetry.calls_by_depth, depth, 1);
        if k < self.cfg.base_k {
            self.telemetry.base_case_calls += 1;
            let seed = self.next_seed();
            let (w, parts) = karger_stein_min_kcut(g, k, self.cfg, seed)?;
            if fixed + w <= self.upper {
                for p in parts {
                    let mut all = prefix.clone();
                    all.extend(p.parts().iter().cloned());
                    self.record(fixed + w, Partition::new(all).expect("disjoint parts"));
                }
            }
            return Ok(());
        }
        if budget_z(k, s, self.cfg) < Rational::zero() {
            self.telemetry.brute_force_calls += 1;
            self.brute_force(g, f, k, s, prefix, fixed);
            return Ok(());
        }

        let phi = potential_phi(k, s, self.k0, self.cfg);
        let slot = &mut self.telemetry.potential_by_depth;
        if slot.len() <= depth {
            slot.resize(depth + 1, f64::NEG_INFINITY);
        }
        slot[depth] = slot[depth].max(phi);

        let candidates = self.candidates(g, f, k, s, fixed)?;
        for c in candidates {
            if fixed + c.weight > self.upper {
                continue;
            }
            let g2 = g.delete_vertices(&c.set)?;
            let f2 = f.restrict(&c.set)?;
            debug_assert!(s - c.crossings + f2.component_count() < s + kappa);
            Telemetry::bump(&mut self.telemetry.branches_by_depth, depth, 1);
            prefix.push(c.set);
            self.solve(&g2, &f2, k - 1, s - c.crossings, prefix, fixed + c.weight, depth + 1)?;
            prefix.pop();
        }
        Ok(())
    }

    fn brute_force(&mut self, g: &WeightedGraph, f: &Forest, k: usize, s: usize, prefix: &[VertexSet], fixed: Weight) {
        let mut hits: Vec<(Weight, Partition)> = Vec::new();
        let mut piece_of = vec![usize::MAX; g.universe()];
        let budget = self.upper - fixed;
        let mut enumerated = 0u64;
        for_each_combination(f.edges().len(), s, |deleted| {
            let pieces = f.components_without(deleted);
            let p = pieces.len();
            for (i, piece) in pieces.iter().enumerate() {
                for v in piece.iter() {
                    piece_of[v] = i;
                }
            }
            let mut between = vec![0 as Weight; p * p];
            for e in g.edges() {
                let (a, b) = (piece_of[e.u], piece_of[e.v]);
                if a != b {
                    between[a * p + b] += e.weight;
                    between[b * p + a] += e.weight;
                }
            }
            for_each_grouping(p, k, |labels| {
                enumerated += 1;
                let mut w: Weight = 0;
                for a in 0..p {
                    for b in a + 1..p {
                        if labels[a] != labels[b] {
                            w += between[a * p + b];
                        }
                    }
                }
                if w <= budget {
                    hits.push((w, assemble(&pieces, labels, k, prefix)));
                }
            });
        });
        self.telemetry.brute_force_partitions += enumerated;
        hits.sort_by_key(|h| h.0);
        for (w, p) in hits {
            self.record(fixed + w, p);
        }
    }

    fn candidates(&mut self, g: &WeightedGraph, f: &Forest, k: usize, s: usize, fixed: Weight) -> Result<Vec<Candidate>> {
        let comps = f.components();
        let kappa = comps.len();
        if kappa > MAX_FOREST_COMPONENTS {
            return Err(KcutError::TooLarge(format!("{kappa} forest components")));
        }
        let universe = g.universe();
        let union_of = |mask: u64, skip: usize| {
            let mut a = VertexSet::empty(universe);
            let mut bit = 0;
            for (i, c) in comps.iter().enumerate() {
                if i == skip {
                    continue;
                }
                if mask >> bit & 1 == 1 {
                    a.union_with(c);
                }
                bit += 1;
            }
            a
        };
        let mut out = Vec::new();
        let push = |set: VertexSet, crossings: usize, out: &mut Vec<Candidate>| {
            let weight = g.boundary_weight(&set);
            out.push(Candidate { set, weight, crossings });
        };

        // unions of whole forest components
        for mask in 1u64..(1u64 << kappa) - 1 {
            push(union_of(mask, usize::MAX), 0, &mut out);
        }
        // one side of one forest edge, plus whole other components
        if s >= 1 {
            for (ei, &(a, _)) in f.edges().iter().enumerate() {
                let home = comps.iter().position(|c| c.contains(a)).expect("edge inside a component");
                let split = f.components_without(&[ei]);
                let sides: Vec<&VertexSet> = split.iter().filter(|p| p.is_subset(&comps[home])).collect();
                for side in sides {
                    for mask in 0u64..(1u64 << (kappa - 1)) {
                        let mut set = union_of(mask, home);
                        set.union_with(side);
                        push(set, 1, &mut out);
                    }
                }
            }
        }
        let zero_one = out.len();

        if s >= 2 {
            let mut betas: Vec<(usize, Rational)> = Vec::new();
            for ell in 2..=s {
                let beta = match fixed_beta(ell, self.cfg) {
                    Some(b) => b,
                    None => beta_ell(k, s, self.cfg, ell)?,
                };
                betas.push((ell, beta));
            }
            let beta_max = betas.iter().map(|b| b.1).max().expect("s ≥ 2");
            let norm = NormContext::new(self.upper - fixed, k)?;
            let seed = self.next_seed();
            let pool = enum_cuts(g, &norm, &beta_max, None, self.cfg, seed)?;
            let crossings: Vec<usize> = pool.iter().map(|c| f.crossing(&c.set)).collect();
            let n = g.vertex_count();
            for (ell, beta) in betas {
                let cap = match ell {
                    2 => Some(family_cap(self.cfg, k, n, 1.0)),
                    3 => Some(family_cap(self.cfg, k, n, 2.75)),
                    4 => Some(family_cap(self.cfg, k, n, 3.75)),
                    _ => None,
                };
                let eligible = pool.iter().zip(&crossings).filter(|(c, _)| norm.within(c.weight, &beta));
                let chosen: Vec<&CutRecord> = match cap {
                    // truncate to the lightest, then keep those crossing ℓ times
                    Some(cap) => eligible.take(cap).filter(|(_, &x)| x == ell).map(|(c, _)| c).collect(),
                    None => eligible.filter(|(_, &x)| x == ell).map(|(c, _)| c).collect(),
                };
                Telemetry::bump(&mut self.telemetry.family_sizes, ell, chosen.len() as u64);
                for c in chosen {
                    out.push(Candidate {
                        set: c.set.clone(),
                        weight: c.weight,
                        crossings: ell,
                    });
                }
            }
        }
        let ones = out[..zero_one].iter().filter(|c| c.crossings == 1).count() as u64;
        Telemetry::bump(&mut self.telemetry.family_sizes, 0, (zero_one as u64) - ones);
        Telemetry::bump(&mut self.telemetry.family_sizes, 1, ones);
        Ok(out)
    }
}

/// Lightest `(F, s, k)`-valid partitions reachable from `state`, keeping
/// only those no heavier than `state.norm.opt_upper`.
///
/// Every minimum k-cut that cuts exactly `s` forest edges is included
/// (w.h.p. on the sampling paths); other partitions may appear as long as
/// they tie the lightest weight found.
pub fn min_kcut(state: &BranchState, cfg: &ScheduleConfig, seed: u64) -> Result<SearchOutcome> {
    let mut search = Search {
        cfg,
        k0: state.k0,
        seed,
        calls: 0,
        upper: state.norm.opt_upper,
        found: BTreeSet::new(),
        telemetry: Telemetry::default(),
    };
    search.solve(&state.g, &state.forest, state.k, state.s, &mut Vec::new(), 0, 0)?;
    let weight = (!search.found.is_empty()).then_some(search.upper);
    Ok(SearchOutcome {
        weight,
        partitions: search.found.into_iter().collect(),
        telemetry: search.telemetry,
    })
}

/// All minimum k-cuts of `g` with their weight.
#[derive(Clone, Debug, Serialize)]
pub struct KcutReport {
    pub k: usize,
    pub weight: Weight,
    #[serde(serialize_with = "serialize_partitions")]
    pub partitions: Vec<Partition>,
    /// Distinct packed trees (forests, if `g` is disconnected) searched.
    pub trees: usize,
    /// Upper bound used to seed the search.
    pub initial_bound: Weight,
    pub telemetry: Telemetry,
}

fn serialize_partitions<S: serde::Serializer>(parts: &[Partition], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(parts.len()))?;
    for p in parts {
        seq.serialize_element(&p.to_lists())?;
    }
    seq.end()
}

/// Every minimum k-cut of `g`.
///
/// Packs `c_pack·k³·m` spanning trees (or `cfg.trees`), and for each distinct tree and each
/// budget `s ∈ [k − κ(G), 2k − 2]` runs the recursive search. The search is
/// seeded with the value of one contraction run and tightens it as lighter
/// cuts turn up; only global minimizers survive.
pub fn enumerate_min_kcuts(g: &WeightedGraph, k: usize, cfg: &ScheduleConfig, seed: u64) -> Result<KcutReport> {
    cfg.validate()?;
    let n = g.vertex_count();
    if k == 0 {
        return Err(KcutError::InvalidArgument("k must be positive".into()));
    }
    if k > n {
        return Err(KcutError::TooFewVertices { needed: k, available: n });
    }
    let trivial = |weight: Weight, partitions: Vec<Partition>| KcutReport {
        k,
        weight,
        partitions,
        trees: 0,
        initial_bound: weight,
        telemetry: Telemetry::default(),
    };
    if k == 1 {
        return Ok(trivial(0, vec![Partition::new(vec![g.vertices().clone()])?]));
    }
    let components = g.components();
    if components.len() >= k {
        let mut parts = groupings(&components, k);
        parts.sort();
        return Ok(trivial(0, parts));
    }
    if k == n {
        let singles = g.vertices().iter().map(|v| VertexSet::singleton(g.universe(), v)).collect();
        return Ok(trivial(g.total_weight(), vec![Partition::new(singles)?]));
    }

    let (bound, _) = karger_stein_min_kcut(g, k, cfg, mix_seed(seed, 0))?;
    let trees = dedup_trees(greedy_forest_pack(g, cfg.trees.unwrap_or_else(|| pack_size_for(k, g.edge_count(), cfg.c_pack))));
    let mut search = Search {
        cfg,
        k0: k,
        seed: mix_seed(seed, 1),
        calls: 0,
        upper: bound,
        found: BTreeSet::new(),
        telemetry: Telemetry::default(),
    };
    let kappa = components.len();
    for tree in &trees {
        let top = (2 * k - 2).min(tree.edges().len());
        for s in k.saturating_sub(kappa)..=top {
            search.solve(g, tree, k, s, &mut Vec::new(), 0, 0)?;
        }
    }
    Ok(KcutReport {
        k,
        weight: search.upper,
        partitions: search.found.into_iter().collect(),
        trees: trees.len(),
        initial_bound: bound,
        telemetry: search.telemetry,
    })
}
