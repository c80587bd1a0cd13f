//! Diagnostics on cheap cuts: normalized small-cut censuses and the greedy
//! assembly of a cheap k-cut out of many cheap 2-cuts.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::config::{mix_seed, rational, Rational, ScheduleConfig};
use crate::contraction::{CutRecord, NormContext};
use crate::error::Result;
use crate::graph::{Partition, Weight, WeightedGraph};
use crate::minkcut::enum_cuts;
use crate::set_system::{find_crossing_pair, find_triple, RangeSpace};
use crate::vertex_set::VertexSet;

/// Sides with normalized weight at most `beta`.
#[derive(Clone, Debug)]
pub struct CensusRow {
    pub beta: Rational,
    pub count: usize,
    pub cuts: Vec<CutRecord>,
    /// Reference count for this threshold (report only, never enforced).
    pub cap: f64,
}

/// `2^k·n^e` for `e = 1, 2, 2.75, 3.75`, matched to the thresholds
/// `3 − γ, 10/3 − γ, 4 − γ, 14/3 − γ`.
pub fn census_caps(k: usize, n: usize) -> [f64; 4] {
    let base = 2f64.powi(k as i32);
    let n = n as f64;
    [base * n, base * n * n, base * n.powf(2.75), base * n.powf(3.75)]
}

/// Reference cap for a threshold: the first of the four graded caps whose
/// threshold is at least `beta`, else the contraction bound `2^k·n^β`.
pub fn cap_for(beta: &Rational, gamma: &Rational, k: usize, n: usize) -> f64 {
    let caps = census_caps(k, n);
    let limits = [rational(3, 1), rational(10, 3), rational(4, 1), rational(14, 3)];
    for (limit, cap) in limits.iter().zip(caps) {
        if *beta <= limit - gamma {
            return cap;
        }
    }
    2f64.powi(k as i32) * (n as f64).powf(crate::config::to_f64(beta))
}

pub fn small_cut_census(
    g: &WeightedGraph,
    norm: &NormContext,
    thresholds: &[Rational],
    cfg: &ScheduleConfig,
    seed: u64,
) -> Result<Vec<CensusRow>> {
    let n = g.vertex_count();
    thresholds
        .par_iter()
        .enumerate()
        .map(|(i, beta)| {
            let cuts = enum_cuts(g, norm, beta, None, cfg, mix_seed(seed, i as u64))?;
            Ok(CensusRow {
                beta: *beta,
                count: cuts.len(),
                cap: cap_for(beta, &cfg.gamma, norm.k, n),
                cuts,
            })
        })
        .collect()
}

/// CSV with header `n,k,beta,count,cap`.
pub fn census_csv(n: usize, k: usize, rows: &[CensusRow]) -> String {
    let mut out = String::from("n,k,beta,count,cap\n");
    for r in rows {
        out.push_str(&format!("{n},{k},{},{},{:.0}\n", r.beta, r.count, r.cap));
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct AssemblyOptions {
    /// When no crossing pair is left, also look for three sides cutting one
    /// part into at least this many cells.
    pub triple_min_cells: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct AssemblyReport {
    pub partition: Partition,
    pub weight: Weight,
    /// `2k·weight / opt_upper`, absent when the bound is zero.
    pub normalized: Option<Rational>,
    /// Every input side had `w̄ < 3 − γ`.
    pub precondition_met: bool,
    /// Part counts after each first-stage step.
    pub stage_one: Vec<usize>,
}

fn refine(parts: &mut Vec<VertexSet>, a: &VertexSet) {
    let mut next = Vec::with_capacity(parts.len() + 1);
    for p in parts.drain(..) {
        let inside = p.intersection(a);
        let outside = p.difference(a);
        for q in [inside, outside] {
            if !q.is_empty() {
                next.push(q);
            }
        }
    }
    *parts = next;
}

fn parts_cut(parts: &[VertexSet], a: &VertexSet) -> Vec<usize> {
    parts
        .iter()
        .enumerate()
        .filter(|(_, p)| p.intersects(a) && !p.is_subset(a))
        .map(|(i, _)| i)
        .collect()
}

/// For one part, the distinct traces `A ∩ S` of sides cutting only that
/// part, each with a representative side.
fn traces(parts: &[VertexSet], cuts: &[CutRecord], part: usize) -> Vec<(VertexSet, usize)> {
    let mut by_trace: BTreeMap<VertexSet, usize> = BTreeMap::new();
    for (i, c) in cuts.iter().enumerate() {
        if parts_cut(parts, &c.set) == [part] {
            by_trace.entry(c.set.intersection(&parts[part])).or_insert(i);
        }
    }
    by_trace.into_iter().collect()
}

fn local_space(part: &VertexSet, traces: &[(VertexSet, usize)]) -> RangeSpace {
    let members = part.to_vec();
    let ranges = traces
        .iter()
        .map(|(t, _)| VertexSet::from_vertices(members.len(), (0..members.len()).filter(|&i| t.contains(members[i]))))
        .collect();
    RangeSpace::new(members.len(), ranges).expect("distinct traces")
}

/// Builds a k-cut by repeatedly refining `{V}` with the given sides.
///
/// First stage: while fewer than `k − 2` parts exist, refine with a side
/// cutting two or more parts; otherwise group sides that cut a single part
/// by their trace on it and refine with two whose traces cross (three new
/// parts at once). Second stage: refine with any side that cuts a part until
/// `k` parts exist. Overshooting parts are merged back along the heaviest
/// inter-part weight. Returns `None` when the sides run out first.
pub fn assemble_cheap_kcut(
    g: &WeightedGraph,
    cuts: &[CutRecord],
    k: usize,
    norm: &NormContext,
    cfg: &ScheduleConfig,
    options: &AssemblyOptions,
) -> Result<Option<AssemblyReport>> {
    if k == 0 || k > g.vertex_count() {
        return Ok(None);
    }
    let limit = rational(3, 1) - cfg.gamma;
    let precondition_met = cuts.iter().all(|c| {
        let lhs = 2 * norm.k as i128 * c.weight as i128 * limit.denom();
        lhs < limit.numer() * norm.opt_upper as i128
    });
    let mut parts = vec![g.vertices().clone()];
    let mut stage_one = Vec::new();

    'stage_one: while parts.len() + 2 < k {
        if let Some(c) = cuts.iter().find(|c| parts_cut(&parts, &c.set).len() >= 2) {
            refine(&mut parts, &c.set);
            stage_one.push(parts.len());
            continue;
        }
        for pi in 0..parts.len() {
            let tr = traces(&parts, cuts, pi);
            if tr.len() < 2 {
                continue;
            }
            let space = local_space(&parts[pi], &tr);
            if let Some((a, b)) = find_crossing_pair(&space) {
                let (sa, sb) = (cuts[tr[a].1].set.clone(), cuts[tr[b].1].set.clone());
                refine(&mut parts, &sa);
                refine(&mut parts, &sb);
                stage_one.push(parts.len());
                continue 'stage_one;
            }
            if let Some(m) = options.triple_min_cells {
                if let Some(t) = find_triple(&space, m, 0)? {
                    for idx in t {
                        let s = cuts[tr[idx].1].set.clone();
                        refine(&mut parts, &s);
                    }
                    stage_one.push(parts.len());
                    continue 'stage_one;
                }
            }
        }
        break;
    }

    while parts.len() < k {
        match cuts.iter().find(|c| !parts_cut(&parts, &c.set).is_empty()) {
            Some(c) => refine(&mut parts, &c.set),
            None => return Ok(None),
        }
    }
    merge_down(g, &mut parts, k);

    let partition = Partition::new(parts)?;
    let weight = g.partition_weight(&partition)?;
    Ok(Some(AssemblyReport {
        normalized: NormContext::new(norm.opt_upper, k)?.normalized(weight),
        partition,
        weight,
        precondition_met,
        stage_one,
    }))
}

/// Merges the pair of parts joined by the most weight until `k` remain.
fn merge_down(g: &WeightedGraph, parts: &mut Vec<VertexSet>, k: usize) {
    while parts.len() > k {
        let mut label = vec![usize::MAX; g.universe()];
        for (i, p) in parts.iter().enumerate() {
            for v in p.iter() {
                label[v] = i;
            }
        }
        let r = parts.len();
        let mut between = vec![0 as Weight; r * r];
        for e in g.edges() {
            let (a, b) = (label[e.u].min(label[e.v]), label[e.u].max(label[e.v]));
            if a != b {
                between[a * r + b] += e.weight;
            }
        }
        let mut best = (0, 1);
        for a in 0..r {
            for b in a + 1..r {
                if between[a * r + b] > between[best.0 * r + best.1] {
                    best = (a, b);
                }
            }
        }
        let gone = parts.remove(best.1);
        parts[best.0].union_with(&gone);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cycle;
    use crate::oracle::{brute_cut_census, brute_min_kcuts};

    fn record(g: &WeightedGraph, vertices: &[usize]) -> CutRecord {
        let set = VertexSet::from_vertices(g.universe(), vertices.iter().copied());
        let w = g.boundary_weight(&set);
        CutRecord::new(set, w)
    }

    #[test]
    fn census_on_c6() {
        let g = cycle(6);
        let norm = NormContext::new(3, 3).unwrap();
        let cfg = ScheduleConfig::default();
        let betas = [rational(3, 1) - cfg.gamma, rational(4, 1), Rational::from_integer(0)];
        let rows = small_cut_census(&g, &norm, &betas, &cfg, 5).unwrap();
        assert_eq!(rows[0].count, 0);
        assert_eq!(rows[1].count, 30);
        assert_eq!(rows[2].count, 0);
        let oracle = brute_cut_census(&g, |w| w <= 2).unwrap();
        let mut got: Vec<VertexSet> = rows[1].cuts.iter().map(|c| c.set.clone()).collect();
        got.sort();
        assert_eq!(got, oracle);
        let csv = census_csv(6, 3, &rows);
        assert!(csv.starts_with("n,k,beta,count,cap\n6,3,59/20,0,"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn caps_follow_thresholds() {
        let gamma = rational(1, 20);
        let caps = census_caps(3, 10);
        assert_eq!(cap_for(&rational(2, 1), &gamma, 3, 10), caps[0]);
        assert_eq!(cap_for(&rational(3, 1), &gamma, 3, 10), caps[1]);
        assert_eq!(cap_for(&rational(7, 2), &gamma, 3, 10), caps[2]);
        assert_eq!(cap_for(&rational(9, 2), &gamma, 3, 10), caps[3]);
        assert_eq!(cap_for(&rational(5, 1), &gamma, 3, 10), 8.0 * 1e5);
    }

    #[test]
    fn no_cuts_no_partition() {
        let g = cycle(5);
        let norm = NormContext::new(2, 2).unwrap();
        let cfg = ScheduleConfig::default();
        assert!(assemble_cheap_kcut(&g, &[], 2, &norm, &cfg, &AssemblyOptions::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn single_side_gives_that_two_cut() {
        let g = cycle(5);
        let norm = NormContext::new(2, 2).unwrap();
        let cfg = ScheduleConfig::default();
        let side = record(&g, &[0, 1]);
        let r = assemble_cheap_kcut(&g, &[side], 2, &norm, &cfg, &AssemblyOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(r.partition.to_lists(), vec![vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(r.weight, 2);
        assert_eq!(r.normalized, Some(rational(4, 1)));
        assert!(r.stage_one.is_empty());
    }

    /// `clusters` triangles with inner weight 5, joined in a ring by unit edges.
    fn cluster_ring(clusters: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for c in 0..clusters {
            let b = 3 * c;
            edges.extend([(b, b + 1, 5), (b + 1, b + 2, 5), (b, b + 2, 5)]);
            edges.push((b + 2, (b + 3) % (3 * clusters), 1));
        }
        WeightedGraph::new(3 * clusters, edges).unwrap()
    }

    #[test]
    fn cluster_ring_assembly() {
        let k = 4;
        let g = cluster_ring(2 * k);
        let cuts: Vec<CutRecord> = (0..2 * k).map(|c| record(&g, &[3 * c, 3 * c + 1, 3 * c + 2])).collect();
        let (small_opt, _) = brute_min_kcuts(&cluster_ring(k), k).unwrap();
        assert_eq!(small_opt, k as Weight);
        // k ring arcs cost k unit edges; nothing cheaper separates k parts
        let opt = k as Weight;
        let norm = NormContext::new(opt, k).unwrap();
        let cfg = ScheduleConfig::default();
        let r = assemble_cheap_kcut(&g, &cuts, k, &norm, &cfg, &AssemblyOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(r.partition.len(), k);
        assert_eq!(r.weight, g.partition_weight(&r.partition).unwrap());
        assert_eq!(r.normalized, Some(rational(2 * k as i128 * r.weight as i128, opt as i128)));
        // single clusters have w̄ = 2k·2/k = 4, above the first threshold
        assert!(!r.precondition_met);
        assert!(r.normalized.unwrap() >= rational(2 * k as i128, 1));
        for w in r.stage_one.windows(2) {
            assert!(w[1] >= w[0] + 2);
        }
    }

    #[test]
    fn crossing_traces_add_three_parts() {
        // on a 4-cycle of heavy blocks, the two diagonal halves cross
        let g = cycle(8);
        let cuts = vec![record(&g, &[0, 1, 2, 3]), record(&g, &[2, 3, 4, 5])];
        let norm = NormContext::new(5, 5).unwrap();
        let cfg = ScheduleConfig::default();
        let r = assemble_cheap_kcut(&g, &cuts, 5, &norm, &cfg, &AssemblyOptions::default())
            .unwrap();
        // only four cells exist, so five parts are out of reach
        assert!(r.is_none());
        let r = assemble_cheap_kcut(&g, &cuts, 4, &norm, &cfg, &AssemblyOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(r.partition.len(), 4);
        assert_eq!(r.weight, 4);
    }

    #[test]
    fn triple_hook_applies_three_sides() {
        let g = cycle(8);
        let cuts = vec![
            record(&g, &[1, 3, 5, 7]),
            record(&g, &[2, 3, 6, 7]),
            record(&g, &[4, 5, 6, 7]),
        ];
        let norm = NormContext::new(8, 8).unwrap();
        let cfg = ScheduleConfig::default();
        let opts = AssemblyOptions {
            triple_min_cells: Some(8),
        };
        let r = assemble_cheap_kcut(&g, &cuts, 8, &norm, &cfg, &opts).unwrap().unwrap();
        assert_eq!(r.partition.len(), 8);
    }

    #[test]
    fn merge_keeps_light_boundaries() {
        let g = WeightedGraph::new(4, [(0, 1, 9), (1, 2, 1), (2, 3, 9)]).unwrap();
        let mut parts: Vec<VertexSet> = (0..4).map(|v| VertexSet::singleton(4, v)).collect();
        merge_down(&g, &mut parts, 2);
        let p = Partition::new(parts).unwrap();
        assert_eq!(p.to_lists(), vec![vec![0, 1], vec![2, 3]]);
    }
}
