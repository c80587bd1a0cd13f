//! Quick built-in property suite behind `kcut verify`. Each check runs on
//! small seeded instances against the brute-force oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::config::{mix_seed, rational, ScheduleConfig};
use crate::generators::{cycle, random_connected};
use crate::graph::{Partition, Weight};
use crate::minkcut::{beta_ell, budget_z, enumerate_min_kcuts, gain_bound, gain_ratio, line_g, potential_phi};
use crate::oracle::brute_min_kcuts;
use crate::set_system::{crosses, dual_vc_dimension, find_crossing_pair, find_triple, RangeSpace};
use crate::tree_packing::{best_tree_crossing, greedy_tree_pack, pack_size_for};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<String, String>) -> CheckResult {
    match run() {
        Ok(detail) => CheckResult { name, passed: true, detail },
        Err(detail) => CheckResult { name, passed: false, detail },
    }
}

fn small_config() -> ScheduleConfig {
    ScheduleConfig {
        base_k: 2,
        ..ScheduleConfig::default()
    }
}

fn oracle_equivalence(seed: u64, instances: usize) -> Result<String, String> {
    let cfg = small_config();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let n = rng.gen_range(4..=6);
        let g = random_connected(n, 0.6, 5, &mut rng);
        for k in 2..=3 {
            let got = enumerate_min_kcuts(&g, k, &cfg, mix_seed(seed, i as u64)).map_err(|e| e.to_string())?;
            let (w, parts) = brute_min_kcuts(&g, k).map_err(|e| e.to_string())?;
            if got.weight != w || got.partitions != parts {
                return Err(format!("instance {i}, k={k}: got {} cuts of weight {}, oracle {} of weight {w}", got.partitions.len(), got.weight, parts.len()));
            }
        }
    }
    Ok(format!("{instances} graphs, k in 2..=3"))
}

fn cycle_closed_form(seed: u64) -> Result<String, String> {
    let cfg = small_config();
    for n in 5..=8 {
        for k in 2..=3 {
            let r = enumerate_min_kcuts(&cycle(n), k, &cfg, seed).map_err(|e| e.to_string())?;
            if r.weight != k as Weight || r.partitions.len() as f64 != binomial(n, k) {
                return Err(format!("C{n}, k={k}: weight {}, {} cuts", r.weight, r.partitions.len()));
            }
        }
    }
    Ok("C5..C8".into())
}

fn potential_limit() -> Result<String, String> {
    let cfg = ScheduleConfig {
        gamma: rational(0, 1),
        ..ScheduleConfig::default()
    };
    let k0 = 1_000_000;
    let v = potential_phi(k0, 2 * k0 - 2, k0, &cfg) / k0 as f64;
    if (v - 0.0192055688).abs() <= 1e-6 && 2.0 - v <= 1.981 {
        Ok(format!("{v:.10}"))
    } else {
        Err(format!("{v:.10}"))
    }
}

fn schedule_grid(max_k: usize) -> Result<String, String> {
    // the default γ leaves no nonnegative budget on this grid
    let cfg = ScheduleConfig::with_gamma(rational(1, 100));
    let mut checked = 0usize;
    for k in 2..=max_k {
        for s in (7 * k).div_ceil(4)..=2 * k {
            if s <= k || budget_z(k, s, &cfg) < rational(0, 1) {
                continue;
            }
            let bound = gain_bound(k, s, k, &cfg).map_err(|e| e.to_string())?;
            for ell in 2..=s {
                let w = beta_ell(k, s, &cfg, ell).map_err(|e| e.to_string())?;
                let back = line_g(k, s, &cfg, &w).map_err(|e| e.to_string())?;
                if back != rational(ell as i128, 1) {
                    return Err(format!("line inverse fails at k={k}, s={s}, ℓ={ell}"));
                }
                let ratio = gain_ratio(&w, ell, &cfg).map_err(|e| e.to_string())?;
                if ratio < bound {
                    return Err(format!("gain ratio {ratio} < {bound} at k={k}, s={s}, ℓ={ell}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (k, s, ℓ) points"))
}

fn random_space(n: usize, size: usize, rng: &mut ChaCha8Rng) -> RangeSpace {
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < size {
        seen.insert(rng.gen_range(0u64..1 << n));
    }
    RangeSpace::new(n, seen.into_iter().map(|m| VertexSet::from_mask(n, m)).collect()).expect("distinct")
}

fn crossing_pairs(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..40 {
        let n = rng.gen_range(4..=12);
        let rs = random_space(n, 4 * n - 3, &mut rng);
        match find_crossing_pair(&rs) {
            Some((a, b)) if crosses(&rs.ranges()[a], &rs.ranges()[b]) => {}
            other => return Err(format!("trial {trial} (n={n}): {other:?}")),
        }
    }
    for n in 3..=10 {
        let mut ranges = vec![VertexSet::empty(n), VertexSet::full(n)];
        for v in 0..n {
            ranges.push(VertexSet::singleton(n, v));
            ranges.push(VertexSet::singleton(n, v).complement());
        }
        let rs = RangeSpace::new(n, ranges).map_err(|e| e.to_string())?;
        if let Some(p) = find_crossing_pair(&rs) {
            return Err(format!("co-singleton family on {n} crosses at {p:?}"));
        }
    }
    Ok("40 random systems, co-singleton families clean".into())
}

fn venn_triples() -> Result<String, String> {
    let triples = RangeSpace::all_subsets_of_size(10, 3);
    let none = find_triple(&triples, 8, 0).map_err(|e| e.to_string())?;
    let d = dual_vc_dimension(&triples);
    let power = RangeSpace::power_set(8);
    let some = find_triple(&power, 8, 0).map_err(|e| e.to_string())?;
    if none.is_none() && d == 2 && some.is_some() {
        Ok("3-subsets of [10]: dual VC 2; power set of [8]: 8-cell triple".into())
    } else {
        Err(format!("3-subsets triple {none:?}, dual VC {d}, power set triple {some:?}"))
    }
}

fn tree_packing(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..10 {
        let n = rng.gen_range(4..=8);
        let g = random_connected(n, 0.5, 5, &mut rng);
        for k in 2..=3 {
            let trees = greedy_tree_pack(&g, pack_size_for(k, g.edge_count(), 1)).map_err(|e| e.to_string())?;
            let (_, parts) = brute_min_kcuts(&g, k).map_err(|e| e.to_string())?;
            let best = parts.iter().filter_map(|p: &Partition| best_tree_crossing(&trees, p)).map(|(_, c)| c).min();
            if best.is_none_or(|c| c > 2 * k - 2) {
                return Err(format!("instance {i}, k={k}: best crossing {best:?}"));
            }
        }
    }
    Ok("10 graphs, k in 2..=3".into())
}

fn scale_invariance(seed: u64) -> Result<String, String> {
    let cfg = small_config();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..5 {
        let n = rng.gen_range(4..=6);
        let g = random_connected(n, 0.6, 5, &mut rng);
        let base = enumerate_min_kcuts(&g, 3, &cfg, seed).map_err(|e| e.to_string())?;
        for factor in [2, 7, 1000] {
            let h = g.scaled(factor).map_err(|e| e.to_string())?;
            let r = enumerate_min_kcuts(&h, 3, &cfg, seed).map_err(|e| e.to_string())?;
            if r.partitions != base.partitions || r.weight != base.weight * factor {
                return Err(format!("instance {i}, factor {factor}"));
            }
        }
    }
    Ok("5 graphs, factors 2, 7, 1000".into())
}

/// Runs every check. All randomness derives from `seed`.
pub fn run_suite(seed: u64) -> Vec<CheckResult> {
    vec![
        check("oracle-equivalence", || oracle_equivalence(mix_seed(seed, 1), 12)),
        check("cycle-closed-form", || cycle_closed_form(mix_seed(seed, 2))),
        check("potential-limit", potential_limit),
        check("schedule-grid", || schedule_grid(40)),
        check("crossing-pairs", || crossing_pairs(mix_seed(seed, 3))),
        check("venn-triples", venn_triples),
        check("tree-packing", || tree_packing(mix_seed(seed, 4))),
        check("scale-invariance", || scale_invariance(mix_seed(seed, 5))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for r in run_suite(7) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
