//! Small graph families used by tests, `kcut verify` and `kcut bench`.

use rand::Rng;

use crate::graph::{Weight, WeightedGraph};

pub fn cycle(n: usize) -> WeightedGraph {
    WeightedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1))).expect("valid cycle")
}

pub fn path(n: usize) -> WeightedGraph {
    WeightedGraph::new(n, (1..n).map(|i| (i - 1, i, 1))).expect("valid path")
}

pub fn complete(n: usize) -> WeightedGraph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1)));
    WeightedGraph::new(n, edges).expect("valid clique")
}

/// Two unit triangles `{0,1,2}` and `{3,4,5}` joined by the bridge `2–3`.
pub fn two_triangles_bridge() -> WeightedGraph {
    WeightedGraph::new(
        6,
        [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)],
    )
    .expect("valid graph")
}

/// Connected graph: a random spanning tree plus each remaining pair with
/// probability `density`; weights uniform in `1..=max_weight`.
pub fn random_connected<R: Rng>(n: usize, density: f64, max_weight: Weight, rng: &mut R) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut present = std::collections::HashSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let (u, v) = (order[i], parent);
        present.insert((u.min(v), u.max(v)));
        edges.push((u, v, rng.gen_range(1..=max_weight)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
        }
    }
    WeightedGraph::new(n, edges).expect("valid random graph")
}

/// `k` dense clusters of roughly `n / k` vertices; consecutive clusters are
/// joined by a single unit edge in a ring, so the planted k-cut is cheap.
pub fn planted<R: Rng>(n: usize, k: usize, rng: &mut R) -> WeightedGraph {
    let k = k.clamp(1, n.max(1));
    let cluster_of = |v: usize| v * k / n;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if cluster_of(u) == cluster_of(v) {
                edges.push((u, v, rng.gen_range(3..=6)));
            }
        }
    }
    let firsts: Vec<usize> = (0..k).map(|c| (0..n).find(|&v| cluster_of(v) == c).unwrap_or(0)).collect();
    if k > 1 {
        for c in 0..k {
            let next = (c + 1) % k;
            if k == 2 && c == 1 {
                break;
            }
            edges.push((firsts[c], firsts[next], 1));
        }
    }
    WeightedGraph::new(n, edges).expect("valid planted graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_are_well_formed() {
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(path(4).edge_count(), 3);
        assert_eq!(complete(4).edge_count(), 6);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..10 {
            let g = random_connected(n, 0.3, 5, &mut rng);
            assert!(g.is_connected());
            assert_eq!(g.vertex_count(), n);
        }
        let g = planted(12, 3, &mut rng);
        assert!(g.is_connected());
    }
}
