//! Range spaces: Venn-cell occupancy, crossing pairs, triple search and the
//! dual VC dimension.
//!
//! A Venn cell of a tuple `(R_1, …, R_k)` is a subset `S ⊆ [k]`, encoded as a
//! bitmask with bit `i` standing for `R_{i+1}`. The cell is occupied if some
//! element `x` lies in exactly the ranges named by `S`.

use std::collections::HashMap;
use std::fmt;

use crate::config::Rational;
use crate::error::{KcutError, Result};
use crate::vertex_set::VertexSet;

/// A set system over `0..n` with pairwise distinct ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeSpace {
    n: usize,
    ranges: Vec<VertexSet>,
}

impl RangeSpace {
    pub fn new(n: usize, ranges: Vec<VertexSet>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(ranges.len());
        for (i, r) in ranges.iter().enumerate() {
            if r.universe() != n {
                return Err(KcutError::InvalidArgument(format!(
                    "range {i} has universe {}, expected {n}",
                    r.universe()
                )));
            }
            if let Some(j) = seen.insert(r.clone(), i) {
                return Err(KcutError::InvalidArgument(format!("ranges {j} and {i} are equal")));
            }
        }
        Ok(RangeSpace { n, ranges })
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn ranges(&self) -> &[VertexSet] {
        &self.ranges
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    /// Every `size`-subset of `0..n`.
    pub fn all_subsets_of_size(n: usize, size: usize) -> Self {
        let mut ranges = Vec::new();
        crate::combinatorics::for_each_combination(n, size, |c| {
            ranges.push(VertexSet::from_vertices(n, c.iter().copied()));
        });
        RangeSpace { n, ranges }
    }

    /// Every nonempty subset of `0..n` (`n ≤ 20`).
    pub fn power_set(n: usize) -> Self {
        assert!(n <= 20, "power set of {n} elements is too large");
        let ranges = (1u64..1 << n).map(|m| VertexSet::from_mask(n, m)).collect();
        RangeSpace { n, ranges }
    }

    /// One bitstring per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ranges = Vec::new();
        let mut n: Option<usize> = None;
        let mut seen = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let r = VertexSet::from_bitstring(line).ok_or_else(|| KcutError::Parse {
                line: line_no,
                message: "expected a 0/1 bitstring".into(),
            })?;
            match n {
                None => n = Some(r.universe()),
                Some(len) if len != r.universe() => {
                    return Err(KcutError::Parse {
                        line: line_no,
                        message: format!("bitstring has length {}, expected {len}", r.universe()),
                    })
                }
                _ => {}
            }
            if seen.insert(r.clone(), line_no).is_some() {
                return Err(KcutError::Parse {
                    line: line_no,
                    message: "duplicate range".into(),
                });
            }
            ranges.push(r);
        }
        Ok(RangeSpace {
            n: n.unwrap_or(0),
            ranges,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.ranges {
            out.push_str(&r.to_bitstring());
            out.push('\n');
        }
        out
    }
}

/// Occupied cells of the Venn diagram of three ranges.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VennOccupancy {
    occupied: u8,
}

impl VennOccupancy {
    pub fn from_mask(occupied: u8) -> Self {
        VennOccupancy { occupied }
    }

    pub fn mask(&self) -> u8 {
        self.occupied
    }

    pub fn contains(&self, cell: u8) -> bool {
        cell < 8 && self.occupied >> cell & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.occupied.count_ones() as usize
    }

    /// Occupied cells not in `forbidden`.
    pub fn count_outside(&self, forbidden: u8) -> usize {
        (self.occupied & !forbidden).count_ones() as usize
    }

    pub fn cells(&self) -> Vec<u8> {
        (0..8).filter(|&c| self.contains(c)).collect()
    }

    /// Occupancy of the reordered triple `(R_{perm[0]}, R_{perm[1]}, R_{perm[2]})`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let mut out = 0u8;
        for cell in self.cells() {
            let mut image = 0u8;
            for (new_pos, &old) in perm.iter().enumerate() {
                if cell >> old & 1 == 1 {
                    image |= 1 << new_pos;
                }
            }
            out |= 1 << image;
        }
        VennOccupancy { occupied: out }
    }
}

impl fmt::Debug for VennOccupancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<usize>> = self
            .cells()
            .into_iter()
            .map(|c| (0..3).filter(|i| c >> i & 1 == 1).map(|i| i + 1).collect())
            .collect();
        f.debug_set().entries(cells).finish()
    }
}

/// Set of occupied cells of `ranges` over `0..n`, scanning element by element.
pub fn occupied_cells(ranges: &[&VertexSet], n: usize) -> Vec<bool> {
    assert!(ranges.len() <= 16, "at most 16 ranges per tuple");
    let mut occupied = vec![false; 1 << ranges.len()];
    for x in 0..n {
        let cell = ranges
            .iter()
            .enumerate()
            .filter(|(_, r)| r.contains(x))
            .fold(0usize, |acc, (i, _)| acc | 1 << i);
        occupied[cell] = true;
    }
    occupied
}

pub fn venn_occupancy(r1: &VertexSet, r2: &VertexSet, r3: &VertexSet, n: usize) -> VennOccupancy {
    let occ = occupied_cells(&[r1, r2, r3], n);
    let mask = occ.iter().enumerate().filter(|(_, &o)| o).fold(0u8, |m, (c, _)| m | 1 << c);
    VennOccupancy { occupied: mask }
}

/// Fraction of the cells in `family` that `ranges` occupy.
pub fn witness_fraction(ranges: &[&VertexSet], n: usize, family: &[u32]) -> Result<Rational> {
    if family.is_empty() {
        return Err(KcutError::InvalidArgument("empty cell family".into()));
    }
    let k = ranges.len();
    if let Some(&bad) = family.iter().find(|&&c| (c as u64) >> k != 0) {
        return Err(KcutError::InvalidArgument(format!("cell {bad:#b} names more than {k} ranges")));
    }
    let occ = occupied_cells(ranges, n);
    let mut cells = family.to_vec();
    cells.sort_unstable();
    cells.dedup();
    let hit = cells.iter().filter(|&&c| occ[c as usize]).count();
    Ok(Rational::new(hit as i128, cells.len() as i128))
}

/// All four cells of the two-set Venn diagram are nonempty.
pub fn crosses(a: &VertexSet, b: &VertexSet) -> bool {
    a.difference(b).count() > 0
        && b.difference(a).count() > 0
        && a.intersects(b)
        && !a.union(b).complement().is_empty()
}

/// Indices of two crossing ranges, if any.
///
/// Complementing a range permutes its Venn cells, so every range containing
/// element 0 is replaced by its complement. The resulting family avoids 0,
/// and two such sets cross exactly when they overlap without nesting, so the
/// question becomes whether the family is laminar. Sets are inserted from
/// largest to smallest while each element remembers the smallest set seen
/// so far that holds it; a new set must lie inside the remembered set of
/// each of its elements.
pub fn find_crossing_pair(rs: &RangeSpace) -> Option<(usize, usize)> {
    if rs.n < 4 {
        return None;
    }
    let mut normalized: Vec<(VertexSet, usize)> = rs
        .ranges
        .iter()
        .enumerate()
        .map(|(i, r)| (if r.contains(0) { r.complement() } else { r.clone() }, i))
        .collect();
    normalized.sort_by(|a, b| b.0.count().cmp(&a.0.count()).then_with(|| a.0.cmp(&b.0)));
    normalized.dedup_by(|a, b| a.0 == b.0);
    let mut owner: Vec<Option<usize>> = vec![None; rs.n];
    for (pos, (set, _)) in normalized.iter().enumerate() {
        let mut checked: Vec<usize> = Vec::new();
        for x in set.iter() {
            if let Some(o) = owner[x] {
                if checked.contains(&o) {
                    continue;
                }
                if !set.is_subset(&normalized[o].0) {
                    return Some((normalized[o].1, normalized[pos].1));
                }
                checked.push(o);
            }
        }
        for x in set.iter() {
            owner[x] = Some(pos);
        }
    }
    None
}

fn triple_cells(c: [&VertexSet; 3], nc: [&VertexSet; 3]) -> u8 {
    let words = c[0].words().len();
    let mut mask = 0u8;
    for cell in 0..8u8 {
        let pick = |i: usize| if cell >> i & 1 == 1 { c[i] } else { nc[i] };
        let (a, b, d) = (pick(0).words(), pick(1).words(), pick(2).words());
        if (0..words).any(|w| a[w] & b[w] & d[w] != 0) {
            mask |= 1 << cell;
        }
    }
    mask
}

fn pair_cell_count(a: &VertexSet, na: &VertexSet, b: &VertexSet, nb: &VertexSet) -> usize {
    let hit = |x: &VertexSet, y: &VertexSet| x.words().iter().zip(y.words()).any(|(p, q)| p & q != 0);
    [hit(a, b), hit(a, nb), hit(na, b), hit(na, nb)].iter().filter(|&&h| h).count()
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// First triple (lexicographic in range indices) with at least `min_cells`
/// occupied cells outside `forbidden` (a bitmask over the 8 cells).
///
/// The returned order matters when `forbidden` is not symmetric: the triple
/// is reported in the orientation that meets the bound.
pub fn find_triple(rs: &RangeSpace, min_cells: usize, forbidden: u8) -> Result<Option<[usize; 3]>> {
    if !(1..=8).contains(&min_cells) {
        return Err(KcutError::InvalidArgument(format!("min_cells must be in 1..=8, got {min_cells}")));
    }
    let r = &rs.ranges;
    let comp: Vec<VertexSet> = r.iter().map(|x| x.complement()).collect();
    let len = r.len();
    for i in 0..len {
        for j in i + 1..len {
            // each pair cell splits into at most two triple cells
            if 2 * pair_cell_count(&r[i], &comp[i], &r[j], &comp[j]) < min_cells {
                continue;
            }
            for l in j + 1..len {
                let occ = VennOccupancy::from_mask(triple_cells([&r[i], &r[j], &r[l]], [&comp[i], &comp[j], &comp[l]]));
                if occ.count() < min_cells {
                    continue;
                }
                let idx = [i, j, l];
                for perm in PERMUTATIONS {
                    if occ.permuted(perm).count_outside(forbidden) >= min_cells {
                        return Ok(Some([idx[perm[0]], idx[perm[1]], idx[perm[2]]]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Largest `d ≤ 4` such that some `d` ranges occupy all `2^d` cells.
pub fn dual_vc_dimension(rs: &RangeSpace) -> usize {
    fn extend(rs: &RangeSpace, tuple: &mut Vec<usize>, target: usize) -> bool {
        if tuple.len() == target {
            return true;
        }
        let start = tuple.last().map_or(0, |&t| t + 1);
        for next in start..rs.ranges.len() {
            tuple.push(next);
            let refs: Vec<&VertexSet> = tuple.iter().map(|&t| &rs.ranges[t]).collect();
            // any sub-tuple of a shattering tuple shatters too
            if occupied_cells(&refs, rs.n).iter().all(|&o| o) && extend(rs, tuple, target) {
                return true;
            }
            tuple.pop();
        }
        false
    }
    let mut best = 0;
    for d in 1..=4usize {
        if (1usize << d) > rs.n || !extend(rs, &mut Vec::new(), d) {
            break;
        }
        best = d;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::rational;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, v.iter().copied())
    }

    #[test]
    fn occupancy_examples() {
        let occ = venn_occupancy(&set(5, &[0, 1]), &set(5, &[1, 2]), &set(5, &[3]), 5);
        assert_eq!(occ.cells(), vec![0b000, 0b001, 0b010, 0b011, 0b100]);
        let e = VertexSet::empty(4);
        assert_eq!(venn_occupancy(&e, &e, &e, 4).cells(), vec![0]);
        let r1 = set(8, &[1, 3, 5, 7]);
        let r2 = set(8, &[2, 3, 6, 7]);
        let r3 = set(8, &[4, 5, 6, 7]);
        assert_eq!(venn_occupancy(&r1, &r2, &r3, 8).count(), 8);
    }

    #[test]
    fn figure_configuration_fractions() {
        // one element in each of the cells ∅, {1}, {3}, {1,2}, {1,2,3}
        let r1 = set(8, &[1, 3, 4, 5]);
        let r2 = set(8, &[3, 4, 5]);
        let r3 = set(8, &[2, 5, 6]);
        let refs = [&r1, &r2, &r3];
        let all: Vec<u32> = (0..8).collect();
        assert_eq!(witness_fraction(&refs, 8, &all).unwrap(), rational(5, 8));
        assert_eq!(witness_fraction(&refs, 8, &all[1..]).unwrap(), rational(4, 7));
        assert_eq!(witness_fraction(&refs, 8, &[0, 0b001, 0b100, 0b011, 0b111]).unwrap(), rational(1, 1));
    }

    #[test]
    fn witness_small_cases() {
        let x = VertexSet::full(3);
        assert_eq!(witness_fraction(&[&x], 3, &[1]).unwrap(), rational(1, 1));
        let a = set(4, &[0]);
        let b = set(4, &[1]);
        assert_eq!(witness_fraction(&[&a, &b], 4, &[0, 1, 2, 3]).unwrap(), rational(3, 4));
        assert!(witness_fraction(&[&a], 4, &[]).is_err());
        assert!(witness_fraction(&[&a], 4, &[2]).is_err());
    }

    #[test]
    fn crossing_examples() {
        let n = 4;
        let mut ranges: Vec<VertexSet> = (0..n).map(|v| VertexSet::singleton(n, v)).collect();
        ranges.extend((0..n).map(|v| VertexSet::singleton(n, v).complement()));
        ranges.push(VertexSet::empty(n));
        ranges.push(VertexSet::full(n));
        let rs = RangeSpace::new(n, ranges).unwrap();
        assert_eq!(rs.len(), 10);
        assert_eq!(find_crossing_pair(&rs), None);

        let rs = RangeSpace::new(4, vec![set(4, &[1, 2]), set(4, &[2, 3])]).unwrap();
        let (a, b) = find_crossing_pair(&rs).unwrap();
        assert!(crosses(&rs.ranges()[a], &rs.ranges()[b]));

        let everything = RangeSpace::power_set(3);
        assert_eq!(find_crossing_pair(&everything), None);
    }

    #[test]
    fn triple_examples() {
        let three = RangeSpace::all_subsets_of_size(10, 3);
        assert_eq!(three.len(), 120);
        assert_eq!(find_triple(&three, 8, 0).unwrap(), None);
        let power = RangeSpace::power_set(8);
        let t = find_triple(&power, 8, 0).unwrap().unwrap();
        let r = power.ranges();
        assert_eq!(venn_occupancy(&r[t[0]], &r[t[1]], &r[t[2]], 8).count(), 8);
        assert!(find_triple(&power, 9, 0).is_err());
    }

    #[test]
    fn triple_respects_orientation() {
        // allowed cells are ∅, {2} and {3}; only orders putting the empty
        // range first reach all three
        let rs = RangeSpace::new(3, vec![set(3, &[0]), set(3, &[1]), VertexSet::empty(3)]).unwrap();
        let forbidden = !0b0001_0101u8;
        let t = find_triple(&rs, 3, forbidden).unwrap().unwrap();
        assert_eq!(t[0], 2);
        let r = rs.ranges();
        let occ = venn_occupancy(&r[t[0]], &r[t[1]], &r[t[2]], 3);
        assert_eq!(occ.count_outside(forbidden), 3);
    }

    #[test]
    fn dual_vc_examples() {
        let single = RangeSpace::new(4, vec![set(4, &[0, 1])]).unwrap();
        assert_eq!(dual_vc_dimension(&single), 1);
        assert!(dual_vc_dimension(&RangeSpace::power_set(8)) >= 3);
        assert_eq!(dual_vc_dimension(&RangeSpace::all_subsets_of_size(10, 3)), 2);
        let trivial = RangeSpace::new(3, vec![VertexSet::empty(3)]).unwrap();
        assert_eq!(dual_vc_dimension(&trivial), 0);
    }

    #[test]
    fn parse_round_trip() {
        let text = "# three ranges\n0110\n1000 # one\n\n0001\n";
        let rs = RangeSpace::parse(text).unwrap();
        assert_eq!(rs.universe(), 4);
        assert_eq!(rs.len(), 3);
        assert_eq!(RangeSpace::parse(&rs.to_text()).unwrap(), rs);
        assert!(matches!(RangeSpace::parse("01\n012"), Err(KcutError::Parse { line: 2, .. })));
        assert!(matches!(RangeSpace::parse("01\n10\n01"), Err(KcutError::Parse { line: 3, .. })));
        assert!(matches!(RangeSpace::parse("01\n011"), Err(KcutError::Parse { line: 2, .. })));
        assert!(RangeSpace::new(2, vec![VertexSet::empty(2), VertexSet::empty(2)]).is_err());
    }

    #[test]
    fn permuted_relabels_cells() {
        let occ = VennOccupancy::from_mask(1 << 0b001);
        assert_eq!(occ.permuted([1, 0, 2]).cells(), vec![0b010]);
        assert_eq!(occ.permuted([2, 1, 0]).cells(), vec![0b100]);
    }
}
