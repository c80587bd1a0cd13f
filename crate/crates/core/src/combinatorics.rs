//! Enumeration helpers shared by the exact code paths.

/// Calls `visit` with every labeling of `items` elements into exactly
/// `blocks` unlabeled groups, as a restricted-growth string.
pub(crate) fn for_each_grouping(items: usize, blocks: usize, mut visit: impl FnMut(&[usize])) {
    if blocks == 0 || blocks > items {
        return;
    }
    let mut labels = vec![0usize; items];
    fn rec(pos: usize, used: usize, blocks: usize, labels: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        let items = labels.len();
        if pos == items {
            if used == blocks {
                visit(labels);
            }
            return;
        }
        // remaining positions must still be able to open the missing blocks
        if blocks - used > items - pos {
            return;
        }
        let limit = (used + 1).min(blocks);
        for label in 0..limit {
            labels[pos] = label;
            let next_used = if label == used { used + 1 } else { used };
            rec(pos + 1, next_used, blocks, labels, visit);
        }
    }
    labels[0] = 0;
    rec(1, 1, blocks, &mut labels, &mut visit);
}

/// Calls `visit` with every `choose`-subset of `0..items` in lexicographic order.
pub(crate) fn for_each_combination(items: usize, choose: usize, mut visit: impl FnMut(&[usize])) {
    if choose > items {
        return;
    }
    let mut idx: Vec<usize> = (0..choose).collect();
    loop {
        visit(&idx);
        let mut i = choose;
        while i > 0 && idx[i - 1] == items - choose + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..choose {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Stirling number of the second kind as `f64` (counts may exceed u64).
pub fn stirling2(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut row = vec![0.0f64; k + 1];
    row[0] = 1.0;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as f64 * row[j] + row[j - 1];
        }
        row[0] = 0.0;
    }
    row[k]
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
