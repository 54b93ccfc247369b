//! Enumeration helpers shared by the integration suites.

use std::collections::HashSet;

use mukit::poset::{FinPoset, MonotoneEndo};

/// All posets on n labeled points, as strict-pair bitmasks over the pair
/// list (i, j), i != j, in row-major order.
pub fn labeled_posets(n: usize) -> Vec<u32> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1u32 << pairs.len()) {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                le[i * n + j] = true;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i * n + j] && le[j * n + i] {
                    continue 'mask;
                }
                if !le[i * n + j] {
                    continue;
                }
                for k in 0..n {
                    if le[j * n + k] && !le[i * n + k] {
                        continue 'mask;
                    }
                }
            }
        }
        let mut canonical = 0u32;
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if le[i * n + j] {
                canonical |= 1 << b;
            }
        }
        out.push(canonical);
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Posets on n points up to order-isomorphism.
pub fn posets_upto_iso(n: usize) -> Vec<FinPoset> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen: HashSet<u32> = HashSet::new();
    let mut out = Vec::new();
    for mask in labeled_posets(n) {
        let strict: HashSet<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &p)| p)
            .collect();
        let mut best = u32::MAX;
        for perm in &perms {
            let mut relabeled = 0u32;
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if strict.contains(&(perm[i], perm[j])) {
                    relabeled |= 1 << b;
                }
            }
            best = best.min(relabeled);
        }
        if seen.insert(best) {
            let elems: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let named: Vec<(String, String)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| best & (1 << b) != 0)
                .map(|(_, &(i, j))| (format!("e{i}"), format!("e{j}")))
                .collect();
            out.push(FinPoset::validate(&elems, &named).unwrap());
        }
    }
    out
}

/// All monotone endomaps of a poset.
pub fn all_monotone_endos(p: &FinPoset) -> Vec<MonotoneEndo> {
    let n = p.len();
    let mut out = Vec::new();
    let mut counter = vec![0usize; n];
    loop {
        let monotone = (0..n)
            .all(|i| (0..n).all(|j| !p.le(i, j) || p.le(counter[i], counter[j])));
        if monotone {
            out.push(MonotoneEndo::new(p.clone(), counter.clone()).unwrap());
        }
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            counter[pos] += 1;
            if counter[pos] < n {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    out
}
