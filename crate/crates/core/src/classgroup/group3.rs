//! Brute-force operations on small abelian 3-groups `⊕ Z/3^{vᵢ}`.

use std::collections::HashSet;

use crate::linalg::Mat;

pub(crate) type Elt = Vec<i128>;

pub(crate) fn elements(moduli: &[i128]) -> Vec<Elt> {
    let mut out = vec![vec![]];
    for &m in moduli {
        let mut next = Vec::with_capacity(out.len() * m as usize);
        for e in &out {
            for x in 0..m {
                let mut f = e.clone();
                f.push(x);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// `x·M` reduced componentwise.
pub(crate) fn act(m: &Mat, x: &[i128], moduli: &[i128]) -> Elt {
    (0..moduli.len())
        .map(|j| {
            let s: i128 = x.iter().enumerate().map(|(i, &c)| c * m[i][j]).sum();
            s.rem_euclid(moduli[j])
        })
        .collect()
}

pub(crate) fn sub(a: &[i128], b: &[i128], moduli: &[i128]) -> Elt {
    a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x - y).rem_euclid(*m)).collect()
}

fn scale(a: &[i128], k: i128, moduli: &[i128]) -> Elt {
    a.iter().zip(moduli).map(|(x, m)| (x * k).rem_euclid(*m)).collect()
}

fn add(a: &[i128], b: &[i128], moduli: &[i128]) -> Elt {
    a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x + y).rem_euclid(*m)).collect()
}

/// Subgroup generated by `gens`.
pub(crate) fn span(gens: &[Elt], moduli: &[i128]) -> HashSet<Elt> {
    let zero: Elt = vec![0; moduli.len()];
    let mut set: HashSet<Elt> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = add(&x, g, moduli);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Invariants (descending) of a subgroup given by its elements.
pub(crate) fn invariants(set: &HashSet<Elt>, moduli: &[i128]) -> Vec<i128> {
    let count = |k: u32| set.iter().filter(|x| scale(x, 3i128.pow(k), moduli).iter().all(|&c| c == 0)).count();
    // number of cyclic factors of order ≥ 3^k is log₃(|H[3^k]| / |H[3^{k-1}]|)
    let mut at_least = Vec::new();
    let mut prev = 1usize;
    let mut k = 1;
    while prev < set.len() {
        let c = count(k);
        let mut r = 0;
        let mut q = c / prev;
        while q > 1 {
            q /= 3;
            r += 1;
        }
        at_least.push(r);
        prev = c;
        k += 1;
    }
    let mut inv = Vec::new();
    for (i, &r) in at_least.iter().enumerate() {
        let next = at_least.get(i + 1).copied().unwrap_or(0);
        for _ in next..r {
            inv.push(3i128.pow(i as u32 + 1));
        }
    }
    inv.sort_by(|a, b| b.cmp(a));
    inv
}

/// `log₃ [A : B]` for subgroups `B ⊆ A`.
pub(crate) fn log3_index(a: usize, b: usize) -> usize {
    let mut q = a / b;
    let mut r = 0;
    while q > 1 {
        q /= 3;
        r += 1;
    }
    r
}

pub(crate) fn triple(set: &HashSet<Elt>, moduli: &[i128]) -> Vec<Elt> {
    set.iter().map(|x| scale(x, 3, moduli)).collect()
}
