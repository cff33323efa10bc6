//! Relation lattice: sparse elimination, Hermite form, unit logarithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hp::{Fixed, PREC};
use crate::linalg::{hnf_mod, Mat};

pub(crate) type SparseRow = Vec<(usize, i128)>;

pub(crate) struct Reduction {
    /// Columns surviving sparse elimination, in order.
    pub remaining: Vec<usize>,
    /// Square upper-triangular Hermite form over `remaining`.
    pub hnf: Mat,
    /// `(c, expr)`: the class of column `c` equals `Σ k·[col]` over `expr`.
    pub substitutions: Vec<(usize, SparseRow)>,
    pub unit_logs: Vec<Vec<Fixed>>,
}

fn axpy(row: &SparseRow, k: i128, piv: &SparseRow) -> Result<SparseRow> {
    // row - k·piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    let ovf = || Error::Overflow("relation elimination");
    while i < row.len() || j < piv.len() {
        let take_row = j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0);
        let take_piv = i >= row.len() || (j < piv.len() && piv[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_piv {
            let v = piv[j].1.checked_mul(k).ok_or_else(ovf)?;
            out.push((piv[j].0, -v));
            j += 1;
        } else {
            let v = row[i].1.checked_sub(piv[j].1.checked_mul(k).ok_or_else(ovf)?).ok_or_else(ovf)?;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

fn log_axpy(l: &mut [Fixed], k: i128, p: &[Fixed]) {
    let kb = BigInt::from(k);
    for (a, b) in l.iter_mut().zip(p) {
        *a = a.sub(&b.mul_int(&kb));
    }
}

fn is_negligible_vec(l: &[Fixed]) -> bool {
    l.iter().all(|x| x.to_f64().abs() < 1e-20)
}

/// Reduces the relation rows. `None` when the rows do not have full column rank.
pub(crate) fn reduce(rows: Vec<(SparseRow, Vec<Fixed>)>, ncols: usize) -> Result<Option<Reduction>> {
    let mut active: Vec<Option<(SparseRow, Vec<Fixed>)>> = rows.into_iter().map(Some).collect();
    let mut eliminated = vec![false; ncols];
    let mut substitutions = Vec::new();
    let mut unit_logs = Vec::new();

    for slot in active.iter_mut() {
        if slot.as_ref().is_some_and(|(r, _)| r.is_empty()) {
            let (_, l) = slot.take().expect("checked");
            unit_logs.push(l);
        }
    }

    loop {
        let mut weight = vec![0usize; ncols];
        // best row (by length) with a ±1 entry, per column
        let mut unit_row: Vec<Option<(usize, usize)>> = vec![None; ncols];
        for (ri, slot) in active.iter().enumerate() {
            let Some((r, _)) = slot else { continue };
            for &(c, v) in r {
                weight[c] += 1;
                if v.abs() == 1 && unit_row[c].map_or(true, |(_, len)| r.len() < len) {
                    unit_row[c] = Some((ri, r.len()));
                }
            }
        }
        let pick = (0..ncols)
            .filter(|&c| !eliminated[c] && unit_row[c].is_some())
            .min_by_key(|&c| (weight[c].saturating_sub(1)) * unit_row[c].map_or(0, |(_, l)| l.saturating_sub(1)));
        let Some(c) = pick else { break };
        let (pr, _) = unit_row[c].expect("filtered");
        let (prow, plog) = active[pr].take().expect("active pivot");
        let s = prow.iter().find(|e| e.0 == c).expect("pivot entry").1;
        for slot in active.iter_mut() {
            let Some((r, l)) = slot else { continue };
            let Some(&(_, x)) = r.iter().find(|e| e.0 == c) else { continue };
            let k = x * s;
            *r = axpy(r, k, &prow)?;
            log_axpy(l, k, &plog);
            if r.is_empty() {
                let (_, l) = slot.take().expect("just updated");
                unit_logs.push(l);
            }
        }
        let expr: SparseRow = prow.iter().filter(|e| e.0 != c).map(|&(k, a)| (k, -s * a)).collect();
        substitutions.push((c, expr));
        eliminated[c] = true;
    }

    let remaining: Vec<usize> = (0..ncols).filter(|&c| !eliminated[c]).collect();
    let m = remaining.len();
    let mut pos = vec![usize::MAX; ncols];
    for (i, &c) in remaining.iter().enumerate() {
        pos[c] = i;
    }

    let mut basis: Vec<Option<(Vec<BigInt>, Vec<Fixed>)>> = vec![None; m];
    for (r, l) in active.into_iter().flatten() {
        let mut v = vec![BigInt::zero(); m];
        for (c, x) in r {
            if pos[c] == usize::MAX {
                return Err(Error::Internal("entry in eliminated column".into()));
            }
            v[pos[c]] = BigInt::from(x);
        }
        let mut l = l;
        let mut stored = false;
        for i in 0..m {
            if v[i].is_zero() {
                continue;
            }
            match basis[i].take() {
                None => {
                    if v[i].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                        l.iter_mut().for_each(|x| *x = x.neg());
                    }
                    basis[i] = Some((std::mem::take(&mut v), std::mem::take(&mut l)));
                    stored = true;
                    break;
                }
                Some((b, bl)) => {
                    if (&v[i] % &b[i]).is_zero() {
                        let q = &v[i] / &b[i];
                        for k in i..m {
                            v[k] -= &q * &b[k];
                        }
                        for (x, y) in l.iter_mut().zip(&bl) {
                            *x = x.sub(&y.mul_int(&q));
                        }
                        basis[i] = Some((b, bl));
                    } else {
                        let eg = b[i].extended_gcd(&v[i]);
                        let (g, x, y) = (eg.gcd, eg.x, eg.y);
                        let (bq, vq) = (&b[i] / &g, &v[i] / &g);
                        let nb: Vec<BigInt> = (0..m).map(|k| &x * &b[k] + &y * &v[k]).collect();
                        let nbl: Vec<Fixed> = bl.iter().zip(&l).map(|(p, q)| p.mul_int(&x).add(&q.mul_int(&y))).collect();
                        let nv: Vec<BigInt> = (0..m).map(|k| &vq * &b[k] - &bq * &v[k]).collect();
                        let nl: Vec<Fixed> = bl.iter().zip(&l).map(|(p, q)| p.mul_int(&vq).sub(&q.mul_int(&bq))).collect();
                        basis[i] = Some((nb, nbl));
                        v = nv;
                        l = nl;
                    }
                }
            }
        }
        if !stored {
            unit_logs.push(l);
        }
    }
    if basis.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut h: Vec<Vec<BigInt>> = basis.into_iter().map(|b| b.expect("full rank").0).collect();
    // left to right, so reducing column i never disturbs columns < i
    for i in 0..m {
        for j in 0..i {
            let q = h[j][i].div_floor(&h[i][i]);
            if !q.is_zero() {
                for k in i..m {
                    let t = &q * &h[i][k];
                    h[j][k] -= t;
                }
            }
        }
    }
    // a determinant beyond i128 means the lattice is still far from saturated
    let det: BigInt = (0..m).map(|i| h[i][i].abs()).product();
    if det.bits() > 100 {
        return Ok(None);
    }
    let hnf = h
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().ok_or(Error::Overflow("class group Hermite form"))).collect())
        .collect::<Result<Mat>>()?;
    let unit_logs = unit_logs.into_iter().filter(|l| !is_negligible_vec(l)).collect();
    Ok(Some(Reduction { remaining, hnf, substitutions, unit_logs }))
}

/// Continued-fraction reconstruction of `x` as `a/b` with `b ≤ max_den`,
/// accepted when `|x − a/b| < 2^-tol_bits`.
pub(crate) fn rationalize(x: &Fixed, max_den: i128, tol_bits: u32) -> Option<(i128, i128)> {
    let one = BigInt::one() << PREC;
    let (mut a, mut b) = (x.0.clone(), one.clone());
    let (mut h1, mut h0) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k0) = (BigInt::zero(), BigInt::one());
    let tol = BigInt::one() << (PREC - tol_bits);
    loop {
        let q = a.div_floor(&b);
        let h = &q * &h1 + &h0;
        let k = &q * &k1 + &k0;
        if k > BigInt::from(max_den) {
            return None;
        }
        let err = (&x.0 * &k - &h * &one).abs();
        if err < &tol * &k {
            return Some((h.to_i128()?, k.to_i128()?));
        }
        let r = &a - &q * &b;
        if r.is_zero() {
            return None;
        }
        (a, b) = (b, r);
        (h0, h1) = (h1, h);
        (k0, k1) = (k1, k);
    }
}

fn det2(a: &[Fixed], b: &[Fixed]) -> Fixed {
    a[0].mul(&b[1]).sub(&a[1].mul(&b[0]))
}

fn norm_f64(v: &[Fixed]) -> f64 {
    v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

/// Covolume of the lattice spanned by the unit log vectors (projected to the
/// first `r` coordinates). `None` when they span less than rank `r` or the
/// rational reconstruction fails.
pub(crate) fn regulator(units: &[Vec<Fixed>], r: usize) -> Option<f64> {
    if r == 0 {
        return Some(1.0);
    }
    if r > 2 {
        return None;
    }
    let mut vs: Vec<Vec<Fixed>> = units.iter().map(|u| u[..r].to_vec()).collect();
    vs.sort_by(|a, b| norm_f64(a).total_cmp(&norm_f64(b)));
    vs.retain(|v| norm_f64(v) > 1e-6);
    let b0 = vs.first()?.clone();
    let (reference, volume) = if r == 1 {
        (vec![b0.clone()], b0[0].to_f64().abs())
    } else {
        let nb0 = norm_f64(&b0);
        let b1 = vs.iter().find(|v| (det2(&b0, v).to_f64() / (nb0 * norm_f64(v))).abs() > 1e-6)?.clone();
        (vec![b0.clone(), b1.clone()], det2(&b0, &b1).to_f64().abs())
    };
    const MAX_DEN: i128 = 1 << 40;
    let mut fracs: Vec<Vec<(i128, i128)>> = Vec::new();
    for v in &vs {
        let coords: Vec<Fixed> = if r == 1 {
            vec![v[0].div(&reference[0][0])]
        } else {
            let d = det2(&reference[0], &reference[1]);
            vec![det2(v, &reference[1]).div(&d), det2(&reference[0], v).div(&d)]
        };
        let mut fr = Vec::with_capacity(r);
        for c in &coords {
            fr.push(rationalize(c, MAX_DEN, 80)?);
        }
        fracs.push(fr);
    }
    let mut den: i128 = 1;
    for fr in &fracs {
        for &(_, b) in fr {
            den = den.checked_mul(b / den.gcd(&b))?;
            if den > MAX_DEN {
                return None;
            }
        }
    }
    let gens: Vec<Vec<i128>> = fracs
        .iter()
        .map(|fr| fr.iter().map(|&(a, b)| (a * (den / b)).rem_euclid(den)).collect())
        .collect();
    let h = hnf_mod(&gens, r, den);
    let mut index = 1.0;
    for i in 0..r {
        index *= h[i][i] as f64 / den as f64;
    }
    Some(volume * index)
}
