//! Hermite and Smith normal forms with unimodular transforms, plus exact
//! solvers built on them.
//!
//! Every algorithm is written once, generically, over [`Scalar`]. Public
//! entry points run the `i64` instantiation and transparently retry over
//! `BigInt` when an intermediate value overflows; results are converted back
//! to `i64` (values produced at desk scale always fit, and a failure to fit
//! is reported as an error rather than wrapped).

use super::mat::{GMat, IntMat, Overflow, Res, Scalar};
use crate::error::Result;

/// Row-style Hermite normal form: `h = u * m` with `u` unimodular, `h` in
/// row echelon form with positive pivots, entries above each pivot reduced
/// into `[0, pivot)`, and zero rows at the bottom.
pub struct RowHnf {
    pub h: IntMat,
    pub u: IntMat,
    /// (row, col) of each pivot, rows and cols strictly increasing.
    pub pivots: Vec<(usize, usize)>,
}

fn row_hnf_generic<S: Scalar>(m: &GMat<S>, track: bool) -> Res<(GMat<S>, Option<GMat<S>>, Vec<(usize, usize)>)> {
    let mut h = m.clone();
    let mut u = if track {
        Some(GMat::<S>::identity(m.rows()))
    } else {
        None
    };
    let rows = m.rows();
    let cols = m.cols();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0usize;
    for col in 0..cols {
        if next_row == rows {
            break;
        }
        // Reduce the entries of this column among the active rows until one
        // nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for r in next_row..rows {
                if !h.get(r, col).is_zero() {
                    best = match best {
                        None => Some(r),
                        Some(b) => {
                            if h.get(r, col).abs() < h.get(b, col).abs() {
                                Some(r)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(p) = best else { break };
            let mut others = false;
            for r in next_row..rows {
                if r == p || h.get(r, col).is_zero() {
                    continue;
                }
                others = true;
                let (q, _) = h.get(r, col).div_mod_floor(h.get(p, col));
                let nq = S::zero().checked_sub(&q).ok_or(Overflow)?;
                h.row_addmul(r, p, &nq)?;
                if let Some(u) = u.as_mut() {
                    u.row_addmul(r, p, &nq)?;
                }
            }
            if !others {
                // p is the unique nonzero entry: move it into place.
                h.swap_rows(next_row, p);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(next_row, p);
                }
                if h.get(next_row, col).is_negative() {
                    h.negate_row(next_row)?;
                    if let Some(u) = u.as_mut() {
                        u.negate_row(next_row)?;
                    }
                }
                // Canonical reduction of the entries above the pivot.
                let pv = h.get(next_row, col).clone();
                for r in 0..next_row {
                    let (q, _) = h.get(r, col).div_mod_floor(&pv);
                    if !q.is_zero() {
                        let nq = S::zero().checked_sub(&q).ok_or(Overflow)?;
                        h.row_addmul(r, next_row, &nq)?;
                        if let Some(u) = u.as_mut() {
                            u.row_addmul(r, next_row, &nq)?;
                        }
                    }
                }
                pivots.push((next_row, col));
                next_row += 1;
                break;
            }
        }
    }
    Ok((h, u, pivots))
}

pub fn row_hnf(m: &IntMat, track: bool) -> Result<RowHnf> {
    match row_hnf_generic::<i64>(m, track) {
        Ok((h, u, pivots)) => Ok(RowHnf {
            h,
            u: u.unwrap_or_else(|| IntMat::zeros(0, 0)),
            pivots,
        }),
        Err(Overflow) => {
            let big = m.to_big();
            let (h, u, pivots) =
                row_hnf_generic(&big, track).expect("BigInt arithmetic cannot overflow");
            Ok(RowHnf {
                h: h.try_to_int()?,
                u: u.map(|u| u.try_to_int()).transpose()?.unwrap_or_else(|| IntMat::zeros(0, 0)),
                pivots,
            })
        }
    }
}

/// Smith normal form: `d = u * m * v` with `u`, `v` unimodular and `d`
/// diagonal with a divisibility chain `d_1 | d_2 | ...`.
pub struct Snf {
    pub d: Vec<i64>,
    pub u: IntMat,
    pub uinv: IntMat,
    pub v: IntMat,
    pub vinv: IntMat,
}

struct SnfGeneric<S> {
    a: GMat<S>,
    u: GMat<S>,
    uinv: GMat<S>,
    v: GMat<S>,
    vinv: GMat<S>,
}

impl<S: Scalar> SnfGeneric<S> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.uinv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.vinv.swap_rows(i, j);
    }

    /// row_i += q * row_j on `a`.
    fn row_addmul(&mut self, i: usize, j: usize, q: &S) -> Res<()> {
        self.a.row_addmul(i, j, q)?;
        self.u.row_addmul(i, j, q)?;
        let nq = S::zero().checked_sub(q).ok_or(Overflow)?;
        self.uinv.col_addmul(j, i, &nq)
    }

    /// col_i += q * col_j on `a`.
    fn col_addmul(&mut self, i: usize, j: usize, q: &S) -> Res<()> {
        self.a.col_addmul(i, j, q)?;
        self.v.col_addmul(i, j, q)?;
        let nq = S::zero().checked_sub(q).ok_or(Overflow)?;
        self.vinv.row_addmul(j, i, &nq)
    }

    fn negate_row(&mut self, i: usize) -> Res<()> {
        self.a.negate_row(i)?;
        self.u.negate_row(i)?;
        self.uinv.negate_col(i)
    }
}

fn snf_generic<S: Scalar>(m: &GMat<S>) -> Res<SnfGeneric<S>> {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = SnfGeneric {
        a: m.clone(),
        u: GMat::identity(rows),
        uinv: GMat::identity(rows),
        v: GMat::identity(cols),
        vinv: GMat::identity(cols),
    };
    let n = rows.min(cols);
    for t in 0..n {
        'pivot: loop {
            // Smallest nonzero entry of the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if !s.a.get(r, c).is_zero() {
                        best = match best {
                            None => Some((r, c)),
                            Some((br, bc)) => {
                                if s.a.get(r, c).abs() < s.a.get(br, bc).abs() {
                                    Some((r, c))
                                } else {
                                    Some((br, bc))
                                }
                            }
                        };
                    }
                }
            }
            let Some((pr, pc)) = best else { break };
            s.swap_rows(t, pr);
            s.swap_cols(t, pc);
            let mut dirty = false;
            for r in t + 1..rows {
                if !s.a.get(r, t).is_zero() {
                    let (q, rem) = s.a.get(r, t).div_mod_floor(s.a.get(t, t));
                    let nq = S::zero().checked_sub(&q).ok_or(Overflow)?;
                    s.row_addmul(r, t, &nq)?;
                    if !rem.is_zero() {
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                if !s.a.get(t, c).is_zero() {
                    let (q, rem) = s.a.get(t, c).div_mod_floor(s.a.get(t, t));
                    let nq = S::zero().checked_sub(&q).ok_or(Overflow)?;
                    s.col_addmul(c, t, &nq)?;
                    if !rem.is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce the divisibility chain.
            for r in t + 1..rows {
                for c in t + 1..cols {
                    if !s.a.get(r, c).mod_floor(s.a.get(t, t)).is_zero() {
                        s.row_addmul(t, r, &S::one())?;
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        if s.a.get(t, t).is_negative() {
            s.negate_row(t)?;
        }
    }
    Ok(s)
}

pub fn snf(m: &IntMat) -> Result<Snf> {
    let pack = |s: SnfGeneric<i64>| {
        let n = s.a.rows().min(s.a.cols());
        Snf {
            d: (0..n).map(|i| *s.a.get(i, i)).collect(),
            u: s.u,
            uinv: s.uinv,
            v: s.v,
            vinv: s.vinv,
        }
    };
    match snf_generic::<i64>(m) {
        Ok(s) => Ok(pack(s)),
        Err(Overflow) => {
            let s = snf_generic(&m.to_big()).expect("BigInt arithmetic cannot overflow");
            let n = s.a.rows().min(s.a.cols());
            let d = (0..n)
                .map(|i| {
                    num_traits::ToPrimitive::to_i64(s.a.get(i, i))
                        .ok_or(crate::error::Error::ResultTooLarge)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Snf {
                d,
                u: s.u.try_to_int()?,
                uinv: s.uinv.try_to_int()?,
                v: s.v.try_to_int()?,
                vinv: s.vinv.try_to_int()?,
            })
        }
    }
}

/// Column-style view of a HNF of `m`: `m * ut = ht` where `ht` has pivot
/// rows strictly increasing with column index. Used for solving `m x = b`.
pub struct ColHnf {
    /// `ht` = transposed row HNF of `m^T`.
    pub ht: IntMat,
    /// Column transform: `m * ut = ht`.
    pub ut: IntMat,
    /// (row, col) pivots of `ht`, both strictly increasing.
    pub pivots: Vec<(usize, usize)>,
}

pub fn col_hnf(m: &IntMat) -> Result<ColHnf> {
    let RowHnf { h, u, pivots } = row_hnf(&m.transpose(), true)?;
    Ok(ColHnf {
        ht: h.transpose(),
        ut: u.transpose(),
        pivots: pivots.into_iter().map(|(r, c)| (c, r)).collect(),
    })
}

impl ColHnf {
    /// Solve `ht * y = b` exactly by the pivot structure; returns `None`
    /// when `b` is not in the column span.
    fn solve_echelon(&self, b: &[i64]) -> Result<Option<Vec<i64>>> {
        let mut resid: Vec<i64> = b.to_vec();
        let mut y = vec![0i64; self.ht.cols()];
        for &(r, c) in &self.pivots {
            let p = *self.ht.get(r, c);
            if resid[r] % p != 0 {
                return Ok(None);
            }
            let t = resid[r] / p;
            if t != 0 {
                for rr in 0..self.ht.rows() {
                    let sub = (t as i128) * (*self.ht.get(rr, c) as i128);
                    let v = (resid[rr] as i128) - sub;
                    resid[rr] = i64::try_from(v).map_err(|_| crate::error::Error::ResultTooLarge)?;
                }
            }
            y[c] = t;
        }
        if resid.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        Ok(Some(y))
    }

    /// Solve `m x = b` where this is the column HNF of `m`.
    pub fn solve(&self, b: &[i64]) -> Result<Option<Vec<i64>>> {
        Ok(self
            .solve_echelon(b)?
            .map(|y| super::mat::mat_vec(&self.ut, &y))
            .transpose()?)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Basis of the integer kernel `{x : m x = 0}`, as columns in canonical
/// lattice form.
pub fn kernel_basis(m: &IntMat) -> Result<IntMat> {
    let RowHnf { h, u, pivots } = row_hnf(&m.transpose(), true)?;
    let rank = pivots.len();
    let rows: Vec<usize> = (rank..h.rows()).collect();
    debug_assert!(rows.iter().all(|&r| h.row(r).iter().all(|&x| x == 0)));
    let gens = u.select_rows(&rows).transpose();
    lattice_hnf(&gens)
}

/// Canonical basis of the lattice spanned by the columns of `m`
/// (column-style HNF with zero columns dropped).
pub fn lattice_hnf(m: &IntMat) -> Result<IntMat> {
    let RowHnf { h, pivots, .. } = row_hnf(&m.transpose(), false)?;
    let rows: Vec<usize> = (0..pivots.len()).collect();
    Ok(h.select_rows(&rows).transpose())
}

/// Do the columns of `sub` lie in the column span of `lat`?
pub fn lattice_contains(lat: &ColHnf, sub: &IntMat) -> Result<bool> {
    for c in 0..sub.cols() {
        if lat.solve_echelon(&sub.col_vec(c))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of the column-span lattices of `a` and `b`.
pub fn lattice_eq(a: &IntMat, b: &IntMat) -> Result<bool> {
    Ok(lattice_hnf(a)? == lattice_hnf(b)?)
}

/// Basis of `{x : m x ∈ span(lat)}`.
pub fn preimage_basis(m: &IntMat, lat: &IntMat) -> Result<IntMat> {
    if lat.cols() == 0 {
        return kernel_basis(m);
    }
    let stacked = m.hcat(lat);
    let k = kernel_basis(&stacked)?;
    let top: Vec<usize> = (0..m.cols()).collect();
    lattice_hnf(&k.select_rows(&top))
}

/// Basis of the intersection of the column spans of `a` and `b`.
pub fn lattice_intersect(a: &IntMat, b: &IntMat) -> Result<IntMat> {
    let stacked = a.hcat(b);
    let k = kernel_basis(&stacked)?;
    let top: Vec<usize> = (0..a.cols()).collect();
    let coeffs = k.select_rows(&top);
    lattice_hnf(&super::mat::mat_mul(a, &coeffs)?)
}
