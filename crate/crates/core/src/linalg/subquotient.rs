//! Presentation of a subquotient `Z / B` of a free ambient `Z^n`, where
//! `B ⊆ Z ⊆ Z^n` are lattices given by generator matrices.
//!
//! This single structure backs module presentations, cohomology groups and
//! exactness checks: it converts ambient vectors to canonical coordinates
//! (and back) and exposes the invariant factors of the quotient.

use serde::Serialize;

use super::exact::{col_hnf, lattice_hnf, snf, ColHnf};
use super::mat::{mat_vec, IntMat};
use crate::error::{Error, Result};

pub struct Subquotient {
    ambient: usize,
    /// Canonical basis of the subgroup lattice `Z` (ambient × z).
    basis: IntMat,
    basis_hnf: ColHnf,
    /// z × z transforms between basis coefficients and SNF coordinates.
    to_snf: IntMat,
    from_snf: IntMat,
    /// Order of each SNF coordinate: `d ≥ 1`, or `0` for a free coordinate.
    orders: Vec<i64>,
    /// SNF coordinates with order ≠ 1, i.e. the visible ones.
    keep: Vec<usize>,
}

impl Subquotient {
    /// Build `span(cycles) / span(boundaries)`; the boundary lattice must be
    /// contained in the cycle lattice.
    pub fn new(ambient: usize, cycles: &IntMat, boundaries: &IntMat) -> Result<Self> {
        assert_eq!(cycles.rows(), ambient);
        assert_eq!(boundaries.rows(), ambient);
        let basis = lattice_hnf(cycles)?;
        let basis_hnf = col_hnf(&basis)?;
        let z = basis.cols();
        let mut x = IntMat::zeros(z, boundaries.cols());
        for c in 0..boundaries.cols() {
            let col = boundaries.col_vec(c);
            let sol = basis_hnf.solve(&col)?.ok_or_else(|| {
                Error::Internal("boundary lattice is not contained in the cycle lattice".into())
            })?;
            for r in 0..z {
                x.set(r, c, sol[r]);
            }
        }
        let s = snf(&x)?;
        let mut orders = vec![0i64; z];
        for (i, &d) in s.d.iter().enumerate() {
            orders[i] = d;
        }
        let keep: Vec<usize> = (0..z).filter(|&i| orders[i] != 1).collect();
        Ok(Subquotient {
            ambient,
            basis,
            basis_hnf,
            to_snf: s.u,
            from_snf: s.uinv,
            orders,
            keep,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Number of visible coordinates.
    pub fn dim(&self) -> usize {
        self.keep.len()
    }

    /// Orders of the visible coordinates: torsion (each ≥ 2, in a
    /// divisibility chain) followed by `0`s for free coordinates.
    pub fn coord_orders(&self) -> Vec<i64> {
        self.keep.iter().map(|&i| self.orders[i]).collect()
    }

    pub fn invariant_factors(&self) -> Vec<i64> {
        self.keep
            .iter()
            .map(|&i| self.orders[i])
            .filter(|&d| d >= 2)
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.keep.iter().filter(|&&i| self.orders[i] == 0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Total number of elements, when finite and small enough to count.
    pub fn class_count(&self) -> Option<u128> {
        let mut n: u128 = 1;
        for &i in &self.keep {
            if self.orders[i] == 0 {
                return None;
            }
            n = n.checked_mul(self.orders[i] as u128)?;
        }
        Some(n)
    }

    pub fn reduce_coords(&self, coords: &[i64]) -> Vec<i64> {
        assert_eq!(coords.len(), self.dim());
        coords
            .iter()
            .zip(self.keep.iter())
            .map(|(&c, &i)| {
                if self.orders[i] == 0 {
                    c
                } else {
                    c.rem_euclid(self.orders[i])
                }
            })
            .collect()
    }

    /// Coordinates of an ambient vector; `None` when it does not lie in the
    /// cycle lattice.
    pub fn coords(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        assert_eq!(v.len(), self.ambient);
        let Some(x) = self.basis_hnf.solve(v)? else {
            return Ok(None);
        };
        let y = mat_vec(&self.to_snf, &x)?;
        let kept: Vec<i64> = self.keep.iter().map(|&i| y[i]).collect();
        Ok(Some(self.reduce_coords(&kept)))
    }

    /// Canonical ambient representative of a coordinate vector.
    pub fn rep(&self, coords: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(coords.len(), self.dim());
        let mut y = vec![0i64; self.orders.len()];
        for (&c, &i) in coords.iter().zip(self.keep.iter()) {
            y[i] = c;
        }
        let x = mat_vec(&self.from_snf, &y)?;
        mat_vec(&self.basis, &x)
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.coords(v)?.is_some())
    }

    pub fn is_zero_class(&self, v: &[i64]) -> Result<bool> {
        Ok(match self.coords(v)? {
            Some(c) => c.iter().all(|&x| x == 0),
            None => false,
        })
    }

    pub fn zero_coords(&self) -> Vec<i64> {
        vec![0; self.dim()]
    }

    pub fn add_coords(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x + y).collect();
        self.reduce_coords(&s)
    }

    pub fn neg_coords(&self, a: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().map(|&x| -x).collect();
        self.reduce_coords(&s)
    }

    pub fn scale_coords(&self, a: &[i64], t: i64) -> Vec<i64> {
        let s: Vec<i64> = a.iter().map(|&x| x * t).collect();
        self.reduce_coords(&s)
    }

    /// Enumerate all coordinate vectors when the group is finite with at
    /// most `bound` elements.
    pub fn enumerate(&self, bound: u128) -> Option<Vec<Vec<i64>>> {
        let n = self.class_count()?;
        if n > bound {
            return None;
        }
        let orders = self.coord_orders();
        let mut out = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; orders.len()];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == orders.len() {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < orders[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// A shape summary as reported: invariant factors and free rank.
    pub fn shape(&self) -> GroupShape {
        GroupShape {
            invariant_factors: self.invariant_factors(),
            free_rank: self.free_rank(),
        }
    }
}

/// Isomorphism type of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupShape {
    pub invariant_factors: Vec<i64>,
    pub free_rank: usize,
}

impl GroupShape {
    pub fn trivial() -> Self {
        GroupShape {
            invariant_factors: vec![],
            free_rank: 0,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }
}

impl std::fmt::Display for GroupShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Solve `a x ≡ b (mod span(rel))`, returning one solution for `x`.
pub fn solve_mod(a: &IntMat, rel: &IntMat, b: &[i64]) -> Result<Option<Vec<i64>>> {
    let stacked = if rel.cols() == 0 { a.clone() } else { a.hcat(rel) };
    let hnf = col_hnf(&stacked)?;
    Ok(hnf.solve(b)?.map(|xy| xy[..a.cols()].to_vec()))
}

/// Solve `a X ≡ B (mod span(rel))` column by column.
pub fn solve_mod_mat(a: &IntMat, rel: &IntMat, b: &IntMat) -> Result<Option<IntMat>> {
    let stacked = if rel.cols() == 0 { a.clone() } else { a.hcat(rel) };
    let hnf = col_hnf(&stacked)?;
    let mut out = IntMat::zeros(a.cols(), b.cols());
    for c in 0..b.cols() {
        let Some(xy) = hnf.solve(&b.col_vec(c))? else {
            return Ok(None);
        };
        for r in 0..a.cols() {
            out.set(r, c, xy[r]);
        }
    }
    Ok(Some(out))
}

