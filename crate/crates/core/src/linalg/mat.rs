use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Scalar types usable by the exact algorithms: `i64` for the fast path and
/// `BigInt` as the fallback when an intermediate value overflows 64 bits.
pub trait Scalar:
    Clone
    + Ord
    + Eq
    + fmt::Debug
    + Zero
    + One
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + num_integer::Integer
    + ToPrimitive
    + From<i64>
{
}

impl Scalar for i64 {}
impl Scalar for num_bigint::BigInt {}

/// Raised by the `i64` instantiation when a checked operation overflows.
/// The caller retries the whole computation over `BigInt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Res<T> = std::result::Result<T, Overflow>;

/// Dense row-major matrix over an exact scalar.
#[derive(Clone, PartialEq, Eq)]
pub struct GMat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// The public matrix type; all module and map data is desk-scale `i64`.
pub type IntMat = GMat<i64>;

impl<S: Scalar> GMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GMat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        debug_assert!(rows.iter().all(|v| v.len() == c));
        GMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        GMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_vec(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c).clone()
            } else {
                other.get(r - self.rows, c).clone()
            }
        })
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// row_i += q * row_j (checked).
    pub(crate) fn row_addmul(&mut self, i: usize, j: usize, q: &S) -> Res<()> {
        if q.is_zero() {
            return Ok(());
        }
        debug_assert_ne!(i, j);
        let cols = self.cols;
        for c in 0..cols {
            let t = self.data[j * cols + c]
                .checked_mul(q)
                .ok_or(Overflow)?;
            let v = self.data[i * cols + c].checked_add(&t).ok_or(Overflow)?;
            self.data[i * cols + c] = v;
        }
        Ok(())
    }

    pub(crate) fn negate_row(&mut self, i: usize) -> Res<()> {
        for c in 0..self.cols {
            let v = S::zero()
                .checked_sub(&self.data[i * self.cols + c])
                .ok_or(Overflow)?;
            self.data[i * self.cols + c] = v;
        }
        Ok(())
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// col_i += q * col_j (checked).
    pub(crate) fn col_addmul(&mut self, i: usize, j: usize, q: &S) -> Res<()> {
        if q.is_zero() {
            return Ok(());
        }
        debug_assert_ne!(i, j);
        for r in 0..self.rows {
            let t = self.data[r * self.cols + j]
                .checked_mul(q)
                .ok_or(Overflow)?;
            let v = self.data[r * self.cols + i]
                .checked_add(&t)
                .ok_or(Overflow)?;
            self.data[r * self.cols + i] = v;
        }
        Ok(())
    }

    pub(crate) fn negate_col(&mut self, i: usize) -> Res<()> {
        for r in 0..self.rows {
            let v = S::zero()
                .checked_sub(&self.data[r * self.cols + i])
                .ok_or(Overflow)?;
            self.data[r * self.cols + i] = v;
        }
        Ok(())
    }
}

impl IntMat {
    pub fn to_big(&self) -> GMat<num_bigint::BigInt> {
        GMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x.into()).collect(),
        }
    }
}

impl GMat<num_bigint::BigInt> {
    pub fn try_to_int(&self) -> Result<IntMat> {
        let data = self
            .data
            .iter()
            .map(|x| x.to_i64().ok_or(Error::ResultTooLarge))
            .collect::<Result<Vec<_>>>()?;
        Ok(GMat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<S: Scalar + fmt::Display> fmt::Debug for GMat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Exact matrix product with `i128` accumulation.
pub fn mat_mul(a: &IntMat, b: &IntMat) -> Result<IntMat> {
    assert_eq!(
        a.cols(),
        b.rows(),
        "dimension mismatch in matrix product"
    );
    let mut out = IntMat::zeros(a.rows(), b.cols());
    let mut acc: Vec<i128> = vec![0; b.cols()];
    for r in 0..a.rows() {
        acc.iter_mut().for_each(|x| *x = 0);
        for k in 0..a.cols() {
            let av = *a.get(r, k);
            if av == 0 {
                continue;
            }
            let av = av as i128;
            let row = b.row(k);
            for (c, &bv) in row.iter().enumerate() {
                if bv != 0 {
                    acc[c] += av * bv as i128;
                }
            }
        }
        for c in 0..b.cols() {
            let v = i64::try_from(acc[c]).map_err(|_| Error::ResultTooLarge)?;
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// Exact matrix-vector product with `i128` accumulation.
pub fn mat_vec(a: &IntMat, v: &[i64]) -> Result<Vec<i64>> {
    assert_eq!(a.cols(), v.len(), "dimension mismatch in matrix-vector product");
    let mut out = Vec::with_capacity(a.rows());
    for r in 0..a.rows() {
        let mut acc: i128 = 0;
        for k in 0..a.cols() {
            acc += (*a.get(r, k) as i128) * (v[k] as i128);
        }
        out.push(i64::try_from(acc).map_err(|_| Error::ResultTooLarge)?);
    }
    Ok(out)
}

pub fn vec_add(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_add(y).ok_or(Error::ResultTooLarge))
        .collect()
}

pub fn vec_sub(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.checked_sub(y).ok_or(Error::ResultTooLarge))
        .collect()
}

pub fn vec_scale(a: &[i64], s: i64) -> Result<Vec<i64>> {
    a.iter()
        .map(|&x| x.checked_mul(s).ok_or(Error::ResultTooLarge))
        .collect()
}
