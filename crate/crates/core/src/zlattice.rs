//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Lattices are presented by their generators as matrix *columns*; the Hermite
//! form is the column form `M·U = H` with `U` unimodular.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;
use crate::serde_int;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Self { rows: rows.len(), cols, entries }
    }

    /// Builds a `rows × columns.len()` matrix from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `M·x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if x.len() != self.cols {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `uᵀ·M`.
    pub fn left_mul_vec(&self, u: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if u.len() != self.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.rows, got: u.len() });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.row(i)) {
                *o += ui * v;
            }
        }
        Ok(out)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.entries[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// `col_dst -= q·col_src`.
    fn col_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + src];
            if !s.is_zero() {
                let d = s * q;
                self.entries[i * self.cols + dst] -= d;
            }
        }
    }

    /// `row_dst -= q·row_src`.
    fn row_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.entries[src * self.cols + j];
            if !s.is_zero() {
                let d = s * q;
                self.entries[dst * self.cols + j] -= d;
            }
        }
    }

    /// Replaces columns `(a, b)` with `(a·p + b·q, a·r + b·s)`.
    fn col_combine(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for i in 0..self.rows {
            let x = &self.entries[i * self.cols + a];
            let y = &self.entries[i * self.cols + b];
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let na = x * p + y * q;
            let nb = x * r + y * s;
            self.entries[i * self.cols + a] = na;
            self.entries[i * self.cols + b] = nb;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Column Hermite normal form `M·U = H`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, column)` of each pivot, in column order. Pivot columns are `0..rank`.
    pub pivots: Vec<(usize, usize)>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hnf(m: &IntMatrix) -> HermiteForm {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut pivots = Vec::new();
    let mut k = 0;
    for r in 0..m.rows {
        if k == m.cols {
            break;
        }
        for j in k + 1..m.cols {
            if h[(r, j)].is_zero() {
                continue;
            }
            let a = h[(r, k)].clone();
            let b = h[(r, j)].clone();
            let egcd = a.extended_gcd(&b);
            let (g, x, y) = (egcd.gcd, egcd.x, egcd.y);
            let bg = -(&b / &g);
            let ag = &a / &g;
            // [x  −b/g; y  a/g] has determinant 1
            h.col_combine(k, j, &x, &y, &bg, &ag);
            u.col_combine(k, j, &x, &y, &bg, &ag);
        }
        if h[(r, k)].is_zero() {
            continue;
        }
        if h[(r, k)].is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        let pivot = h[(r, k)].clone();
        for j in 0..k {
            let q = h[(r, j)].div_floor(&pivot);
            h.col_axpy(j, &q, k);
            u.col_axpy(j, &q, k);
        }
        pivots.push((r, k));
        k += 1;
    }
    HermiteForm { h, u, pivots }
}

/// Invariant factors `d_1 | d_2 | …`, length `min(rows, cols)`, zeros last.
pub fn snf_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = smallest_nonzero(&a, t, t..a.rows, t..a.cols) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let p = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..a.rows {
                if !a[(i, t)].is_zero() {
                    let q = a[(i, t)].div_floor(&p);
                    a.row_axpy(i, &q, t);
                    dirty |= !a[(i, t)].is_zero();
                }
            }
            for j in t + 1..a.cols {
                if !a[(t, j)].is_zero() {
                    let q = a[(t, j)].div_floor(&p);
                    a.col_axpy(j, &q, t);
                    dirty |= !a[(t, j)].is_zero();
                }
            }
            if dirty {
                // a smaller remainder sits in row t or column t
                let in_col = smallest_nonzero(&a, t, t..a.rows, t..t + 1);
                let in_row = smallest_nonzero(&a, t, t..t + 1, t..a.cols);
                let best = [in_col, in_row]
                    .into_iter()
                    .flatten()
                    .min_by(|x, y| a[*x].abs().cmp(&a[*y].abs()))
                    .expect("dirty implies a nonzero entry");
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                continue;
            }
            let bad = (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => a.row_axpy(t, &-BigInt::one(), i),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a[(t, t)] = -a[(t, t)].clone();
        }
        t += 1;
    }
    (0..n).map(|i| a[(i, i)].clone()).collect()
}

fn smallest_nonzero(
    a: &IntMatrix,
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|b| v.abs() < a[b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(m: &IntMatrix) -> Result<BigInt, LatticeError> {
    if m.rows != m.cols {
        return Err(LatticeError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// A rational number in lowest terms, for certificate payloads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalValue {
    #[serde(with = "serde_int::int")]
    pub num: BigInt,
    #[serde(with = "serde_int::int")]
    pub den: BigInt,
}

impl From<&BigRational> for RationalValue {
    fn from(q: &BigRational) -> Self {
        Self { num: q.numer().clone(), den: q.denom().clone() }
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Outcome of `M·x = b` over the integers. Each non-solution alternative carries
/// a certificate that can be checked against `M` and `b` alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SolveOutcome {
    Solution {
        #[serde(with = "serde_int::int_vec")]
        x: Vec<BigInt>,
    },
    /// `uᵀM = 0` while `uᵀb ≠ 0`: no rational solution exists.
    RationalInfeasible {
        #[serde(with = "serde_int::int_vec")]
        u: Vec<BigInt>,
    },
    /// The rational solution has non-integral Hermite coordinate `value` at
    /// pivot `pivot` (matrix row `row`). The pair `(z, modulus)` is the
    /// corresponding integer certificate: `zᵀM ≡ 0` and `zᵀb ≢ 0 (mod modulus)`.
    NonIntegral {
        pivot: usize,
        row: usize,
        value: RationalValue,
        #[serde(with = "serde_int::int_vec")]
        z: Vec<BigInt>,
        #[serde(with = "serde_int::int")]
        modulus: BigInt,
    },
}

impl SolveOutcome {
    pub fn is_solution(&self) -> bool {
        matches!(self, SolveOutcome::Solution { .. })
    }

    /// Checks the alternative's invariant against `M` and `b` using only
    /// matrix-vector products.
    pub fn verify(&self, m: &IntMatrix, b: &[BigInt]) -> Result<(), String> {
        if b.len() != m.rows {
            return Err(format!("b has length {}, matrix has {} rows", b.len(), m.rows));
        }
        match self {
            SolveOutcome::Solution { x } => {
                let mx = m.mul_vec(x).map_err(|e| e.to_string())?;
                if mx != b {
                    return Err("M·x differs from b".into());
                }
            }
            SolveOutcome::RationalInfeasible { u } => {
                let um = m.left_mul_vec(u).map_err(|e| e.to_string())?;
                if !um.iter().all(Zero::is_zero) {
                    return Err("uᵀM is not zero".into());
                }
                if dot(u, b).is_zero() {
                    return Err("uᵀb is zero".into());
                }
            }
            SolveOutcome::NonIntegral { value, z, modulus, .. } => {
                if *modulus <= BigInt::one() {
                    return Err("certificate modulus must exceed 1".into());
                }
                if value.den.is_one() {
                    return Err("witness value is integral".into());
                }
                let zm = m.left_mul_vec(z).map_err(|e| e.to_string())?;
                if !zm.iter().all(|v| v.is_multiple_of(modulus)) {
                    return Err("zᵀM is not divisible by the modulus".into());
                }
                if dot(z, b).is_multiple_of(modulus) {
                    return Err("zᵀb is divisible by the modulus".into());
                }
            }
        }
        Ok(())
    }
}

/// Decides `M·x = b` over `Z` through the Hermite form of `M`.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<SolveOutcome, LatticeError> {
    solve_with_hermite(m, &hnf(m), b)
}

/// As [`solve_integer`], reusing a precomputed Hermite form of `m`.
pub fn solve_with_hermite(m: &IntMatrix, form: &HermiteForm, b: &[BigInt]) -> Result<SolveOutcome, LatticeError> {
    if b.len() != m.rows {
        return Err(LatticeError::DimensionMismatch { expected: m.rows, got: b.len() });
    }
    let h = &form.h;
    let pivots = &form.pivots;
    let mut y: Vec<BigRational> = Vec::with_capacity(pivots.len());
    let mut next = 0;
    let mut infeasible_row = None;
    for i in 0..m.rows {
        // only columns whose pivot row is ≤ i are nonzero in row i
        let mut acc = BigRational::from_integer(b[i].clone());
        for (k, yk) in y.iter().enumerate() {
            let c = &h[(i, k)];
            if !c.is_zero() {
                acc -= yk * BigRational::from_integer(c.clone());
            }
        }
        if next < pivots.len() && pivots[next].0 == i {
            y.push(acc / BigRational::from_integer(h[(i, next)].clone()));
            next += 1;
        } else if !acc.is_zero() {
            infeasible_row = Some(i);
            break;
        }
    }

    let outcome = if let Some(row) = infeasible_row {
        SolveOutcome::RationalInfeasible { u: left_kernel_witness(h, pivots, row) }
    } else if let Some(k) = y.iter().position(|v| !v.is_integer()) {
        let (z, modulus) = integrality_witness(h, pivots, k);
        SolveOutcome::NonIntegral { pivot: k, row: pivots[k].0, value: RationalValue::from(&y[k]), z, modulus }
    } else {
        let mut coords = vec![BigInt::zero(); m.cols];
        for (c, v) in coords.iter_mut().zip(&y) {
            *c = v.to_integer();
        }
        SolveOutcome::Solution { x: form.u.mul_vec(&coords)? }
    };
    outcome.verify(m, b).map_err(LatticeError::CertificateFailed)?;
    Ok(outcome)
}

/// `u` with `uᵀH = 0` and `u_row = 1` (before clearing denominators), supported on
/// `row` and the pivot rows above it.
fn left_kernel_witness(h: &IntMatrix, pivots: &[(usize, usize)], row: usize) -> Vec<BigInt> {
    let above: Vec<usize> = pivots.iter().take_while(|(r, _)| *r < row).map(|(r, _)| *r).collect();
    let mut w = vec![BigRational::zero(); h.rows];
    w[row] = BigRational::one();
    for k in (0..above.len()).rev() {
        let mut s = BigRational::from_integer(h[(row, k)].clone());
        for &pr in above.iter().skip(k + 1) {
            s += &w[pr] * BigRational::from_integer(h[(pr, k)].clone());
        }
        w[above[k]] = -s / BigRational::from_integer(h[(above[k], k)].clone());
    }
    clear_denominators(&w).0
}

/// Row `k` of the inverse of the pivot block of `H`, scattered onto pivot rows,
/// as `(z, d)` with the rational row equal to `z / d`.
fn integrality_witness(h: &IntMatrix, pivots: &[(usize, usize)], k: usize) -> (Vec<BigInt>, BigInt) {
    let mut w = vec![BigRational::zero(); k + 1];
    w[k] = BigRational::new(BigInt::one(), h[(pivots[k].0, k)].clone());
    for c in (0..k).rev() {
        let mut s = BigRational::zero();
        for (j, wj) in w.iter().enumerate().skip(c + 1) {
            s += wj * BigRational::from_integer(h[(pivots[j].0, c)].clone());
        }
        w[c] = -s / BigRational::from_integer(h[(pivots[c].0, c)].clone());
    }
    let mut full = vec![BigRational::zero(); h.rows];
    for (j, wj) in w.into_iter().enumerate() {
        full[pivots[j].0] = wj;
    }
    let (mut z, d) = clear_denominators(&full);
    for v in z.iter_mut() {
        *v = v.mod_floor(&d);
    }
    (z, d)
}

/// Scales a rational vector to a primitive integer vector; returns it with the
/// common denominator that was cleared.
fn clear_denominators(w: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = w.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = w.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    (ints, den)
}

/// Rank as the number of Hermite pivots.
pub fn rank(m: &IntMatrix) -> usize {
    hnf(m).rank()
}
