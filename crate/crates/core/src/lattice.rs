//! Exact integer linear algebra over the lattices `N` and `M`.
//!
//! Everything here works with arbitrary precision integers. Rationals only
//! appear as [`BigRational`] coordinates when testing cone membership of
//! non-lattice points.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("vector {0} is not primitive")]
    NotPrimitive(LatticeVector),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A point of `Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        LatticeVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rational(&self, x: &[BigRational]) -> BigRational {
        debug_assert_eq!(self.rank(), x.len());
        self.0
            .iter()
            .zip(x)
            .map(|(a, b)| b * BigRational::from_integer(a.clone()))
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Gcd of the entries (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> Result<bool, LatticeError> {
        if self.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        Ok(self.content().is_one())
    }

    /// The primitive lattice vector on the ray through `self`.
    pub fn primitive(&self) -> Result<LatticeVector, LatticeError> {
        if self.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        let g = self.content();
        Ok(LatticeVector(self.0.iter().map(|x| x / &g).collect()))
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    }

    /// Clears denominators of a rational vector and returns the primitive
    /// integer vector with the same direction.
    pub fn from_rational_direction(x: &[BigRational]) -> Result<LatticeVector, LatticeError> {
        let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let v = LatticeVector(x.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect());
        v.primitive()
    }

    /// Appends a coordinate, embedding `Z^n` into `Z^{n+1}`.
    pub fn extended(&self, last: BigInt) -> LatticeVector {
        let mut e = self.0.clone();
        e.push(last);
        LatticeVector(e)
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl LatticeMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LatticeMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors. `cols` is only used
    /// when `rows` is empty.
    pub fn from_rows(rows: &[LatticeVector], cols: usize) -> Self {
        let cols = rows.first().map_or(cols, LatticeVector::rank);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.rank(), cols, "ragged rows");
            data.extend(r.entries().iter().cloned());
        }
        LatticeMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let v: Vec<_> = rows.iter().map(|r| LatticeVector::from_i64s(r)).collect();
        Self::from_rows(&v, 0)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn rows(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> LatticeMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &LatticeMatrix) -> LatticeMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.rank());
        LatticeVector((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.rows().into_iter().map(LatticeVector::into_entries).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.rows(), self.cols)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = k * self.get(src, j);
            self.data[dst * self.cols + j] += t;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = k * self.get(i, src);
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Debug for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`.
///
/// The inverses of the transforms are tracked alongside so callers never
/// have to invert a unimodular matrix.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: LatticeMatrix,
    pub d: LatticeMatrix,
    pub v: LatticeMatrix,
    pub u_inv: LatticeMatrix,
    pub v_inv: LatticeMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with deterministic pivoting: the pivot is taken from the
/// leftmost column with a nonzero entry, choosing the entry of smallest
/// absolute value (first row on ties).
pub fn smith_normal_form(m: &LatticeMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = LatticeMatrix::identity(r);
    let mut u_inv = LatticeMatrix::identity(r);
    let mut v = LatticeMatrix::identity(c);
    let mut v_inv = LatticeMatrix::identity(c);

    // Row operation on `a`, mirrored in u (left) and u_inv (right, inverse).
    macro_rules! row_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            let k: BigInt = $k;
            a.add_row($dst, $src, &k);
            u.add_row($dst, $src, &k);
            u_inv.add_col($src, $dst, &(-&k));
        }};
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            let k: BigInt = $k;
            a.add_col($dst, $src, &k);
            v.add_col($dst, $src, &k);
            v_inv.add_row($src, $dst, &(-&k));
        }};
    }
    macro_rules! row_swap {
        ($x:expr, $y:expr) => {{
            a.swap_rows($x, $y);
            u.swap_rows($x, $y);
            u_inv.swap_cols($x, $y);
        }};
    }
    macro_rules! col_swap {
        ($x:expr, $y:expr) => {{
            a.swap_cols($x, $y);
            v.swap_cols($x, $y);
            v_inv.swap_rows($x, $y);
        }};
    }

    for t in 0..r.min(c) {
        // Pivot choice.
        let mut pivot: Option<(usize, usize)> = None;
        'cols: for j in t..c {
            for i in t..r {
                if a.get(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    Some((pi, pj)) if a.get(pi, pj).abs() <= a.get(i, j).abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
            if pivot.is_some() {
                break 'cols;
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap!(t, pi);
        col_swap!(t, pj);

        loop {
            // Clear column t below the pivot.
            let mut dirty = false;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                row_add!(i, t, -q);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                col_add!(j, t, -q);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remainder in row/column t onto the pivot.
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    row_swap!(t, best.0);
                } else if best.1 != t {
                    col_swap!(t, best.1);
                }
                continue;
            }
            // Divisibility condition on the trailing block.
            let p = a.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => row_add!(t, i, BigInt::one()),
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }

    SmithForm { u, d: a, v, u_inv, v_inv }
}

/// Basis of the integer kernel `{x in Z^n : m x = 0}`.
pub fn integer_kernel(m: &LatticeMatrix) -> Vec<LatticeVector> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols).map(|j| snf.v.col(j)).collect()
}

/// One integral solution of `m x = b`, or `None` if there is none.
///
/// Free coordinates (in Smith coordinates) are set to zero, so the answer is
/// deterministic.
pub fn solve_integer(m: &LatticeMatrix, b: &LatticeVector) -> Option<LatticeVector> {
    assert_eq!(m.rows, b.rank());
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let factors = snf.invariant_factors();
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, d) in factors.iter().enumerate() {
        let (q, rem) = ub[i].div_rem(d);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    if (factors.len()..m.rows).any(|i| !ub[i].is_zero()) {
        return None;
    }
    Some(snf.v.mul_vec(&LatticeVector(y)))
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is the unique echelon basis with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`; zero rows are dropped.
pub fn hermite_normal_form(rows: &[LatticeVector], cols: usize) -> Vec<LatticeVector> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut out_rows = 0usize;
    for j in 0..cols {
        // Euclid on column j among rows out_rows..
        loop {
            let mut best: Option<usize> = None;
            for i in out_rows..a.len() {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.map_or(true, |b| a[i][j].abs() < a[b][j].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(out_rows, b);
            let mut done = true;
            for i in out_rows + 1..a.len() {
                if a[i][j].is_zero() {
                    continue;
                }
                let q = a[i][j].div_floor(&a[out_rows][j]);
                let pivot_row = a[out_rows].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !a[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if out_rows < a.len() && !a[out_rows][j].is_zero() {
            if a[out_rows][j].is_negative() {
                for x in a[out_rows].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = a[out_rows].clone();
            for i in 0..out_rows {
                let q = a[i][j].div_floor(&pivot_row[j]);
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
            }
            out_rows += 1;
        }
    }
    a.truncate(out_rows);
    a.into_iter().map(LatticeVector).collect()
}

/// Rank over `Q` of the given rows.
pub fn rational_rank(rows: &[LatticeVector], cols: usize) -> usize {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for r in rows {
        let mut v = r.to_rational();
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let k = &v[*p] / &b[*p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &k * y;
                }
            }
        }
        if let Some(p) = (0..cols).find(|&j| !v[j].is_zero()) {
            basis.push((p, v));
        }
    }
    basis.len()
}

/// Coordinates of `x` in terms of linearly independent `basis`, if `x` lies in
/// their rational span.
pub fn rational_coordinates(basis: &[LatticeVector], x: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = x.len();
    let k = basis.len();
    // Augmented system: columns are basis vectors, rhs x. Solve by Gauss-Jordan.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                basis.iter().map(|b| BigRational::from_integer(b[i].clone())).collect();
            row.push(x[i].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if (r..n).any(|i| !rows[i][k].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); k];
    for (i, &c) in pivot_cols.iter().enumerate() {
        out[c] = rows[i][k].clone();
    }
    Some(out)
}

/// The quotient `N -> N / Z a` for a primitive `a`, presented with an explicit
/// projection matrix and a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLattice {
    action: LatticeVector,
    projection: LatticeMatrix,
    section: LatticeMatrix,
}

impl QuotientLattice {
    pub fn source_rank(&self) -> usize {
        self.action.rank()
    }

    pub fn target_rank(&self) -> usize {
        self.projection.nrows()
    }

    pub fn action(&self) -> &LatticeVector {
        &self.action
    }

    pub fn projection(&self) -> &LatticeMatrix {
        &self.projection
    }

    pub fn section(&self) -> &LatticeMatrix {
        &self.section
    }

    pub fn project(&self, v: &LatticeVector) -> LatticeVector {
        self.projection.mul_vec(v)
    }

    pub fn lift(&self, w: &LatticeVector) -> LatticeVector {
        self.section.mul_vec(w)
    }
}

/// Builds the quotient by the line through `a`.
///
/// The projection rows are the Hermite normal form of the lattice `a^⊥ ∩ M`,
/// which makes the choice canonical (for `a = e_n` it drops the last
/// coordinate).
pub fn quotient_by(a: &LatticeVector) -> Result<QuotientLattice, LatticeError> {
    if !a.is_primitive()? {
        return Err(LatticeError::NotPrimitive(a.clone()));
    }
    let n = a.rank();
    let row = LatticeMatrix::from_rows(std::slice::from_ref(a), n);
    let kernel = integer_kernel(&row);
    let projection = LatticeMatrix::from_rows(&hermite_normal_form(&kernel, n), n);
    debug_assert_eq!(projection.nrows(), n - 1);
    // A right inverse from the Smith form: p = u_inv [I 0] v_inv.
    let snf = smith_normal_form(&projection);
    let mut pad = LatticeMatrix::zeros(n, n - 1);
    for i in 0..n - 1 {
        pad.set(i, i, BigInt::one());
    }
    let section = snf.v.mul(&pad).mul(&snf.u);
    Ok(QuotientLattice { action: a.clone(), projection, section })
}
