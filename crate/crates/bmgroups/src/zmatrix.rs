/*!
Exact linear algebra over the integers.

Everything downstream — shift groups, K-groups, abelianizations — reduces
to the same computation: present a finitely generated abelian group as the
cokernel of an integer matrix and read off its invariant factors from the
Smith normal form.  Matrices stay exact throughout: entries are
arbitrary-precision [`BigInt`]s, so no intermediate swell can overflow.

The reduction uses the classical pivoting scheme: repeatedly pick the
entry of smallest non-zero absolute value in the working submatrix, move
it to the pivot position, and clear its row and column by division with
remainder.  A final fix-up pass restores the divisibility chain
`d₁ | d₂ | …` by folding any offending entry into the pivot row.
*/

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Errors from integer-matrix computations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ZMatrixError {
    /// A vector had the wrong length for the matrix it was used with.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// An operation requiring a square matrix was applied to a non-square one.
    #[error("matrix is {rows}x{cols}, but a square matrix is required")]
    NotSquare { rows: usize, cols: usize },
}

/// A dense matrix over ℤ with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// The zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix entry by entry from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from machine-integer rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    /// The transposed matrix.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Horizontal concatenation `(left | right)`; row counts must agree.
    pub fn hstack(left: &Self, right: &Self) -> Self {
        assert_eq!(left.rows, right.rows, "row counts differ");
        Self::from_fn(left.rows, left.cols + right.cols, |i, j| {
            if j < left.cols {
                left.get(i, j).clone()
            } else {
                right.get(i, j - left.cols).clone()
            }
        })
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.get(i, k) * other.get(k, j);
            }
            acc
        })
    }

    /// Matrix–vector product `self · v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, ZMatrixError> {
        if v.len() != self.cols {
            return Err(ZMatrixError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc += self.get(i, j) * vj;
                }
                acc
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(k, v)| {
                if k / self.cols == k % self.cols {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
    }

    /// Entries on the main diagonal.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, ZMatrixError> {
        if self.rows != self.cols {
            return Err(ZMatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.data.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    a.set(i, j, &t / &prev);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        let det = a.get(n - 1, n - 1).clone();
        Ok(if sign < 0 { -det } else { det })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith normal form computation: `u · a · v = d` with
/// `u`, `v` unimodular and `d` diagonal, `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal of `d`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }

    /// Number of non-zero diagonal entries, i.e. the rank of the matrix.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith-reduction internals, scoped so the scalar abstraction cannot
/// shadow the numeric traits used by the rest of the module.
mod engine {
    use super::IntMatrix;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};

    /// Arithmetic the Smith reduction needs, abstracted so the same algorithm
    /// runs on checked machine integers and on [`BigInt`]s.
    ///
    /// Every mutating operation reports overflow by returning `None`; the
    /// [`BigInt`] implementation never does.  This keeps the fast path honest:
    /// an `i64` run either finishes exactly or is discarded wholesale.
    trait Scalar: Clone + Eq + Sized {
        fn from_bigint(v: &BigInt) -> Option<Self>;
        fn into_bigint(self) -> BigInt;
        fn zero() -> Self;
        fn one() -> Self;
        fn is_zero(&self) -> bool;
        fn is_negative(&self) -> bool;
        fn cmp_abs(&self, other: &Self) -> std::cmp::Ordering;
        /// The quotient minimising `|a - q·b|`.  Rounding to the nearest
        /// multiple (rather than truncating) halves the pivot per sweep, which
        /// keeps entry growth tame.
        fn nearest_quotient(a: &Self, b: &Self) -> Option<Self>;
        /// `self -= q · other`.
        fn sub_mul_assign(&mut self, q: &Self, other: &Self) -> Option<()>;
        /// `self += other`.
        fn add_assign_checked(&mut self, other: &Self) -> Option<()>;
        /// `self = -self`.
        fn neg_assign(&mut self) -> Option<()>;
        /// Whether `self` is an integer multiple of `other` (`other` non-zero).
        fn multiple_of(&self, other: &Self) -> bool;
    }

    impl Scalar for BigInt {
        fn from_bigint(v: &BigInt) -> Option<Self> {
            Some(v.clone())
        }

        fn into_bigint(self) -> BigInt {
            self
        }

        fn zero() -> Self {
            Zero::zero()
        }

        fn one() -> Self {
            One::one()
        }

        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }

        fn is_negative(&self) -> bool {
            Signed::is_negative(self)
        }

        fn cmp_abs(&self, other: &Self) -> std::cmp::Ordering {
            self.magnitude().cmp(other.magnitude())
        }

        fn nearest_quotient(a: &Self, b: &Self) -> Option<Self> {
            let (mut q, r) = a.div_rem(b);
            if &r + &r > b.abs() {
                q += if Signed::is_negative(b) { -1 } else { 1 };
            } else if &r + &r < -b.abs() {
                q += if Signed::is_negative(b) { 1 } else { -1 };
            }
            Some(q)
        }

        fn sub_mul_assign(&mut self, q: &Self, other: &Self) -> Option<()> {
            *self -= q * other;
            Some(())
        }

        fn add_assign_checked(&mut self, other: &Self) -> Option<()> {
            *self += other;
            Some(())
        }

        fn neg_assign(&mut self) -> Option<()> {
            *self = -std::mem::take(self);
            Some(())
        }

        fn multiple_of(&self, other: &Self) -> bool {
            Integer::is_multiple_of(self, other)
        }
    }

    impl Scalar for i64 {
        fn from_bigint(v: &BigInt) -> Option<Self> {
            i64::try_from(v).ok()
        }

        fn into_bigint(self) -> BigInt {
            BigInt::from(self)
        }

        fn zero() -> Self {
            0
        }

        fn one() -> Self {
            1
        }

        fn is_zero(&self) -> bool {
            *self == 0
        }

        fn is_negative(&self) -> bool {
            *self < 0
        }

        fn cmp_abs(&self, other: &Self) -> std::cmp::Ordering {
            self.unsigned_abs().cmp(&other.unsigned_abs())
        }

        fn nearest_quotient(a: &Self, b: &Self) -> Option<Self> {
            let (a, b) = (*a as i128, *b as i128);
            let mut q = a / b;
            let r = a - q * b;
            if 2 * r.abs() > b.abs() {
                q += if (r < 0) == (b < 0) { 1 } else { -1 };
            }
            i64::try_from(q).ok()
        }

        fn sub_mul_assign(&mut self, q: &Self, other: &Self) -> Option<()> {
            let t = (*self as i128) - (*q as i128) * (*other as i128);
            *self = i64::try_from(t).ok()?;
            Some(())
        }

        fn add_assign_checked(&mut self, other: &Self) -> Option<()> {
            *self = self.checked_add(*other)?;
            Some(())
        }

        fn neg_assign(&mut self) -> Option<()> {
            *self = self.checked_neg()?;
            Some(())
        }

        fn multiple_of(&self, other: &Self) -> bool {
            *other != 0 && (*self as i128) % (*other as i128) == 0
        }
    }

    /// Working state of one Smith reduction: the matrix being diagonalised and
    /// the optional transform accumulators, each a flat row-major buffer.
    struct SnfWork<T> {
        rows: usize,
        cols: usize,
        d: Vec<T>,
        u: Option<Vec<T>>,
        v: Option<Vec<T>>,
    }

    /// Mutable view of row `r1` together with a shared view of row `r2`.
    fn two_rows_mut<T>(data: &mut [T], cols: usize, r1: usize, r2: usize) -> (&mut [T], &[T]) {
        debug_assert_ne!(r1, r2);
        if r1 < r2 {
            let (lo, hi) = data.split_at_mut(r2 * cols);
            (&mut lo[r1 * cols..(r1 + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = data.split_at_mut(r1 * cols);
            (&mut hi[..cols], &lo[r2 * cols..(r2 + 1) * cols])
        }
    }

    impl<T: Scalar> SnfWork<T> {
        /// Converts the input; `None` when some entry does not fit the scalar.
        fn new(a: &IntMatrix, want_u: bool, want_v: bool) -> Option<Self> {
            let identity = |n: usize| {
                let mut m = vec![T::zero(); n * n];
                for i in 0..n {
                    m[i * n + i] = T::one();
                }
                m
            };
            Some(SnfWork {
                rows: a.rows,
                cols: a.cols,
                d: a.data
                    .iter()
                    .map(|e| T::from_bigint(e))
                    .collect::<Option<_>>()?,
                u: want_u.then(|| identity(a.rows)),
                v: want_v.then(|| identity(a.cols)),
            })
        }

        fn entry(&self, i: usize, j: usize) -> &T {
            &self.d[i * self.cols + j]
        }

        fn swap_rows(&mut self, r1: usize, r2: usize) {
            if r1 == r2 {
                return;
            }
            for j in 0..self.cols {
                self.d.swap(r1 * self.cols + j, r2 * self.cols + j);
            }
            if let Some(u) = self.u.as_mut() {
                for j in 0..self.rows {
                    u.swap(r1 * self.rows + j, r2 * self.rows + j);
                }
            }
        }

        fn swap_cols(&mut self, c1: usize, c2: usize) {
            if c1 == c2 {
                return;
            }
            for i in 0..self.rows {
                self.d.swap(i * self.cols + c1, i * self.cols + c2);
            }
            if let Some(v) = self.v.as_mut() {
                for i in 0..self.cols {
                    v.swap(i * self.cols + c1, i * self.cols + c2);
                }
            }
        }

        /// `row[r1] -= q · row[r2]`, on `d` from column `from` on and on all of `u`.
        fn row_sub(&mut self, r1: usize, r2: usize, q: &T, from: usize) -> Option<()> {
            if q.is_zero() {
                return Some(());
            }
            let (dst, src) = two_rows_mut(&mut self.d, self.cols, r1, r2);
            for j in from..self.cols {
                dst[j].sub_mul_assign(q, &src[j])?;
            }
            if let Some(u) = self.u.as_mut() {
                let (dst, src) = two_rows_mut(u, self.rows, r1, r2);
                for j in 0..self.rows {
                    dst[j].sub_mul_assign(q, &src[j])?;
                }
            }
            Some(())
        }

        /// `col[c1] -= q · col[c2]`, on `d` from row `from` on and on all of `v`.
        fn col_sub(&mut self, c1: usize, c2: usize, q: &T, from: usize) -> Option<()> {
            if q.is_zero() {
                return Some(());
            }
            for i in from..self.rows {
                let row = &mut self.d[i * self.cols..(i + 1) * self.cols];
                let (dst, src) = two_cells_mut(row, c1, c2);
                dst.sub_mul_assign(q, src)?;
            }
            if let Some(v) = self.v.as_mut() {
                for i in 0..self.cols {
                    let row = &mut v[i * self.cols..(i + 1) * self.cols];
                    let (dst, src) = two_cells_mut(row, c1, c2);
                    dst.sub_mul_assign(q, src)?;
                }
            }
            Some(())
        }

        /// `row[r1] += row[r2]`, on `d` from column `from` on and on all of `u`.
        fn add_row(&mut self, r1: usize, r2: usize, from: usize) -> Option<()> {
            let (dst, src) = two_rows_mut(&mut self.d, self.cols, r1, r2);
            for j in from..self.cols {
                dst[j].add_assign_checked(&src[j])?;
            }
            if let Some(u) = self.u.as_mut() {
                let (dst, src) = two_rows_mut(u, self.rows, r1, r2);
                for j in 0..self.rows {
                    dst[j].add_assign_checked(&src[j])?;
                }
            }
            Some(())
        }

        fn negate_row(&mut self, r: usize) -> Option<()> {
            for j in 0..self.cols {
                self.d[r * self.cols + j].neg_assign()?;
            }
            if let Some(u) = self.u.as_mut() {
                for j in 0..self.rows {
                    u[r * self.rows + j].neg_assign()?;
                }
            }
            Some(())
        }

        /// Runs the reduction; `None` means an `i64` overflow interrupted it.
        fn run(&mut self) -> Option<()> {
            let (rows, cols) = (self.rows, self.cols);
            for k in 0..rows.min(cols) {
                // Entry of smallest non-zero absolute value at or beyond (k, k);
                // ties break row-major.  If none is left, we are done.
                let pivot = (k..rows)
                    .flat_map(|i| (k..cols).map(move |j| (i, j)))
                    .filter(|&(i, j)| !self.entry(i, j).is_zero())
                    .min_by(|&(i1, j1), &(i2, j2)| self.entry(i1, j1).cmp_abs(self.entry(i2, j2)));
                let Some((pi, pj)) = pivot else { break };
                self.swap_rows(k, pi);
                self.swap_cols(k, pj);

                loop {
                    let mut dirty = false;
                    // Clear column k below the pivot.
                    for i in k + 1..rows {
                        if self.entry(i, k).is_zero() {
                            continue;
                        }
                        let q = T::nearest_quotient(self.entry(i, k), self.entry(k, k))?;
                        self.row_sub(i, k, &q, k)?;
                        if !self.entry(i, k).is_zero() {
                            // Remainder strictly smaller than the pivot: adopt it.
                            self.swap_rows(k, i);
                            dirty = true;
                        }
                    }
                    // Clear row k right of the pivot.
                    for j in k + 1..cols {
                        if self.entry(k, j).is_zero() {
                            continue;
                        }
                        let q = T::nearest_quotient(self.entry(k, j), self.entry(k, k))?;
                        self.col_sub(j, k, &q, k)?;
                        if !self.entry(k, j).is_zero() {
                            self.swap_cols(k, j);
                            dirty = true;
                        }
                    }
                    if dirty {
                        continue;
                    }
                    // Row and column are clear.  Enforce the divisibility chain:
                    // the pivot must divide every remaining entry; if some entry
                    // resists, fold its row into row k and keep reducing.
                    let offender = (k + 1..rows)
                        .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                        .find(|&(i, j)| !self.entry(i, j).multiple_of(self.entry(k, k)));
                    match offender {
                        Some((i, _)) => self.add_row(k, i, k)?,
                        None => break,
                    }
                }

                if self.entry(k, k).is_negative() {
                    self.negate_row(k)?;
                }
            }
            Some(())
        }

        fn into_matrices(self) -> (Option<IntMatrix>, IntMatrix, Option<IntMatrix>) {
            let pack = |data: Vec<T>, rows: usize, cols: usize| IntMatrix {
                rows,
                cols,
                data: data.into_iter().map(T::into_bigint).collect(),
            };
            (
                self.u.map(|u| pack(u, self.rows, self.rows)),
                pack(self.d, self.rows, self.cols),
                self.v.map(|v| pack(v, self.cols, self.cols)),
            )
        }
    }

    /// Mutable view of `row[c1]` together with a shared view of `row[c2]`.
    fn two_cells_mut<T>(row: &mut [T], c1: usize, c2: usize) -> (&mut T, &T) {
        debug_assert_ne!(c1, c2);
        if c1 < c2 {
            let (lo, hi) = row.split_at_mut(c2);
            (&mut lo[c1], &hi[0])
        } else {
            let (lo, hi) = row.split_at_mut(c1);
            (&mut hi[0], &lo[c2])
        }
    }

    /// Core Smith reduction.  Transform tracking is optional because the two
    /// big consumers differ: cokernels need neither transform, element-order
    /// computations need `u` only.
    ///
    /// Runs with checked `i64` arithmetic first and falls back to `BigInt` if
    /// any input entry or intermediate value overflows.
    pub(super) fn smith_engine(
        a: &IntMatrix,
        want_u: bool,
        want_v: bool,
    ) -> (Option<IntMatrix>, IntMatrix, Option<IntMatrix>) {
        if let Some(mut work) = SnfWork::<i64>::new(a, want_u, want_v) {
            if work.run().is_some() {
                return work.into_matrices();
            }
        }
        let mut work =
            SnfWork::<BigInt>::new(a, want_u, want_v).expect("BigInt conversion is total");
        work.run().expect("BigInt arithmetic does not overflow");
        work.into_matrices()
    }
}

/// Smith normal form with both transforms: `u · a · v = d`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (u, d, v) = engine::smith_engine(a, true, true);
    SmithDecomposition {
        u: u.unwrap(),
        d,
        v: v.unwrap(),
    }
}

/// Diagonal of the Smith form only, skipping transform bookkeeping.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    engine::smith_engine(a, false, false).1.diagonal()
}

/// A finitely generated abelian group `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/dₖ` in
/// invariant-factor form: `d₁ | d₂ | … | dₖ`, all `dᵢ > 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    rank: usize,
    factors: Vec<BigInt>,
}

impl AbelianGroup {
    /// The trivial group.
    pub fn trivial() -> Self {
        AbelianGroup {
            rank: 0,
            factors: Vec::new(),
        }
    }

    /// Free abelian group of the given rank.
    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            factors: Vec::new(),
        }
    }

    /// Builds a group from any list of cyclic orders (`0` meaning ℤ),
    /// regrouping them into the invariant-factor chain.
    pub fn from_cyclic_orders<I>(orders: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        let mut rank = 0usize;
        // One bucket per prime: the multiset of exponents appearing in the
        // primary decomposition.
        let mut primary: Vec<(BigInt, Vec<u32>)> = Vec::new();
        for order in orders {
            let order: BigInt = order.into();
            let order = order.abs();
            if order.is_zero() {
                rank += 1;
                continue;
            }
            if order.is_one() {
                continue;
            }
            for (p, e) in factorize(&order) {
                match primary.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, exps)) => exps.push(e),
                    None => primary.push((p, vec![e])),
                }
            }
        }
        // The k-th largest exponents across all primes combine into the
        // k-th largest invariant factor.
        for (_, exps) in primary.iter_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        let depth = primary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<BigInt> = (0..depth)
            .map(|k| {
                primary
                    .iter()
                    .filter_map(|(p, exps)| exps.get(k).map(|&e| p.pow(e)))
                    .product()
            })
            .collect();
        factors.reverse();
        AbelianGroup { rank, factors }
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The invariant factors `d₁ | d₂ | …`, each `> 1`, in ascending order.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.factors.iter().product()
    }

    /// Direct sum of two groups.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders = self.factors.iter().chain(&other.factors).cloned();
        let mut g = Self::from_cyclic_orders(orders);
        g.rank = self.rank + other.rank;
        g
    }

    /// The multiset of prime powers `p^e` whose direct sum gives the torsion
    /// part, sorted by prime and then by exponent.
    pub fn primary_decomposition(&self) -> Vec<(BigInt, u32)> {
        let mut parts: Vec<(BigInt, u32)> = self.factors.iter().flat_map(factorize).collect();
        parts.sort();
        parts
    }

    /// Compact census notation `rank[q₁,q₂,…]`: rank followed by the primary
    /// decomposition, a run of `j` equal prime powers `q` abbreviated `(j)q`.
    ///
    /// `ℤ⊕ℤ⊕ℤ/4⊕ℤ/4` renders as `2[(2)4]`, the trivial group as `0[]`.
    pub fn census_notation(&self) -> String {
        let mut out = format!("{}[", self.rank);
        let parts = self.primary_decomposition();
        let mut i = 0;
        let mut first = true;
        while i < parts.len() {
            let mut j = i + 1;
            while j < parts.len() && parts[j] == parts[i] {
                j += 1;
            }
            if !first {
                out.push(',');
            }
            first = false;
            let q = parts[i].0.pow(parts[i].1);
            if j - i > 1 {
                out.push_str(&format!("({}){}", j - i, q));
            } else {
                out.push_str(&q.to_string());
            }
            i = j;
        }
        out.push(']');
        out
    }

    /// Parses [`census_notation`](Self::census_notation) output back into a
    /// group, accepting any order of prime powers inside the brackets.
    pub fn parse_census_notation(s: &str) -> Option<Self> {
        let s = s.trim();
        let open = s.find('[')?;
        if !s.ends_with(']') {
            return None;
        }
        let rank: usize = s[..open].parse().ok()?;
        let inner = &s[open + 1..s.len() - 1];
        let mut orders: Vec<BigInt> = Vec::new();
        for item in inner.split(',').map(str::trim) {
            if item.is_empty() {
                continue;
            }
            let (count, value) = match item.strip_prefix('(') {
                Some(rest) => {
                    let close = rest.find(')')?;
                    (
                        rest[..close].parse::<usize>().ok()?,
                        rest[close + 1..].parse::<i64>().ok()?,
                    )
                }
                None => (1, item.parse::<i64>().ok()?),
            };
            if value < 2 {
                return None;
            }
            orders.extend(std::iter::repeat_n(BigInt::from(value), count));
        }
        let mut g = Self::from_cyclic_orders(orders);
        g.rank = rank;
        Some(g)
    }
}

impl fmt::Display for AbelianGroup {
    /// Invariant-factor rendering, e.g. `Z^2 + Z/4 + Z/4`; `0` if trivial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

/// Prime factorization by trial division: `n = ∏ pᵢ^eᵢ` with the primes
/// ascending.  Fine at this crate's scale, where torsion orders are small.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    assert!(!n.is_zero(), "cannot factorize 0");
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            let mut e = 0u32;
            while n.is_multiple_of(&p) {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// The cokernel `ℤ^rows / im(a)` as an abstract abelian group.
pub fn cokernel(a: &IntMatrix) -> AbelianGroup {
    let diag = smith_diagonal(a);
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let rank = a.rows() - nonzero;
    let mut g = AbelianGroup::from_cyclic_orders(diag.into_iter().filter(|d| !d.is_zero()));
    g.rank = rank;
    g
}

/// Order of an element of a cokernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(BigInt),
    Infinite,
}

impl ElementOrder {
    /// The order as an integer, if finite.
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            ElementOrder::Finite(k) => Some(k),
            ElementOrder::Infinite => None,
        }
    }
}

/// Order of `v + im(a)` in `ℤ^rows / im(a)`.
///
/// With `u·a·v = d`, the coordinate change `w = u·v` diagonalises the
/// quotient: the class of `v` has infinite order iff `w` is non-zero in a
/// coordinate with zero diagonal entry, and otherwise has order
/// `lcmᵢ dᵢ/gcd(dᵢ, wᵢ)`.
pub fn element_order_in_cokernel(
    a: &IntMatrix,
    v: &[BigInt],
) -> Result<ElementOrder, ZMatrixError> {
    if v.len() != a.rows() {
        return Err(ZMatrixError::DimensionMismatch {
            expected: a.rows(),
            got: v.len(),
        });
    }
    let (u, d, _) = engine::smith_engine(a, true, false);
    let w = u.unwrap().mul_vec(v)?;
    let mut order = BigInt::one();
    for (i, wi) in w.iter().enumerate() {
        let di = if i < d.cols() {
            d.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if di.is_zero() {
            if !wi.is_zero() {
                return Ok(ElementOrder::Infinite);
            }
            continue;
        }
        let k = &di / di.gcd(wi);
        order = order.lcm(&k);
    }
    Ok(ElementOrder::Finite(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(rank: usize, factors: &[i64]) -> AbelianGroup {
        let mut g = AbelianGroup::from_cyclic_orders(factors.iter().copied());
        assert_eq!(
            g.invariant_factors(),
            factors
                .iter()
                .map(|&f| BigInt::from(f))
                .collect::<Vec<_>>()
                .as_slice(),
            "test input must already be an invariant-factor chain"
        );
        g.rank = rank;
        g
    }

    #[test]
    fn smith_form_of_small_matrix() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn smith_form_zero_and_identity() {
        let z = IntMatrix::zeros(3, 2);
        assert_eq!(smith_diagonal(&z), vec![BigInt::zero(), BigInt::zero()]);
        let i = IntMatrix::identity(4);
        assert!(smith_diagonal(&i).iter().all(BigInt::is_one));
    }

    #[test]
    fn cokernel_reads_rank_and_torsion() {
        // diag(2, 0) ⊂ ℤ²: quotient ℤ ⊕ ℤ/2.
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]);
        let g = cokernel(&a);
        assert_eq!(g.rank(), 1);
        assert_eq!(g.invariant_factors(), &[BigInt::from(2)]);
    }

    #[test]
    fn element_order_basics() {
        let a = IntMatrix::from_rows(&[vec![4]]);
        let v = vec![BigInt::from(2)];
        assert_eq!(
            element_order_in_cokernel(&a, &v).unwrap(),
            ElementOrder::Finite(BigInt::from(2))
        );
        // coker(diag(0)) = ℤ: any non-zero class has infinite order.
        let z = IntMatrix::zeros(1, 1);
        assert_eq!(
            element_order_in_cokernel(&z, &v).unwrap(),
            ElementOrder::Infinite
        );
        assert_eq!(
            element_order_in_cokernel(&a, &[BigInt::zero(), BigInt::zero()]),
            Err(ZMatrixError::DimensionMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn cyclic_order_regrouping() {
        // ℤ/6 ⊕ ℤ/4 = ℤ/2 ⊕ ℤ/12.
        let g = AbelianGroup::from_cyclic_orders([6, 4]);
        assert_eq!(g.invariant_factors(), &[BigInt::from(2), BigInt::from(12)]);
        // ℤ/2 ⊕ ℤ/3 = ℤ/6.
        let g = AbelianGroup::from_cyclic_orders([2, 3]);
        assert_eq!(g.invariant_factors(), &[BigInt::from(6)]);
    }

    #[test]
    fn primary_decomposition_splits_factors() {
        let g = group(0, &[6, 6]);
        let parts = g.primary_decomposition();
        let expect = vec![
            (BigInt::from(2), 1),
            (BigInt::from(2), 1),
            (BigInt::from(3), 1),
            (BigInt::from(3), 1),
        ];
        assert_eq!(parts, expect);
        let g = group(0, &[12]);
        assert_eq!(
            g.primary_decomposition(),
            vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]
        );
    }

    #[test]
    fn census_notation_round_trips() {
        let cases = [
            (group(2, &[4, 4]), "2[(2)4]"),
            (group(0, &[2, 2, 12]), "0[(2)2,4,3]"),
            (group(4, &[]), "4[]"),
            (group(0, &[2, 4, 4, 12]), "0[2,(3)4,3]"),
        ];
        for (g, s) in cases {
            assert_eq!(g.census_notation(), s);
            assert_eq!(AbelianGroup::parse_census_notation(s).unwrap(), g);
        }
    }

    #[test]
    fn display_uses_invariant_factors() {
        assert_eq!(group(2, &[4, 4]).to_string(), "Z^2 + Z/4 + Z/4");
        assert_eq!(group(0, &[]).to_string(), "0");
        assert_eq!(group(1, &[2]).to_string(), "Z + Z/2");
    }

    #[test]
    fn direct_sum_regroups() {
        let a = group(1, &[4]);
        let b = group(2, &[6]);
        let s = a.direct_sum(&b);
        assert_eq!(s.rank(), 3);
        assert_eq!(s.invariant_factors(), &[BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(-3));
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.determinant().unwrap(), BigInt::zero());
        assert!(IntMatrix::zeros(2, 3).determinant().is_err());
    }
}
