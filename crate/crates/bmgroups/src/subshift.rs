/*!
The two-dimensional subshift attached to a datum.

The tiles are the `m·n` relation tuples themselves.  A tile `s` may sit
immediately to the **right** of `r` when its left edge continues `r`'s
right edge without backtracking, and immediately **above** `r` when its
bottom edge continues `r`'s top edge likewise:

* `M₁(s, r) = 1`  iff  `s.b′ = r.b` and `s.a ≠ r.a⁻¹`,
* `M₂(s, r) = 1`  iff  `s.a = r.a′` and `s.b′ ≠ r.b′⁻¹`.

Valid configurations — *words* — are rectangular arrays of tiles all of
whose adjacencies are allowed.  For data satisfying the defining
conditions, each row and column of `M₁` sums to `m − 1` and of `M₂` to
`n − 1`, and words extend uniquely around corners, which makes the word
count over a `(s₁, s₂)`-shape exactly `mn·(m−1)^{s₁}·(n−1)^{s₂}`.

The boundary C*-algebra construction needs the standard hypotheses on the
pair `(M₁, M₂)`:

* **(H0)** both matrices are non-zero with entries in `{0, 1}`;
* **(H1)** `M₁M₂ = M₂M₁`, and the product again has entries in `{0, 1}`;
* **(H2)** the one-step transition digraph is strongly connected;
* **(H3)** no direction is eventually periodic: for every non-zero period
  `p` there is a valid word that breaks it.

[`check_h_conditions`] verifies (H0)–(H2) exactly and (H3) constructively
for all periods within a bound, returning the witnesses it built.
*/

use crate::vhdatum::{RelationTuple, VHDatum};
use crate::zmatrix::IntMatrix;
use num_bigint::BigUint;
use std::collections::HashMap;
use std::fmt;

/// Errors from subshift construction and word manipulation.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SubshiftError {
    #[error("datum does not satisfy the defining conditions")]
    InvalidDatum,
    #[error("tile index {index} out of range ({len} tiles)")]
    TileIndex { index: usize, len: usize },
    #[error("cell count {cells} does not fill shape ({s1}, {s2})")]
    ShapeMismatch { cells: usize, s1: usize, s2: usize },
    #[error("seed tile {seed} is not compatible with the word edge")]
    SeedIncompatible { seed: usize },
    #[error("no unique completion at cell ({i}, {j}): {candidates} candidates")]
    CompletionFailed {
        i: usize,
        j: usize,
        candidates: usize,
    },
}

/// The tile set: the datum's tuples in table order, with index lookup.
#[derive(Clone, Debug)]
pub struct Alphabet {
    tiles: Vec<RelationTuple>,
    index: HashMap<RelationTuple, usize>,
}

impl Alphabet {
    fn new(datum: &VHDatum) -> Self {
        let tiles: Vec<RelationTuple> = datum.tuples().to_vec();
        let index = tiles.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        Alphabet { tiles, index }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tile(&self, index: usize) -> RelationTuple {
        self.tiles[index]
    }

    pub fn index_of(&self, tile: RelationTuple) -> Option<usize> {
        self.index.get(&tile).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = RelationTuple> + '_ {
        self.tiles.iter().copied()
    }
}

/// The half-turn of a tile: `(a, b, b′, a′) ↦ (a′⁻¹, b′⁻¹, b⁻¹, a⁻¹)`.
///
/// This involution conjugates each transition matrix into its transpose:
/// `s` right of `r` exactly when the rotated `r` is right of the rotated
/// `s`, and likewise vertically.
pub fn rotate_tile(tile: RelationTuple) -> RelationTuple {
    tile.half_turn()
}

/// The pair of `{0,1}` transition matrices of a datum, plus the tile set.
#[derive(Clone, Debug)]
pub struct TransitionMatrices {
    alphabet: Alphabet,
    m: u32,
    n: u32,
    m1: Vec<bool>,
    m2: Vec<bool>,
}

impl TransitionMatrices {
    /// Builds `M₁`, `M₂` for a datum satisfying the defining conditions.
    pub fn build(datum: &VHDatum) -> Result<Self, SubshiftError> {
        if !datum.is_bm() {
            return Err(SubshiftError::InvalidDatum);
        }
        let alphabet = Alphabet::new(datum);
        let len = alphabet.len();
        let mut m1 = vec![false; len * len];
        let mut m2 = vec![false; len * len];
        for (s, st) in alphabet.tiles.iter().enumerate() {
            for (r, rt) in alphabet.tiles.iter().enumerate() {
                m1[s * len + r] = st.b_prime == rt.b && st.a != rt.a.inverse();
                m2[s * len + r] = st.a == rt.a_prime && st.b_prime != rt.b_prime.inverse();
            }
        }
        Ok(TransitionMatrices {
            alphabet,
            m: datum.m(),
            n: datum.n(),
            m1,
            m2,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of tiles, `m·n`.
    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    /// Horizontal degree `m`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Vertical degree `n`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Whether tile `s` may sit immediately to the right of tile `r`.
    pub fn m1(&self, s: usize, r: usize) -> bool {
        self.m1[s * self.len() + r]
    }

    /// Whether tile `s` may sit immediately above tile `r`.
    pub fn m2(&self, s: usize, r: usize) -> bool {
        self.m2[s * self.len() + r]
    }

    fn matrix(&self, which: usize) -> &[bool] {
        match which {
            1 => &self.m1,
            2 => &self.m2,
            _ => panic!("matrix index must be 1 or 2"),
        }
    }

    /// Row sums of `M₁` (`which = 1`) or `M₂` (`which = 2`).
    pub fn row_sums(&self, which: usize) -> Vec<usize> {
        let len = self.len();
        let m = self.matrix(which);
        (0..len)
            .map(|s| (0..len).filter(|&r| m[s * len + r]).count())
            .collect()
    }

    /// Column sums of `M₁` or `M₂`.
    pub fn col_sums(&self, which: usize) -> Vec<usize> {
        let len = self.len();
        let m = self.matrix(which);
        (0..len)
            .map(|r| (0..len).filter(|&s| m[s * len + r]).count())
            .collect()
    }

    /// `M₁` or `M₂` as an integer matrix.
    pub fn to_int_matrix(&self, which: usize) -> IntMatrix {
        let len = self.len();
        let m = self.matrix(which);
        IntMatrix::from_fn(len, len, |s, r| u32::from(m[s * len + r]).into())
    }

    /// The block `(I − M₁ | I − M₂)`, whose cokernel is the shift group.
    pub fn i_minus_block(&self) -> IntMatrix {
        let len = self.len();
        let block = |m: &[bool]| {
            IntMatrix::from_fn(len, len, |s, r| {
                (i64::from(s == r) - i64::from(m[s * len + r])).into()
            })
        };
        IntMatrix::hstack(&block(&self.m1), &block(&self.m2))
    }

    /// The transposed-blocks variant `(I − M₁ᵗ | I − M₂ᵗ)`; its cokernel is
    /// isomorphic to the shift group via the half-turn permutation.
    pub fn i_minus_block_transposed(&self) -> IntMatrix {
        let len = self.len();
        let block = |m: &[bool]| {
            IntMatrix::from_fn(len, len, |s, r| {
                (i64::from(s == r) - i64::from(m[r * len + s])).into()
            })
        };
        IntMatrix::hstack(&block(&self.m1), &block(&self.m2))
    }

    /// The permutation `i ↦ index of rotate_tile(tile(i))`.
    pub fn rotation_permutation(&self) -> Vec<usize> {
        self.alphabet
            .iter()
            .map(|t| {
                self.alphabet
                    .index_of(rotate_tile(t))
                    .expect("tile set is closed under half-turn")
            })
            .collect()
    }
}

/// A filled rectangle of tiles over `[0, s₁] × [0, s₂]`, indexed by
/// (column, row) with `(0, 0)` bottom-left.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Word {
    cols: usize,
    rows: usize,
    cells: Vec<usize>,
}

impl Word {
    /// A single-tile word.
    pub fn single(tile: usize) -> Self {
        Word {
            cols: 1,
            rows: 1,
            cells: vec![tile],
        }
    }

    /// Builds a word over shape `(s₁, s₂)` from cells listed row by row,
    /// bottom row first.
    pub fn from_cells(shape: (usize, usize), cells: Vec<usize>) -> Result<Self, SubshiftError> {
        let (cols, rows) = (shape.0 + 1, shape.1 + 1);
        if cells.len() != cols * rows {
            return Err(SubshiftError::ShapeMismatch {
                cells: cells.len(),
                s1: shape.0,
                s2: shape.1,
            });
        }
        Ok(Word { cols, rows, cells })
    }

    /// The shape `(s₁, s₂)`; the domain is `[0, s₁] × [0, s₂]`.
    pub fn shape(&self) -> (usize, usize) {
        (self.cols - 1, self.rows - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[j * self.cols + i]
    }

    fn set(&mut self, i: usize, j: usize, tile: usize) {
        self.cells[j * self.cols + i] = tile;
    }

    /// Whether every adjacency is allowed by the transition matrices.
    pub fn is_valid(&self, tm: &TransitionMatrices) -> bool {
        if self.cells.iter().any(|&c| c >= tm.len()) {
            return false;
        }
        for j in 0..self.rows {
            for i in 0..self.cols {
                if i + 1 < self.cols && !tm.m1(self.get(i + 1, j), self.get(i, j)) {
                    return false;
                }
                if j + 1 < self.rows && !tm.m2(self.get(i, j + 1), self.get(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the word restricted to its domain is `p`-periodic: every
    /// pair of cells at offset `p` carries equal tiles.
    pub fn is_periodic(&self, p: (i64, i64)) -> bool {
        for j in 0..self.rows as i64 {
            for i in 0..self.cols as i64 {
                let (i2, j2) = (i + p.0, j + p.1);
                if (0..self.cols as i64).contains(&i2)
                    && (0..self.rows as i64).contains(&j2)
                    && self.get(i as usize, j as usize) != self.get(i2 as usize, j2 as usize)
                {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for Word {
    /// Rows of tile indices, top row first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in (0..self.rows).rev() {
            let row: Vec<String> = (0..self.cols).map(|i| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Side of a word on which [`extend_word`] grows a new strip.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum GrowthSide {
    Left,
    Right,
    Bottom,
    Top,
}

/// The unique tile completing the corner at `(i, j)`, whose horizontal
/// neighbour sits at `(i + di, j)` and vertical neighbour at `(i, j + dj)`.
fn complete_corner(
    tm: &TransitionMatrices,
    w: &Word,
    i: usize,
    j: usize,
    di: i64,
    dj: i64,
) -> Result<usize, SubshiftError> {
    let h = w.get((i as i64 + di) as usize, j);
    let v = w.get(i, (j as i64 + dj) as usize);
    let mut found = None;
    let mut count = 0;
    for x in 0..tm.len() {
        let h_ok = if di > 0 { tm.m1(h, x) } else { tm.m1(x, h) };
        let v_ok = if dj > 0 { tm.m2(v, x) } else { tm.m2(x, v) };
        if h_ok && v_ok {
            found = Some(x);
            count += 1;
        }
    }
    match (found, count) {
        (Some(x), 1) => Ok(x),
        _ => Err(SubshiftError::CompletionFailed {
            i,
            j,
            candidates: count,
        }),
    }
}

/// Grows a word by one strip on the given side.
///
/// The seed becomes the new corner cell adjacent to the word's `(0, 0)`
/// side of the strip (bottom cell for horizontal growth, left cell for
/// vertical growth) and must be compatible with its neighbour; the rest of
/// the strip is forced by unique corner completion.  There are exactly
/// `m − 1` admissible seeds for horizontal growth and `n − 1` for
/// vertical growth.
pub fn extend_word(
    tm: &TransitionMatrices,
    w: &Word,
    side: GrowthSide,
    seed: usize,
) -> Result<Word, SubshiftError> {
    if seed >= tm.len() {
        return Err(SubshiftError::TileIndex {
            index: seed,
            len: tm.len(),
        });
    }
    let (cols, rows) = (w.cols, w.rows);
    let horizontal = matches!(side, GrowthSide::Left | GrowthSide::Right);
    let (new_cols, new_rows) = if horizontal {
        (cols + 1, rows)
    } else {
        (cols, rows + 1)
    };
    let mut out = Word {
        cols: new_cols,
        rows: new_rows,
        cells: vec![0; new_cols * new_rows],
    };
    // Shift of the old origin inside the grown word.
    let (oi, oj) = match side {
        GrowthSide::Left => (1, 0),
        GrowthSide::Bottom => (0, 1),
        GrowthSide::Right | GrowthSide::Top => (0, 0),
    };
    for j in 0..rows {
        for i in 0..cols {
            out.set(i + oi, j + oj, w.get(i, j));
        }
    }
    match side {
        GrowthSide::Right => {
            if !tm.m1(seed, w.get(cols - 1, 0)) {
                return Err(SubshiftError::SeedIncompatible { seed });
            }
            out.set(cols, 0, seed);
            for j in 1..rows {
                let x = complete_corner(tm, &out, cols, j, -1, -1)?;
                out.set(cols, j, x);
            }
        }
        GrowthSide::Left => {
            if !tm.m1(w.get(0, 0), seed) {
                return Err(SubshiftError::SeedIncompatible { seed });
            }
            out.set(0, 0, seed);
            for j in 1..rows {
                let x = complete_corner(tm, &out, 0, j, 1, -1)?;
                out.set(0, j, x);
            }
        }
        GrowthSide::Top => {
            if !tm.m2(seed, w.get(0, rows - 1)) {
                return Err(SubshiftError::SeedIncompatible { seed });
            }
            out.set(0, rows, seed);
            for i in 1..cols {
                let x = complete_corner(tm, &out, i, rows, -1, -1)?;
                out.set(i, rows, x);
            }
        }
        GrowthSide::Bottom => {
            if !tm.m2(w.get(0, 0), seed) {
                return Err(SubshiftError::SeedIncompatible { seed });
            }
            out.set(0, 0, seed);
            for i in 1..cols {
                let x = complete_corner(tm, &out, i, 0, -1, 1)?;
                out.set(i, 0, x);
            }
        }
    }
    Ok(out)
}

/// Builds a valid word that is not `p`-periodic, for a non-zero period `p`.
///
/// The word lives on `[0, |p₁|] × [0, |p₂|]`, so exactly one pair of cells
/// is at offset `p` — two opposite corners.  An L-shaped path from one
/// corner to the other is seeded step by step (each step has at least two
/// admissible continuations, so the final corner can always be chosen to
/// differ from the first), and the rest of the rectangle is forced by
/// unique corner completion.
pub fn h3_witness(tm: &TransitionMatrices, p: (i64, i64)) -> Result<Word, SubshiftError> {
    assert!(p != (0, 0), "periods are non-zero by definition");
    let (w1, w2) = (p.0.unsigned_abs() as usize, p.1.unsigned_abs() as usize);
    let (cols, rows) = (w1 + 1, w2 + 1);
    // Corner where the path starts; the path ends at the opposite corner.
    let (si, sj) = (if p.0 < 0 { w1 } else { 0 }, if p.1 < 0 { w2 } else { 0 });
    let (ei, ej) = (w1 - si, w2 - sj);
    let hd: i64 = if ei >= si { 1 } else { -1 };
    let vd: i64 = if ej >= sj { 1 } else { -1 };

    let mut w = Word {
        cols,
        rows,
        cells: vec![usize::MAX; cols * rows],
    };
    let start = 0usize;
    w.set(si, sj, start);
    // Path cells after the start, in order: horizontal run then vertical.
    let mut path = Vec::new();
    let mut at = (si as i64, sj as i64);
    while at.0 != ei as i64 {
        at.0 += hd;
        path.push(at);
    }
    while at.1 != ej as i64 {
        at.1 += vd;
        path.push(at);
    }
    for (step, &(i, j)) in path.iter().enumerate() {
        let last = step + 1 == path.len();
        let (pi, pj) = if step == 0 {
            (si as i64, sj as i64)
        } else {
            path[step - 1]
        };
        let prev = w.get(pi as usize, pj as usize);
        let horizontal = j == pj;
        let pick = (0..tm.len()).find(|&x| {
            if last && x == start {
                return false;
            }
            match (horizontal, if horizontal { hd > 0 } else { vd > 0 }) {
                (true, true) => tm.m1(x, prev),
                (true, false) => tm.m1(prev, x),
                (false, true) => tm.m2(x, prev),
                (false, false) => tm.m2(prev, x),
            }
        });
        let Some(x) = pick else {
            return Err(SubshiftError::CompletionFailed {
                i: i as usize,
                j: j as usize,
                candidates: 0,
            });
        };
        w.set(i as usize, j as usize, x);
    }
    // The L-path fills row sj and column ei.  Fill the remaining rows
    // moving away from row sj, each row from column ei toward column si.
    let mut j = sj as i64 + vd;
    while (0..rows as i64).contains(&j) {
        let mut i = ei as i64 - hd;
        while (0..cols as i64).contains(&i) {
            let x = complete_corner(tm, &w, i as usize, j as usize, hd, -vd)?;
            w.set(i as usize, j as usize, x);
            i -= hd;
        }
        j += vd;
    }
    debug_assert!(w.cells.iter().all(|&c| c != usize::MAX));
    Ok(w)
}

/// Counts the valid words of shape `(s₁, s₂)` by transfer-matrix dynamic
/// programming over whole rows (no combinatorial shortcuts), so it can be
/// checked against the closed form `mn·(m−1)^{s₁}·(n−1)^{s₂}`.
pub fn count_words(tm: &TransitionMatrices, shape: (usize, usize)) -> BigUint {
    let width = shape.0 + 1;
    // All valid single rows of the given width.
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..tm.len()).map(|t| vec![t]).collect();
    while let Some(partial) = stack.pop() {
        if partial.len() == width {
            rows.push(partial);
            continue;
        }
        let last = *partial.last().expect("partial rows are non-empty");
        for next in 0..tm.len() {
            if tm.m1(next, last) {
                let mut grown = partial.clone();
                grown.push(next);
                stack.push(grown);
            }
        }
    }
    let compatible =
        |below: &[usize], above: &[usize]| below.iter().zip(above).all(|(&b, &a)| tm.m2(a, b));
    let mut counts: Vec<BigUint> = vec![BigUint::from(1u32); rows.len()];
    for _ in 0..shape.1 {
        counts = rows
            .iter()
            .map(|above| {
                rows.iter()
                    .zip(&counts)
                    .filter(|(below, _)| compatible(below, above))
                    .map(|(_, c)| c)
                    .sum()
            })
            .collect();
    }
    counts.iter().sum()
}

/// Outcome of checking hypotheses (H0)–(H3).
#[derive(Clone, Debug)]
pub struct HReport {
    /// (H0): both matrices non-zero.
    pub h0: bool,
    /// (H1), commutation: `M₁M₂ = M₂M₁`.
    pub h1_commute: bool,
    /// (H1), multiplicity-freeness: the product has entries in `{0, 1}`.
    pub h1_product_zero_one: bool,
    /// (H2): the transition digraph is strongly connected.
    pub h2: bool,
    /// Bound used for (H3): all non-zero `p` with `|pᵢ| ≤ bound` checked.
    pub h3_bound: i64,
    /// Verified aperiodicity witnesses, one per period checked.
    pub h3_witnesses: Vec<((i64, i64), Word)>,
    /// Periods for which no verified witness was found.
    pub h3_failures: Vec<(i64, i64)>,
    pub m1_row_sums: Vec<usize>,
    pub m1_col_sums: Vec<usize>,
    pub m2_row_sums: Vec<usize>,
    pub m2_col_sums: Vec<usize>,
    /// Expected uniform sums: `m − 1` for `M₁`, `n − 1` for `M₂`.
    pub expected_m1_sum: usize,
    pub expected_m2_sum: usize,
}

impl HReport {
    /// (H3) within the bound: every checked period has a verified witness.
    pub fn h3(&self) -> bool {
        self.h3_failures.is_empty()
    }

    /// Whether all rows and columns have the expected uniform sums.
    pub fn sums_uniform(&self) -> bool {
        self.m1_row_sums
            .iter()
            .chain(&self.m1_col_sums)
            .all(|&s| s == self.expected_m1_sum)
            && self
                .m2_row_sums
                .iter()
                .chain(&self.m2_col_sums)
                .all(|&s| s == self.expected_m2_sum)
    }

    /// All hypotheses, (H3) within its bound.
    pub fn all_pass(&self) -> bool {
        self.h0 && self.h1_commute && self.h1_product_zero_one && self.h2 && self.h3()
    }
}

/// Checks (H0)–(H2) exactly and (H3) for all periods within `period_bound`.
pub fn check_h_conditions(tm: &TransitionMatrices, period_bound: i64) -> HReport {
    let len = tm.len();
    let h0 = tm.m1.iter().any(|&b| b) && tm.m2.iter().any(|&b| b);

    // Integer products of the two matrices, as flat counts.
    let product = |a: &[bool], b: &[bool]| -> Vec<u32> {
        let mut out = vec![0u32; len * len];
        for s in 0..len {
            for k in 0..len {
                if a[s * len + k] {
                    for r in 0..len {
                        out[s * len + r] += u32::from(b[k * len + r]);
                    }
                }
            }
        }
        out
    };
    let m1m2 = product(&tm.m1, &tm.m2);
    let m2m1 = product(&tm.m2, &tm.m1);
    let h1_commute = m1m2 == m2m1;
    let h1_product_zero_one = m1m2.iter().all(|&v| v <= 1);

    let h2 = strongly_connected(tm);

    let mut h3_witnesses = Vec::new();
    let mut h3_failures = Vec::new();
    for p1 in -period_bound..=period_bound {
        for p2 in -period_bound..=period_bound {
            if (p1, p2) == (0, 0) {
                continue;
            }
            match h3_witness(tm, (p1, p2)) {
                Ok(w) if w.is_valid(tm) && !w.is_periodic((p1, p2)) => {
                    h3_witnesses.push(((p1, p2), w));
                }
                _ => h3_failures.push((p1, p2)),
            }
        }
    }

    HReport {
        h0,
        h1_commute,
        h1_product_zero_one,
        h2,
        h3_bound: period_bound,
        h3_witnesses,
        h3_failures,
        m1_row_sums: tm.row_sums(1),
        m1_col_sums: tm.col_sums(1),
        m2_row_sums: tm.row_sums(2),
        m2_col_sums: tm.col_sums(2),
        expected_m1_sum: tm.m() as usize - 1,
        expected_m2_sum: tm.n() as usize - 1,
    }
}

/// Strong connectivity of the digraph with an edge `r → s` whenever
/// `M₁(s, r)` or `M₂(s, r)`: forward and backward search from one vertex.
fn strongly_connected(tm: &TransitionMatrices) -> bool {
    let len = tm.len();
    if len == 0 {
        return false;
    }
    let reaches_all = |forward: bool| {
        let mut seen = vec![false; len];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (w, seen_w) in seen.iter_mut().enumerate() {
                let edge = if forward {
                    tm.m1(w, v) || tm.m2(w, v)
                } else {
                    tm.m1(v, w) || tm.m2(v, w)
                };
                if edge && !*seen_w {
                    *seen_w = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reaches_all(true) && reaches_all(false)
}
