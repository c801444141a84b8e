/*!
Presentation data for groups acting on a product of two trees.

A datum of degree `(m, n)` consists of a horizontal alphabet
`A = {±1, …, ±α}` (`m = 2α`), a vertical alphabet `B = {±(α+1), …, ±(α+β)}`
(`n = 2β`), and a set `R` of `m·n` relation tuples `(a, b, b′, a′)`, each
encoding one way of reading a commuting square `a·b = b′·a′` (bottom `a`,
right `b`, left `b′`, top `a′`).  Inverses are negatives: `x⁻¹ = -x`.

`R` presents a group of the intended kind exactly when

* **(i)** it is closed under the square's symmetries
  `(a,b,b′,a′) ↦ (a⁻¹,b′,b,a′⁻¹) ↦ (a′⁻¹,b′⁻¹,b⁻¹,a⁻¹) ↦ (a′,b⁻¹,b′⁻¹,a)`,
* **(ii)** those four readings are pairwise distinct — equivalently no tuple
  has the degenerate shape `(a, b, b⁻¹, a⁻¹)`, and
* **(iii)** each of the four projections onto `(a,b)`, `(a,b′)` — valued in
  `A×B` — and `(b,a′)`, `(b′,a′)` — valued in `B×A` — is bijective.

The group is then `⟨A ∪ B | a b a′⁻¹ b′⁻¹, one per square⟩`; it acts freely
and transitively on the vertices of `T_m × T_n`, and every element is
reachable as a unique reduced word (A-part)·(B-part).

Letters are ordered `1 < -1 < 2 < -2 < …` throughout: this fixes tile
numbering, lexicographically least orbit representatives, and file output.
*/

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

/// A generator or its inverse, encoded as a non-zero integer; `x⁻¹ = -x`.
///
/// The `Ord` implementation is the table order `1 < -1 < 2 < -2 < …`, not
/// integer order.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    /// Wraps a non-zero value.
    pub fn new(value: i32) -> Option<Letter> {
        (value != 0).then_some(Letter(value))
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Index of the underlying generator, ignoring the sign: `|value|`.
    pub fn generator_index(self) -> u32 {
        self.0.unsigned_abs()
    }

    fn order_key(self) -> (u32, bool) {
        (self.0.unsigned_abs(), self.0 < 0)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<i32> for Letter {
    type Error = ZeroLetter;

    fn try_from(value: i32) -> Result<Self, ZeroLetter> {
        Letter::new(value).ok_or(ZeroLetter)
    }
}

/// Error for the one invalid letter encoding.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("0 does not encode a letter")]
pub struct ZeroLetter;

/// Which alphabet a letter belongs to.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Side {
    A,
    B,
}

/// One reading `(a, b, b′, a′)` of a commuting square `a·b = b′·a′`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationTuple {
    pub a: Letter,
    pub b: Letter,
    pub b_prime: Letter,
    pub a_prime: Letter,
}

impl RelationTuple {
    pub fn new(a: Letter, b: Letter, b_prime: Letter, a_prime: Letter) -> Self {
        RelationTuple {
            a,
            b,
            b_prime,
            a_prime,
        }
    }

    /// The four readings of the square, starting with `self`: identity,
    /// horizontal flip, half turn, vertical flip.
    pub fn rotations(self) -> [RelationTuple; 4] {
        let RelationTuple {
            a,
            b,
            b_prime,
            a_prime,
        } = self;
        [
            self,
            RelationTuple::new(a.inverse(), b_prime, b, a_prime.inverse()),
            RelationTuple::new(
                a_prime.inverse(),
                b_prime.inverse(),
                b.inverse(),
                a.inverse(),
            ),
            RelationTuple::new(a_prime, b.inverse(), b_prime.inverse(), a),
        ]
    }

    /// The half-turn reading `(a′⁻¹, b′⁻¹, b⁻¹, a⁻¹)`.
    pub fn half_turn(self) -> RelationTuple {
        self.rotations()[2]
    }

    /// Whether the square collapses: `(a, b, b⁻¹, a⁻¹)` readings coincide in
    /// pairs, so the orbit under [`rotations`](Self::rotations) has size 2
    /// instead of 4.
    pub fn is_degenerate(self) -> bool {
        self.a_prime == self.a.inverse() && self.b_prime == self.b.inverse()
    }
}

impl fmt::Display for RelationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.a, self.b, self.b_prime, self.a_prime
        )
    }
}

impl fmt::Debug for RelationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A geometric square: the full 4-element orbit of a non-degenerate tuple,
/// stored sorted, so equal orbits compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BmSquare {
    tuples: [RelationTuple; 4],
}

/// Error from building a square out of a tuple of the collapsing shape.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("tuple {0} has the degenerate shape (a, b, b⁻¹, a⁻¹)")]
pub struct DegenerateOrbit(pub RelationTuple);

impl BmSquare {
    /// The square containing `tuple`, i.e. its orbit under the four
    /// readings; fails on degenerate tuples, whose orbit is not a square.
    pub fn orbit_of(tuple: RelationTuple) -> Result<BmSquare, DegenerateOrbit> {
        if tuple.is_degenerate() {
            return Err(DegenerateOrbit(tuple));
        }
        let mut tuples = tuple.rotations();
        tuples.sort();
        debug_assert!(tuples.windows(2).all(|w| w[0] != w[1]));
        Ok(BmSquare { tuples })
    }

    /// The lexicographically least reading, used as the canonical
    /// representative in files and tables.
    pub fn representative(&self) -> RelationTuple {
        self.tuples[0]
    }

    pub fn tuples(&self) -> &[RelationTuple; 4] {
        &self.tuples
    }

    pub fn contains(&self, t: RelationTuple) -> bool {
        self.tuples.contains(&t)
    }
}

/// A degree-`(m, n)` datum: alphabet sizes plus the tuple set `R`.
///
/// The type is deliberately lenient — any tuple set can be stored, so that
/// defective data (from files or constructions) can be loaded and then
/// examined with [`validate`](Self::validate).  Operations that only make
/// sense on valid data ([`squares`](Self::squares), the normal-form family)
/// return errors on defective input instead.
pub struct VHDatum {
    alpha: u32,
    beta: u32,
    tuples: Vec<RelationTuple>,
    /// Lazily built lookup `(b′, a′) ↦ (a, b)`; `None` once built if the
    /// projection is not bijective.
    swap: OnceLock<Option<SwapTable>>,
}

/// A pair of letters, the value of a corner projection.
type LetterPair = (Letter, Letter);

/// Lookup `(b′, a′) ↦ (a, b)` used by normal-form rewriting.
type SwapTable = HashMap<LetterPair, LetterPair>;

impl Clone for VHDatum {
    fn clone(&self) -> Self {
        VHDatum {
            alpha: self.alpha,
            beta: self.beta,
            tuples: self.tuples.clone(),
            swap: OnceLock::new(),
        }
    }
}

impl PartialEq for VHDatum {
    fn eq(&self, other: &Self) -> bool {
        (self.alpha, self.beta, &self.tuples) == (other.alpha, other.beta, &other.tuples)
    }
}

impl Eq for VHDatum {}

impl std::hash::Hash for VHDatum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.alpha, self.beta, &self.tuples).hash(state);
    }
}

impl fmt::Debug for VHDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VHDatum(m={}, n={}, {} tuples)",
            self.m(),
            self.n(),
            self.tuples.len()
        )
    }
}

impl VHDatum {
    /// Builds a datum from any collection of tuples (deduplicated, sorted).
    pub fn from_tuples(
        alpha: u32,
        beta: u32,
        tuples: impl IntoIterator<Item = RelationTuple>,
    ) -> Self {
        let set: BTreeSet<RelationTuple> = tuples.into_iter().collect();
        VHDatum {
            alpha,
            beta,
            tuples: set.into_iter().collect(),
            swap: OnceLock::new(),
        }
    }

    /// Builds a datum from whole squares.
    pub fn from_squares(
        alpha: u32,
        beta: u32,
        squares: impl IntoIterator<Item = BmSquare>,
    ) -> Self {
        Self::from_tuples(alpha, beta, squares.into_iter().flat_map(|s| *s.tuples()))
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// Horizontal degree `m = 2α`.
    pub fn m(&self) -> u32 {
        2 * self.alpha
    }

    /// Vertical degree `n = 2β`.
    pub fn n(&self) -> u32 {
        2 * self.beta
    }

    /// `ρ = gcd(α − 1, β − 1)`, the bound governing the order of the
    /// identity class in the shift group.
    pub fn rho(&self) -> u32 {
        num_integer::gcd(self.alpha - 1, self.beta - 1)
    }

    /// The tuple set `R`, sorted.
    pub fn tuples(&self) -> &[RelationTuple] {
        &self.tuples
    }

    /// The horizontal alphabet in table order `1, -1, 2, -2, …`.
    pub fn a_letters(&self) -> Vec<Letter> {
        (1..=self.alpha as i32)
            .flat_map(|v| [Letter(v), Letter(-v)])
            .collect()
    }

    /// The vertical alphabet in table order `α+1, -(α+1), …`.
    pub fn b_letters(&self) -> Vec<Letter> {
        let lo = self.alpha as i32 + 1;
        let hi = (self.alpha + self.beta) as i32;
        (lo..=hi).flat_map(|v| [Letter(v), Letter(-v)]).collect()
    }

    /// Which alphabet `letter` belongs to, if either.
    pub fn side_of(&self, letter: Letter) -> Option<Side> {
        let g = letter.generator_index();
        if (1..=self.alpha).contains(&g) {
            Some(Side::A)
        } else if (self.alpha + 1..=self.alpha + self.beta).contains(&g) {
            Some(Side::B)
        } else {
            None
        }
    }

    fn in_side(&self, letter: Letter, side: Side) -> bool {
        self.side_of(letter) == Some(side)
    }

    /// Checks the defining conditions and reports every violation found.
    pub fn validate(&self) -> ValidationReport {
        let set: BTreeSet<RelationTuple> = self.tuples.iter().copied().collect();
        let mut report = ValidationReport {
            expected_tuples: (self.m() * self.n()) as usize,
            actual_tuples: self.tuples.len(),
            side_violations: Vec::new(),
            closure_missing: Vec::new(),
            degenerate: Vec::new(),
            projection_collisions: Default::default(),
        };
        let mut missing = BTreeSet::new();
        for &t in &self.tuples {
            let sides_ok = self.in_side(t.a, Side::A)
                && self.in_side(t.b, Side::B)
                && self.in_side(t.b_prime, Side::B)
                && self.in_side(t.a_prime, Side::A);
            if !sides_ok {
                report.side_violations.push(t);
            }
            for r in &t.rotations()[1..] {
                if !set.contains(r) {
                    missing.insert(*r);
                }
            }
            if t.is_degenerate() {
                report.degenerate.push(t);
            }
        }
        report.closure_missing = missing.into_iter().collect();
        let projections: [fn(&RelationTuple) -> LetterPair; 4] = [
            |t| (t.a, t.b),
            |t| (t.a, t.b_prime),
            |t| (t.b, t.a_prime),
            |t| (t.b_prime, t.a_prime),
        ];
        for (k, proj) in projections.iter().enumerate() {
            let mut seen: BTreeMap<(Letter, Letter), RelationTuple> = BTreeMap::new();
            for &t in &self.tuples {
                if let Some(&first) = seen.get(&proj(&t)) {
                    report.projection_collisions[k].push((first, t));
                } else {
                    seen.insert(proj(&t), t);
                }
            }
        }
        report
    }

    /// Whether the datum satisfies all defining conditions.
    pub fn is_bm(&self) -> bool {
        self.validate().is_bm()
    }

    /// Partitions the tuple set into whole squares, sorted by
    /// representative.
    pub fn squares(&self) -> Result<Vec<BmSquare>, SquarePartitionError> {
        let mut remaining: BTreeSet<RelationTuple> = self.tuples.iter().copied().collect();
        let mut squares = Vec::new();
        while let Some(&t) = remaining.iter().next() {
            let square = BmSquare::orbit_of(t).map_err(SquarePartitionError::Degenerate)?;
            for r in square.tuples() {
                if !remaining.remove(r) {
                    return Err(SquarePartitionError::MissingRotation {
                        tuple: t,
                        missing: *r,
                    });
                }
            }
            squares.push(square);
        }
        Ok(squares)
    }

    fn swap_table(&self) -> Option<&SwapTable> {
        self.swap
            .get_or_init(|| {
                let mut table = HashMap::with_capacity(self.tuples.len());
                for t in &self.tuples {
                    if table.insert((t.b_prime, t.a_prime), (t.a, t.b)).is_some() {
                        return None;
                    }
                }
                (table.len() == (self.m() * self.n()) as usize).then_some(table)
            })
            .as_ref()
    }

    /// Rewrites `b·a` (a vertical step followed by a horizontal one) as
    /// `a₁·b₁`, using the unique square whose left/top edges are `(b, a)`.
    pub fn swap_ba(&self, b: Letter, a: Letter) -> Result<(Letter, Letter), NormalFormError> {
        if !self.in_side(b, Side::B) {
            return Err(NormalFormError::NotInAlphabet {
                letter: b,
                expected: Side::B,
            });
        }
        if !self.in_side(a, Side::A) {
            return Err(NormalFormError::NotInAlphabet {
                letter: a,
                expected: Side::A,
            });
        }
        let table = self.swap_table().ok_or(NormalFormError::InvalidDatum)?;
        Ok(table[&(b, a)])
    }

    /// Multiplies one letter onto a normal form, keeping it normal.
    fn push_letter(&self, nf: &mut NormalForm, letter: Letter) -> Result<(), NormalFormError> {
        match self.side_of(letter) {
            None => Err(NormalFormError::OutOfRange(letter)),
            Some(Side::B) => {
                push_reduced(&mut nf.b_part, letter);
                Ok(())
            }
            Some(Side::A) => {
                // Carry the horizontal letter leftward through the vertical
                // part, rewriting each crossed edge by its square.
                let mut x = letter;
                for slot in nf.b_part.iter_mut().rev() {
                    let (a1, b1) = self.swap_ba(*slot, x)?;
                    x = a1;
                    *slot = b1;
                }
                push_reduced(&mut nf.a_part, x);
                Ok(())
            }
        }
    }

    /// The unique normal form (A-part)·(B-part) of a word in the generators.
    pub fn normal_form(&self, word: &[Letter]) -> Result<NormalForm, NormalFormError> {
        let mut nf = NormalForm::identity();
        for &letter in word {
            self.push_letter(&mut nf, letter)?;
        }
        Ok(nf)
    }

    /// Product of two normal forms.
    pub fn nf_multiply(
        &self,
        lhs: &NormalForm,
        rhs: &NormalForm,
    ) -> Result<NormalForm, NormalFormError> {
        let mut nf = lhs.clone();
        for &letter in rhs.a_part.iter().chain(&rhs.b_part) {
            self.push_letter(&mut nf, letter)?;
        }
        Ok(nf)
    }

    /// Inverse of a normal form.
    pub fn nf_invert(&self, nf: &NormalForm) -> Result<NormalForm, NormalFormError> {
        let mut out = NormalForm::identity();
        for &letter in nf.b_part.iter().rev().chain(nf.a_part.iter().rev()) {
            self.push_letter(&mut out, letter.inverse())?;
        }
        Ok(out)
    }
}

/// Appends `letter` to a reduced word, cancelling against the tail.
fn push_reduced(word: &mut Vec<Letter>, letter: Letter) {
    if word.last() == Some(&letter.inverse()) {
        word.pop();
    } else {
        word.push(letter);
    }
}

/// Outcome of checking a datum against the defining conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// `m·n`, the size a complete tuple set must have.
    pub expected_tuples: usize,
    pub actual_tuples: usize,
    /// Tuples whose letters sit in the wrong alphabet (or none).
    pub side_violations: Vec<RelationTuple>,
    /// Readings required by condition (i) but absent from the set.
    pub closure_missing: Vec<RelationTuple>,
    /// Tuples of the collapsing shape forbidden by condition (ii).
    pub degenerate: Vec<RelationTuple>,
    /// For each projection of condition (iii), pairs of distinct tuples
    /// with the same image, in the order of [`PROJECTION_LABELS`].
    pub projection_collisions: [Vec<(RelationTuple, RelationTuple)>; 4],
}

/// Names of the four condition-(iii) projections, matching the order used
/// in [`ValidationReport::projection_collisions`].
pub const PROJECTION_LABELS: [&str; 4] = ["(a,b)", "(a,b')", "(b,a')", "(b',a')"];

impl ValidationReport {
    pub fn counts_ok(&self) -> bool {
        self.expected_tuples == self.actual_tuples
    }

    pub fn sides_ok(&self) -> bool {
        self.side_violations.is_empty()
    }

    /// Condition (i).
    pub fn closure_ok(&self) -> bool {
        self.closure_missing.is_empty()
    }

    /// Condition (ii).
    pub fn distinctness_ok(&self) -> bool {
        self.degenerate.is_empty()
    }

    /// Condition (iii), one flag per projection.
    pub fn projections_ok(&self) -> [bool; 4] {
        std::array::from_fn(|k| self.projection_collisions[k].is_empty())
    }

    /// Whether every condition holds.
    pub fn is_bm(&self) -> bool {
        self.counts_ok()
            && self.sides_ok()
            && self.closure_ok()
            && self.distinctness_ok()
            && self.projections_ok().iter().all(|&ok| ok)
    }
}

/// Error from operations that require whole squares.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SquarePartitionError {
    #[error("{0}")]
    Degenerate(#[from] DegenerateOrbit),
    #[error("tuple {tuple} is in the set but its reading {missing} is not")]
    MissingRotation {
        tuple: RelationTuple,
        missing: RelationTuple,
    },
}

/// Error from the normal-form operations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("letter {0} is outside both alphabets")]
    OutOfRange(Letter),
    #[error("letter {letter} is not in the {expected:?} alphabet")]
    NotInAlphabet { letter: Letter, expected: Side },
    #[error("datum does not define a rewriting table: the (b',a') projection is not bijective")]
    InvalidDatum,
}

/// The unique factorisation of a group element as (A-part)·(B-part), both
/// parts freely reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NormalForm {
    a_part: Vec<Letter>,
    b_part: Vec<Letter>,
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm::default()
    }

    pub fn a_part(&self) -> &[Letter] {
        &self.a_part
    }

    pub fn b_part(&self) -> &[Letter] {
        &self.b_part
    }

    pub fn is_identity(&self) -> bool {
        self.a_part.is_empty() && self.b_part.is_empty()
    }

    /// Word length `|A-part| + |B-part|`.
    pub fn len(&self) -> usize {
        self.a_part.len() + self.b_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }
}

impl fmt::Display for NormalForm {
    /// Space-separated letters with a `|` between the parts: `1 -2 | 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |part: &[Letter]| {
            part.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} | {}", join(&self.a_part), join(&self.b_part))
    }
}

/// Errors from reading a datum file.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected header 'm n' with two integers")]
    BadHeader { line: usize },
    #[error("degrees ({m}, {n}) invalid: both must be even and at least 4")]
    BadDegrees { m: i64, n: i64 },
    #[error("line {line}: expected 4 integers, found {found}")]
    BadLetterCount { line: usize, found: usize },
    #[error("line {line}: '{token}' is not an integer")]
    BadInteger { line: usize, token: String },
    #[error("line {line}: 0 is not a letter")]
    ZeroLetter { line: usize },
    #[error("line {line}: letter {value} does not belong to the {expected:?} alphabet")]
    WrongSide {
        line: usize,
        value: i32,
        expected: Side,
    },
    #[error("expected {expected} relation lines, found {found}")]
    WrongLineCount { expected: usize, found: usize },
}

/// Reads a datum file.
///
/// The format: `#` starts a comment; the first content line is `m n`; each
/// of the following `(m/2)·(n/2)` lines spells one relator `x₁x₂x₃x₄ = 1`
/// read around a square, alternating sides A B A B — one line per square.
/// The tuple set is the closure of the lines under the four readings, so a
/// line `x₁ x₂ x₃ x₄` contributes the tuple `(x₁, x₂, -x₄, -x₃)` and its
/// rotations.
///
/// Only structural problems are parse errors; the defining conditions are
/// checked separately by [`VHDatum::validate`].
pub fn parse_datum(text: &str) -> Result<VHDatum, ParseError> {
    let mut content = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty());

    let (header_no, header) = content.next().ok_or(ParseError::BadHeader { line: 1 })?;
    let parts: Vec<i64> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| ParseError::BadHeader { line: header_no })?;
    let [m, n] = parts[..] else {
        return Err(ParseError::BadHeader { line: header_no });
    };
    if m < 4 || n < 4 || m % 2 != 0 || n % 2 != 0 {
        return Err(ParseError::BadDegrees { m, n });
    }
    let (alpha, beta) = ((m / 2) as u32, (n / 2) as u32);
    let expected = (alpha * beta) as usize;

    let mut tuples = Vec::new();
    let mut found = 0usize;
    for (line_no, line) in content {
        found += 1;
        if found > expected {
            continue;
        }
        let mut xs = [Letter(1); 4];
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(ParseError::BadLetterCount {
                line: line_no,
                found: tokens.len(),
            });
        }
        for (k, token) in tokens.iter().enumerate() {
            let value: i32 = token.parse().map_err(|_| ParseError::BadInteger {
                line: line_no,
                token: token.to_string(),
            })?;
            let letter = Letter::new(value).ok_or(ParseError::ZeroLetter { line: line_no })?;
            let expected_side = if k % 2 == 0 { Side::A } else { Side::B };
            let g = letter.generator_index();
            let actual_side = if (1..=alpha).contains(&g) {
                Some(Side::A)
            } else if (alpha + 1..=alpha + beta).contains(&g) {
                Some(Side::B)
            } else {
                None
            };
            if actual_side != Some(expected_side) {
                return Err(ParseError::WrongSide {
                    line: line_no,
                    value,
                    expected: expected_side,
                });
            }
            xs[k] = letter;
        }
        let tuple = RelationTuple::new(xs[0], xs[1], xs[3].inverse(), xs[2].inverse());
        tuples.extend(tuple.rotations());
    }
    if found != expected {
        return Err(ParseError::WrongLineCount { expected, found });
    }
    Ok(VHDatum::from_tuples(alpha, beta, tuples))
}

/// Writes a datum in the file format of [`parse_datum`]: header, then one
/// line per square using its lexicographically least reading.
pub fn serialize_datum(datum: &VHDatum) -> Result<String, SquarePartitionError> {
    let mut out = format!("{} {}\n", datum.m(), datum.n());
    for square in datum.squares()? {
        let r = square.representative();
        out.push_str(&format!(
            "{:+} {:+} {:+} {:+}\n",
            r.a.value(),
            r.b.value(),
            r.a_prime.inverse().value(),
            r.b_prime.inverse().value()
        ));
    }
    Ok(out)
}

/// The direct-product datum `F_α × F_β`: every horizontal letter commutes
/// with every vertical letter, so the tuples are all `(a, b, b, a)`.
pub fn product_free_groups_datum(alpha: u32, beta: u32) -> VHDatum {
    assert!(
        alpha >= 2 && beta >= 2,
        "degrees below (4, 4) do not define a datum"
    );
    let probe = VHDatum::from_tuples(alpha, beta, []);
    let tuples = probe.a_letters().into_iter().flat_map(|a| {
        probe
            .b_letters()
            .into_iter()
            .map(move |b| RelationTuple::new(a, b, b, a))
    });
    VHDatum::from_tuples(alpha, beta, tuples.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn lt(v: i32) -> Letter {
        Letter::new(v).unwrap()
    }

    pub(crate) fn tup(a: i32, b: i32, bp: i32, ap: i32) -> RelationTuple {
        RelationTuple::new(lt(a), lt(b), lt(bp), lt(ap))
    }

    /// Degree-(4,4) datum whose squares all have the form a b a b⁻¹ — four
    /// independent Klein-bottle-like squares.
    pub(crate) const FIXTURE_01: &str = "\
4 4
+1 +3 +1 -3
+1 +4 +1 -4
+2 +3 +2 -3
+2 +4 +2 -4
";

    #[test]
    fn letter_table_order() {
        let mut letters = vec![lt(-2), lt(1), lt(3), lt(-1), lt(2), lt(-3)];
        letters.sort();
        assert_eq!(letters, vec![lt(1), lt(-1), lt(2), lt(-2), lt(3), lt(-3)]);
    }

    #[test]
    fn rotations_generate_the_square() {
        let t = tup(1, 3, 3, -1);
        let orbit = BmSquare::orbit_of(t).unwrap();
        let expect = [
            tup(1, 3, 3, -1),
            tup(-1, 3, 3, 1),
            tup(1, -3, -3, -1),
            tup(-1, -3, -3, 1),
        ];
        for e in expect {
            assert!(orbit.contains(e), "missing {e}");
        }
        assert_eq!(orbit.representative(), tup(1, 3, 3, -1));
    }

    #[test]
    fn degenerate_tuple_is_rejected() {
        let t = tup(1, 3, -3, -1);
        assert!(t.is_degenerate());
        assert_eq!(BmSquare::orbit_of(t), Err(DegenerateOrbit(t)));
        // Its orbit really has size 2.
        let set: BTreeSet<_> = t.rotations().into_iter().collect();
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn parse_expands_lines_to_orbits() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        assert_eq!((datum.m(), datum.n()), (4, 4));
        assert_eq!(datum.tuples().len(), 16);
        assert!(datum.tuples().contains(&tup(1, 3, 3, -1)));
        assert!(datum.validate().is_bm());
    }

    #[test]
    fn parse_accepts_comments_and_blank_lines() {
        let text = format!("# a comment\n\n{}# trailing\n", FIXTURE_01);
        assert_eq!(
            parse_datum(&text).unwrap(),
            parse_datum(FIXTURE_01).unwrap()
        );
    }

    #[test]
    fn parse_rejects_structural_problems() {
        assert_eq!(parse_datum(""), Err(ParseError::BadHeader { line: 1 }));
        assert_eq!(parse_datum("4\n"), Err(ParseError::BadHeader { line: 1 }));
        assert_eq!(
            parse_datum("4 5\n"),
            Err(ParseError::BadDegrees { m: 4, n: 5 })
        );
        assert_eq!(
            parse_datum("2 4\n"),
            Err(ParseError::BadDegrees { m: 2, n: 4 })
        );
        let text = "4 4\n+1 +3 +1\n";
        assert_eq!(
            parse_datum(text),
            Err(ParseError::BadLetterCount { line: 2, found: 3 })
        );
        let text = "4 4\n+1 +3 +1 -3\n+1 +4 +1 -4\n+2 +3 +2 -3\n";
        assert_eq!(
            parse_datum(text),
            Err(ParseError::WrongLineCount {
                expected: 4,
                found: 3
            })
        );
        let text = "4 4\n+3 +3 +1 -3\n+1 +4 +1 -4\n+2 +3 +2 -3\n+2 +4 +2 -4\n";
        assert_eq!(
            parse_datum(text),
            Err(ParseError::WrongSide {
                line: 2,
                value: 3,
                expected: Side::A
            })
        );
        let text = "4 4\n+1 +0 +1 -3\n+1 +4 +1 -4\n+2 +3 +2 -3\n+2 +4 +2 -4\n";
        assert_eq!(parse_datum(text), Err(ParseError::ZeroLetter { line: 2 }));
    }

    #[test]
    fn serialize_round_trips_and_uses_least_readings() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        let text = serialize_datum(&datum).unwrap();
        assert_eq!(text, FIXTURE_01);
        assert_eq!(parse_datum(&text).unwrap(), datum);
    }

    #[test]
    fn validate_reports_degenerate_tuples() {
        // Replace one square of the fixture by a degenerate orbit.
        let datum = parse_datum(FIXTURE_01).unwrap();
        let keep: Vec<_> = datum
            .tuples()
            .iter()
            .copied()
            .filter(|t| t.b.generator_index() != 3 || t.a.generator_index() != 1)
            .collect();
        let bad = tup(1, 3, -3, -1);
        let datum = VHDatum::from_tuples(2, 2, keep.into_iter().chain(bad.rotations()));
        let report = datum.validate();
        assert!(!report.distinctness_ok());
        assert!(report.degenerate.contains(&bad));
        assert!(
            report.closure_ok(),
            "degenerate orbits are still rotation-closed"
        );
        assert!(!report.is_bm());
        assert!(datum.squares().is_err());
    }

    #[test]
    fn validate_reports_missing_rotations_and_collisions() {
        // Drop a single tuple: closure breaks, and the projections that hit
        // the removed tuple's images lose bijectivity by cardinality only —
        // collisions appear once a foreign tuple is added instead.
        let datum = parse_datum(FIXTURE_01).unwrap();
        let dropped = tup(1, 3, 3, -1);
        let datum2 = VHDatum::from_tuples(
            2,
            2,
            datum.tuples().iter().copied().filter(|&t| t != dropped),
        );
        let report = datum2.validate();
        assert!(!report.counts_ok());
        assert!(!report.closure_ok());
        assert!(report.closure_missing.contains(&dropped));

        // A duplicated (a,b) image: swap one tuple for a rival with the same
        // bottom/right edges.
        let rival = tup(1, 3, 4, -1);
        let datum3 = VHDatum::from_tuples(2, 2, datum.tuples().iter().copied().chain([rival]));
        let report = datum3.validate();
        assert!(!report.projections_ok()[0]);
        assert!(report.projection_collisions[0]
            .iter()
            .any(|&(x, y)| (x, y) == (tup(1, 3, 3, -1), rival)));
    }

    #[test]
    fn validate_reports_side_violations() {
        let datum = VHDatum::from_tuples(2, 2, [tup(3, 1, 1, 3)]);
        let report = datum.validate();
        assert!(!report.sides_ok());
        assert_eq!(report.side_violations, vec![tup(3, 1, 1, 3)]);
    }

    #[test]
    fn swap_rewrites_vertical_horizontal_corners() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        assert_eq!(datum.swap_ba(lt(3), lt(1)).unwrap(), (lt(-1), lt(3)));
        let commuting = product_free_groups_datum(2, 2);
        assert_eq!(commuting.swap_ba(lt(3), lt(1)).unwrap(), (lt(1), lt(3)));
        assert!(matches!(
            datum.swap_ba(lt(1), lt(3)),
            Err(NormalFormError::NotInAlphabet { .. })
        ));
    }

    #[test]
    fn normal_form_examples() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        let nf = datum.normal_form(&[lt(3), lt(1)]).unwrap();
        assert_eq!(
            (nf.a_part(), nf.b_part()),
            ([lt(-1)].as_slice(), [lt(3)].as_slice())
        );
        assert_eq!(nf.to_string(), "-1 | 3");

        let commuting = product_free_groups_datum(2, 2);
        let nf = commuting.normal_form(&[lt(3), lt(1)]).unwrap();
        assert_eq!(nf.to_string(), "1 | 3");

        let id = datum.normal_form(&[lt(1), lt(-1)]).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.to_string(), " | ");

        assert_eq!(
            datum.normal_form(&[lt(7)]),
            Err(NormalFormError::OutOfRange(lt(7)))
        );
    }

    #[test]
    fn normal_form_multiplication_and_inverse() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        let g = datum.normal_form(&[lt(3), lt(1), lt(-4), lt(2)]).unwrap();
        let h = datum.normal_form(&[lt(4), lt(-1)]).unwrap();
        // (g·h) must equal the normal form of the concatenated word.
        let gh = datum.nf_multiply(&g, &h).unwrap();
        let direct = datum
            .normal_form(&[lt(3), lt(1), lt(-4), lt(2), lt(4), lt(-1)])
            .unwrap();
        assert_eq!(gh, direct);
        // g · g⁻¹ = 1.
        let ginv = datum.nf_invert(&g).unwrap();
        assert!(datum.nf_multiply(&g, &ginv).unwrap().is_identity());
        assert!(datum.nf_multiply(&ginv, &g).unwrap().is_identity());
    }

    #[test]
    fn commuting_datum_matches_its_fixture() {
        // The degree-(4,4) direct product F₂ × F₂ is the all-commutators
        // datum.
        let fixture = "\
4 4
+1 +3 -1 -3
+1 +4 -1 -4
+2 +3 -2 -3
+2 +4 -2 -4
";
        assert_eq!(
            parse_datum(fixture).unwrap(),
            product_free_groups_datum(2, 2)
        );
    }

    #[test]
    fn rho_is_gcd_of_alpha_beta_minus_one() {
        assert_eq!(product_free_groups_datum(2, 2).rho(), 1);
        assert_eq!(product_free_groups_datum(3, 3).rho(), 2);
        assert_eq!(product_free_groups_datum(4, 4).rho(), 3);
        assert_eq!(product_free_groups_datum(2, 3).rho(), 1);
    }
}
