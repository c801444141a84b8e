/*!
Exhaustive enumeration and classification of data at fixed degrees.

A datum of degree `(m, n)` is exactly a set of `αβ` geometric squares
(`α = m/2`, `β = n/2`) whose tuples hit every cell of the `m × n` grid
`A × B` once under the projection `(a, b, b′, a′) ↦ (a, b)`.  The other
three defining projections are then automatically bijective, because each
is the composition of that one with a fixed bijection of `A × B` (rotate
the reading, then invert or swap coordinates).  Enumeration is therefore
an exact-cover search: list all non-degenerate squares, record the four
grid cells each one covers as a bitmask, and extend partial covers at the
lowest uncovered cell.

Two data present isomorphic structures when one maps onto the other by
relabelling letters.  The relabellings respecting the two-sided alphabet
are generated by

* *side-preserving* maps: a signed permutation of the `a`-generators
  together with a signed permutation of the `b`-generators, and
* when `m = n`, the *swap* exchanging the roles of the two sides, which
  sends the reading `(a, b, b′, a′)` to `(τb′, τa′, τa, τb)` where `τ`
  moves a letter to the other alphabet (transposing every square across
  its main diagonal).

[`canonical_form`] minimises the sorted tuple list over the chosen group,
and [`classify`] buckets data by that key.
*/

use crate::vhdatum::{BmSquare, Letter, RelationTuple, VHDatum};
use std::collections::BTreeMap;

/// Errors from the enumeration routines.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EnumerationError {
    /// Degrees must be even and at least 4 to admit a datum.
    #[error("degrees ({m}, {n}) must be even and at least 4")]
    BadDegrees { m: u32, n: u32 },
    /// The cover search stores the `m·n` grid in one 64-bit word.
    #[error("grid of {cells} cells exceeds the 64-cell cover limit")]
    TooManyCells { cells: u64 },
}

fn check_degrees(m: u32, n: u32) -> Result<(u32, u32), EnumerationError> {
    if m < 4 || n < 4 || !m.is_multiple_of(2) || !n.is_multiple_of(2) {
        return Err(EnumerationError::BadDegrees { m, n });
    }
    Ok((m / 2, n / 2))
}

/// The letters `±lo, …, ±hi` in table order.
fn side_letters(lo: u32, hi: u32) -> Vec<Letter> {
    (lo..=hi)
        .flat_map(|v| {
            let v = v as i32;
            [Letter::new(v).unwrap(), Letter::new(-v).unwrap()]
        })
        .collect()
}

/// All geometric squares on the degree-`(m, n)` alphabets, in increasing
/// order of their representatives.  There are `mn(mn − 1)/4` of them.
pub fn all_bm_squares(m: u32, n: u32) -> Result<Vec<BmSquare>, EnumerationError> {
    let (alpha, beta) = check_degrees(m, n)?;
    let a_letters = side_letters(1, alpha);
    let b_letters = side_letters(alpha + 1, alpha + beta);
    let mut seen = std::collections::BTreeSet::new();
    for &a in &a_letters {
        for &b in &b_letters {
            for &b_prime in &b_letters {
                for &a_prime in &a_letters {
                    let t = RelationTuple::new(a, b, b_prime, a_prime);
                    if !t.is_degenerate() {
                        seen.insert(BmSquare::orbit_of(t).expect("tuple is not degenerate"));
                    }
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All data of degree `(m, n)`, via exact cover of the `(a, b)` grid.
///
/// The output is deterministic: data appear in lexicographic order of the
/// index sets of their squares within [`all_bm_squares`].
pub fn enumerate_relation_sets(m: u32, n: u32) -> Result<Vec<VHDatum>, EnumerationError> {
    let (alpha, beta) = check_degrees(m, n)?;
    let cells = u64::from(m) * u64::from(n);
    if cells > 64 {
        return Err(EnumerationError::TooManyCells { cells });
    }
    let squares = all_bm_squares(m, n)?;

    // Cell index of (a, b): positions in table order, row per a-letter.
    let a_letters = side_letters(1, alpha);
    let b_letters = side_letters(alpha + 1, alpha + beta);
    let position = |letters: &[Letter], l: Letter| -> u64 {
        letters
            .iter()
            .position(|&x| x == l)
            .expect("letter is in its alphabet") as u64
    };
    let masks: Vec<u64> = squares
        .iter()
        .map(|sq| {
            let mut mask = 0u64;
            for t in sq.tuples() {
                mask |= 1 << (position(&a_letters, t.a) * u64::from(n) + position(&b_letters, t.b));
            }
            mask
        })
        .collect();

    let full: u64 = if cells == 64 { !0 } else { (1u64 << cells) - 1 };
    // Candidates for the lowest uncovered cell: every square chosen there
    // must have that cell as its own lowest (lower ones are already covered).
    let mut by_lowest_cell: Vec<Vec<usize>> = vec![Vec::new(); cells as usize];
    for (i, &mask) in masks.iter().enumerate() {
        by_lowest_cell[mask.trailing_zeros() as usize].push(i);
    }

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity((alpha * beta) as usize);
    fn search(
        covered: u64,
        full: u64,
        masks: &[u64],
        by_lowest_cell: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if covered == full {
            out.push(chosen.clone());
            return;
        }
        let cell = (!covered & full).trailing_zeros() as usize;
        for &i in &by_lowest_cell[cell] {
            if masks[i] & covered == 0 {
                chosen.push(i);
                search(covered | masks[i], full, masks, by_lowest_cell, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut solutions: Vec<Vec<usize>> = Vec::new();
    search(
        0,
        full,
        &masks,
        &by_lowest_cell,
        &mut chosen,
        &mut solutions,
    );
    for solution in solutions {
        out.push(VHDatum::from_squares(
            alpha,
            beta,
            solution.into_iter().map(|i| squares[i].clone()),
        ));
    }
    Ok(out)
}

/// Which relabelling group to classify under.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum EquivalenceMode {
    /// Signed generator permutations of each side separately.
    SidePreserving,
    /// Side-preserving maps together with the side swap (when `m = n`;
    /// for `m ≠ n` no swap exists and this coincides with
    /// [`SidePreserving`](Self::SidePreserving)).
    WithSwap,
}

/// All signed permutations of `1..=k`: entry `i − 1` is the signed image
/// of generator `i`.
fn signed_permutations(k: u32) -> Vec<Vec<i32>> {
    let mut perms: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &perms {
            for v in 1..=k as i32 {
                if !p.iter().any(|&x| x.abs() == v) {
                    for signed in [v, -v] {
                        let mut q = p.clone();
                        q.push(signed);
                        next.push(q);
                    }
                }
            }
        }
        perms = next;
    }
    perms
}

/// Applies the side-preserving map `(σ, τ)` letter-wise and re-sorts.
fn relabel(tuples: &[RelationTuple], alpha: u32, sigma: &[i32], tau: &[i32]) -> Vec<RelationTuple> {
    let map = |l: Letter| -> Letter {
        let v = l.value();
        let idx = v.unsigned_abs();
        let image = if idx <= alpha {
            v.signum() * sigma[(idx - 1) as usize]
        } else {
            let t = tau[(idx - alpha - 1) as usize];
            v.signum() * t.signum() * (t.abs() + alpha as i32)
        };
        Letter::new(image).expect("images of nonzero letters are nonzero")
    };
    let mut out: Vec<RelationTuple> = tuples
        .iter()
        .map(|t| RelationTuple::new(map(t.a), map(t.b), map(t.b_prime), map(t.a_prime)))
        .collect();
    out.sort();
    out
}

/// Transposes every square across its main diagonal and moves each letter
/// to the other alphabet; only defined when `α = β`.
fn swap_sides(tuples: &[RelationTuple], alpha: u32) -> Vec<RelationTuple> {
    let shift = |l: Letter| -> Letter {
        let v = l.value();
        let image = if v.unsigned_abs() <= alpha {
            v + v.signum() * alpha as i32
        } else {
            v - v.signum() * alpha as i32
        };
        Letter::new(image).expect("shift keeps letters nonzero")
    };
    let mut out: Vec<RelationTuple> = tuples
        .iter()
        .map(|t| RelationTuple::new(shift(t.b_prime), shift(t.a_prime), shift(t.a), shift(t.b)))
        .collect();
    out.sort();
    out
}

/// The least relabelled tuple list over the chosen group — equal exactly
/// for equivalent data.
pub fn canonical_form(datum: &VHDatum, mode: EquivalenceMode) -> Vec<RelationTuple> {
    let alpha = datum.alpha();
    let beta = datum.beta();
    let sigmas = signed_permutations(alpha);
    let taus = signed_permutations(beta);
    let mut bases: Vec<Vec<RelationTuple>> = vec![datum.tuples().to_vec()];
    if mode == EquivalenceMode::WithSwap && alpha == beta {
        bases.push(swap_sides(datum.tuples(), alpha));
    }
    let mut best: Option<Vec<RelationTuple>> = None;
    for base in &bases {
        for sigma in &sigmas {
            for tau in &taus {
                let candidate = relabel(base, alpha, sigma, tau);
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate);
                }
            }
        }
    }
    best.expect("the relabelling group is nonempty")
}

/// One bucket of equivalent data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// The canonical datum of the class (its tuples are the canonical form).
    pub canonical: VHDatum,
    /// Indices into the classified slice, ascending.
    pub members: Vec<usize>,
}

/// Buckets `data` by canonical form; classes are ordered by their keys.
pub fn classify(data: &[VHDatum], mode: EquivalenceMode) -> Vec<EquivalenceClass> {
    let mut buckets: BTreeMap<Vec<RelationTuple>, Vec<usize>> = BTreeMap::new();
    for (i, datum) in data.iter().enumerate() {
        buckets
            .entry(canonical_form(datum, mode))
            .or_default()
            .push(i);
    }
    buckets
        .into_iter()
        .map(|(key, members)| {
            let sample = &data[members[0]];
            EquivalenceClass {
                canonical: VHDatum::from_tuples(sample.alpha(), sample.beta(), key),
                members,
            }
        })
        .collect()
}
