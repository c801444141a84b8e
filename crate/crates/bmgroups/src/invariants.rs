/*!
Homological invariants of a datum and the conjectural link to its
K-theory.

The group presented by a datum has generators `a₁, …, a_α, b₁, …, b_β`
and one relator `a b a′⁻¹ b′⁻¹` per geometric square.  Its
*abelianization* `H₁` is therefore the cokernel of the
`(α + β) × (αβ)` integer matrix whose column for the square with
representative `(a, b, b′, a′)` is the exponent vector of
`a + b − b′ − a′`.

The *Euler characteristic* is `χ = (α − 1)(β − 1)`: the quotient complex
has one vertex, `α + β` edges and `αβ` squares, so
`χ = 1 − (α + β) + αβ`.  Since `H₀ = ℤ` and `H₂` is free (the quotient is
a closed aspherical square complex), the rank of `H₂` is determined:

```text
rank H₂ = χ − 1 + rank H₁.
```

Two statements about the shift group `C` hold in every computed example
but are not proved in general; [`conjecture_checks`] measures both:

* `rank C = χ − 1 + rank H₁` (so `K₀` has rank twice that), and
* the identity class in `C` has order exactly `ρ = gcd(α − 1, β − 1)`,
  not merely `ρ` or `ρ/2`.
*/

use crate::ktheory::{k_groups, KTheoryError, KTheoryReport};
use crate::subshift::TransitionMatrices;
use crate::vhdatum::{SquarePartitionError, VHDatum};
use crate::zmatrix::{cokernel, AbelianGroup, IntMatrix};
use num_bigint::BigInt;

/// Errors from invariant computations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InvariantsError {
    /// The relation set does not split into full squares.
    #[error(transparent)]
    Squares(#[from] SquarePartitionError),
    /// The shift-group computation failed.
    #[error(transparent)]
    KTheory(#[from] KTheoryError),
    /// `χ − 1 + rank H₁` came out negative, so it cannot be the rank of
    /// `H₂`; the datum does not present a group of the expected kind.
    #[error("χ − 1 + rank H₁ = {0} is negative")]
    NegativeH2Rank(i64),
}

/// Homological invariants of one datum, with the conjectural
/// comparisons against its K-theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantsReport {
    /// The abelianization `H₁`.
    pub h1: AbelianGroup,
    /// Euler characteristic `χ = (α − 1)(β − 1)`.
    pub chi: i64,
    /// `rank H₂ = χ − 1 + rank H₁`.
    pub h2_rank: usize,
    /// The K-theory of the same datum.
    pub ktheory: KTheoryReport,
    /// Whether `rank C` equals `χ − 1 + rank H₁`.
    pub rank_conjecture_holds: bool,
    /// Whether the identity class has order exactly `ρ`.
    pub order_conjecture_holds: bool,
}

/// Exponent-sum matrix of the square relators: one row per generator,
/// one column per square.
pub fn relator_matrix(datum: &VHDatum) -> Result<IntMatrix, SquarePartitionError> {
    let squares = datum.squares()?;
    let gens = (datum.alpha() + datum.beta()) as usize;
    let mut m = IntMatrix::zeros(gens, squares.len());
    for (col, square) in squares.iter().enumerate() {
        let r = square.representative();
        for (letter, sign) in [(r.a, 1), (r.b, 1), (r.b_prime, -1), (r.a_prime, -1)] {
            let row = (letter.generator_index() - 1) as usize;
            let signed = BigInt::from(letter.value().signum() * sign);
            m.set(row, col, m.get(row, col) + signed);
        }
    }
    Ok(m)
}

/// The abelianization `H₁` of the group presented by the datum.
pub fn abelianization(datum: &VHDatum) -> Result<AbelianGroup, SquarePartitionError> {
    Ok(cokernel(&relator_matrix(datum)?))
}

/// Euler characteristic `χ = (α − 1)(β − 1)` of the quotient complex.
pub fn euler_characteristic(datum: &VHDatum) -> i64 {
    (i64::from(datum.alpha()) - 1) * (i64::from(datum.beta()) - 1)
}

/// `rank H₂ = χ − 1 + rank H₁`, derived from the abelianization.
pub fn h2_rank(datum: &VHDatum) -> Result<usize, InvariantsError> {
    let h1 = abelianization(datum)?;
    h2_rank_from(datum, &h1)
}

fn h2_rank_from(datum: &VHDatum, h1: &AbelianGroup) -> Result<usize, InvariantsError> {
    let value = euler_characteristic(datum) - 1 + h1.rank() as i64;
    usize::try_from(value).map_err(|_| InvariantsError::NegativeH2Rank(value))
}

/// Computes `H₁`, `χ`, `rank H₂` and the K-theory of a datum, and
/// records whether the two conjectural identities hold for it.
pub fn conjecture_checks(
    datum: &VHDatum,
    tm: &TransitionMatrices,
) -> Result<InvariantsReport, InvariantsError> {
    let h1 = abelianization(datum)?;
    let h2_rank = h2_rank_from(datum, &h1)?;
    let ktheory = k_groups(datum, tm)?;
    let rank_conjecture_holds = ktheory.c.rank() == h2_rank;
    let order_conjecture_holds = ktheory.identity_class_order == BigInt::from(datum.rho());
    Ok(InvariantsReport {
        h1,
        chi: euler_characteristic(datum),
        h2_rank,
        ktheory,
        rank_conjecture_holds,
        order_conjecture_holds,
    })
}
