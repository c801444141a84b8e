/*!
K-theory of the boundary algebra of a datum.

The boundary action of the group on `∂T_m × ∂T_n` gives a rank-2
Cuntz–Krieger algebra built from the transition-matrix pair `(M₁, M₂)`.
Its K-theory is governed by one finitely generated abelian group, the
*shift group*

```text
C  =  coker( I − M₁ | I − M₂ )  =  ℤ^{mn} / ⟨(I − M₁)x, (I − M₂)y⟩,
```

via `K₀ = K₁ = C ⊕ ℤ^{rank C}`.  The class of the identity element of the
algebra in `K₀` is the image of the all-ones vector `Σ_r e_r` in `C`; its
order divides `ρ = gcd(α − 1, β − 1)`, equals `ρ` when `ρ` is odd, and is
`ρ` or `ρ/2` when `ρ` is even.

For the direct products `F_α × F_β` everything is known in closed form:

```text
C   =  ℤ^{αβ} ⊕ (ℤ/(β−1))^α ⊕ (ℤ/(α−1))^β ⊕ ℤ/ρ,
```

with the identity class of order exactly `ρ`; [`free_product_closed_form`]
builds that answer directly so it can be checked against the matrix
computation.
*/

use crate::subshift::TransitionMatrices;
use crate::vhdatum::VHDatum;
use crate::zmatrix::{cokernel, element_order_in_cokernel, AbelianGroup, ElementOrder};
use num_bigint::BigInt;

/// Errors from K-theory computations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum KTheoryError {
    /// The identity class has infinite order, which cannot happen for a
    /// datum satisfying the defining conditions.
    #[error("identity class has infinite order in the shift group")]
    InfiniteIdentityOrder,
}

/// How a measured identity-class order relates to the bound `ρ`.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum OrderBound {
    /// The order equals `ρ` (forced when `ρ` is odd).
    ExactRho,
    /// `ρ` is even and the order is `ρ/2`, the other admissible value.
    RhoOrHalf,
    /// The order is outside `{ρ, ρ/2 if ρ even}` — the theory is violated.
    Violated,
}

impl std::fmt::Display for OrderBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrderBound::ExactRho => "exact-rho",
            OrderBound::RhoOrHalf => "rho-or-half",
            OrderBound::Violated => "violated",
        })
    }
}

/// Shift group and K-groups of one datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryReport {
    /// The shift group `C`.
    pub c: AbelianGroup,
    /// `K₀ = C ⊕ ℤ^{rank C}`.
    pub k0: AbelianGroup,
    /// `K₁`, equal to `K₀`.
    pub k1: AbelianGroup,
    /// Order of the class of the identity in `C`.
    pub identity_class_order: BigInt,
    /// `ρ = gcd(α − 1, β − 1)`.
    pub rho: u32,
    /// The measured order against the admissible set.
    pub bound_check: OrderBound,
}

/// The shift group `C = coker(I − M₁ | I − M₂)`.
pub fn shift_group(tm: &TransitionMatrices) -> AbelianGroup {
    cokernel(&tm.i_minus_block())
}

/// Order of the class of the all-ones vector in the shift group.
pub fn identity_class_order(tm: &TransitionMatrices) -> Result<BigInt, KTheoryError> {
    let block = tm.i_minus_block();
    let ones = vec![BigInt::from(1); tm.len()];
    match element_order_in_cokernel(&block, &ones).expect("vector length matches block rows") {
        ElementOrder::Finite(k) => Ok(k),
        ElementOrder::Infinite => Err(KTheoryError::InfiniteIdentityOrder),
    }
}

/// Classifies a measured identity order against the admissible values
/// `{ρ}` for odd `ρ` and `{ρ, ρ/2}` for even `ρ`.
pub fn order_bound_check(rho: u32, order: &BigInt) -> OrderBound {
    if *order == BigInt::from(rho) {
        OrderBound::ExactRho
    } else if rho.is_multiple_of(2) && *order == BigInt::from(rho / 2) {
        OrderBound::RhoOrHalf
    } else {
        OrderBound::Violated
    }
}

/// Computes the full K-theory report of a datum from its matrices.
pub fn k_groups(datum: &VHDatum, tm: &TransitionMatrices) -> Result<KTheoryReport, KTheoryError> {
    let c = shift_group(tm);
    let k0 = c.direct_sum(&AbelianGroup::free(c.rank()));
    let identity = identity_class_order(tm)?;
    let rho = datum.rho();
    let bound_check = order_bound_check(rho, &identity);
    Ok(KTheoryReport {
        k0: k0.clone(),
        k1: k0,
        c,
        identity_class_order: identity,
        rho,
        bound_check,
    })
}

/// The closed-form K-theory of the direct product `F_α × F_β`.
pub fn free_product_closed_form(alpha: u32, beta: u32) -> KTheoryReport {
    assert!(
        alpha >= 2 && beta >= 2,
        "degrees below (4, 4) do not define a datum"
    );
    let rho = num_integer::gcd(alpha - 1, beta - 1);
    let mut orders: Vec<u32> = Vec::new();
    orders.extend(std::iter::repeat_n(beta - 1, alpha as usize));
    orders.extend(std::iter::repeat_n(alpha - 1, beta as usize));
    orders.push(rho);
    let torsion = AbelianGroup::from_cyclic_orders(orders.into_iter().map(i64::from));
    let c = AbelianGroup::free((alpha * beta) as usize).direct_sum(&torsion);
    let k0 = c.direct_sum(&AbelianGroup::free(c.rank()));
    KTheoryReport {
        k0: k0.clone(),
        k1: k0,
        c,
        identity_class_order: BigInt::from(rho),
        rho,
        bound_check: OrderBound::ExactRho,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::TransitionMatrices;
    use crate::vhdatum::{parse_datum, product_free_groups_datum};
    use crate::zmatrix::cokernel;

    const FIXTURE_01: &str = "\
4 4
+1 +3 +1 -3
+1 +4 +1 -4
+2 +3 +2 -3
+2 +4 +2 -4
";

    #[test]
    fn shift_group_of_fixture() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        let tm = TransitionMatrices::build(&datum).unwrap();
        let report = k_groups(&datum, &tm).unwrap();
        assert_eq!(report.c.census_notation(), "2[(2)4]");
        assert_eq!(report.k0.census_notation(), "4[(2)4]");
        assert_eq!(report.k0, report.k1);
        assert_eq!(report.identity_class_order, BigInt::from(1));
        assert_eq!(report.rho, 1);
        assert_eq!(report.bound_check, OrderBound::ExactRho);
    }

    #[test]
    fn transposed_blocks_give_the_same_group() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        let tm = TransitionMatrices::build(&datum).unwrap();
        assert_eq!(cokernel(&tm.i_minus_block_transposed()), shift_group(&tm));
    }

    #[test]
    fn closed_form_matches_matrix_computation() {
        for (alpha, beta) in [(2, 2), (2, 3), (3, 3)] {
            let datum = product_free_groups_datum(alpha, beta);
            let tm = TransitionMatrices::build(&datum).unwrap();
            let computed = k_groups(&datum, &tm).unwrap();
            let closed = free_product_closed_form(alpha, beta);
            assert_eq!(computed, closed, "degrees ({alpha}, {beta})");
        }
    }

    #[test]
    fn closed_form_values() {
        let k = free_product_closed_form(2, 2);
        assert_eq!(k.k0.to_string(), "Z^8");
        let k = free_product_closed_form(2, 3);
        assert_eq!(k.c.to_string(), "Z^6 + Z/2 + Z/2");
        assert_eq!(k.k0.to_string(), "Z^12 + Z/2 + Z/2");
        let k = free_product_closed_form(3, 3);
        assert_eq!(k.c.rank(), 9);
        assert_eq!(k.c.invariant_factors().len(), 7);
        assert_eq!(k.identity_class_order, BigInt::from(2));
    }

    #[test]
    fn order_bound_classification() {
        assert_eq!(order_bound_check(3, &BigInt::from(3)), OrderBound::ExactRho);
        assert_eq!(order_bound_check(4, &BigInt::from(4)), OrderBound::ExactRho);
        assert_eq!(
            order_bound_check(4, &BigInt::from(2)),
            OrderBound::RhoOrHalf
        );
        assert_eq!(order_bound_check(4, &BigInt::from(1)), OrderBound::Violated);
        assert_eq!(order_bound_check(3, &BigInt::from(1)), OrderBound::Violated);
        assert_eq!(order_bound_check(1, &BigInt::from(1)), OrderBound::ExactRho);
    }
}
