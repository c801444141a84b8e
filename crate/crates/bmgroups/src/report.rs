/*!
Assembled, serializable views of the computations.

[`analyze`] runs everything on one datum — subshift hypotheses, homology,
K-theory, conjectural comparisons — and returns a flat
[`AnalysisReport`] that serializes to deterministic JSON (field order is
declaration order) and prints as a small text block.  [`census`] runs
enumeration plus classification at a degree and tabulates each class with
its abelianization and shift group in census notation.
*/

use crate::enumeration::{classify, enumerate_relation_sets, EnumerationError, EquivalenceMode};
use crate::invariants::{conjecture_checks, InvariantsError};
use crate::subshift::{check_h_conditions, TransitionMatrices};
use crate::vhdatum::{serialize_datum, SquarePartitionError, VHDatum};
use crate::zmatrix::AbelianGroup;
use serde::Serialize;
use std::fmt;

/// Errors from assembling a report.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ReportError {
    /// The datum fails the defining conditions, so none of the derived
    /// objects exist.
    #[error("the datum fails the defining conditions")]
    InvalidDatum,
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Squares(#[from] SquarePartitionError),
}

/// One finitely generated abelian group in all output forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupRendering {
    /// Free rank.
    pub rank: usize,
    /// Nontrivial invariant factors, each dividing the next.
    pub invariant_factors: Vec<u64>,
    /// Primary decomposition as prime powers, census order.
    pub primary: Vec<u64>,
    /// Census notation, e.g. `2[(2)4]`.
    pub census: String,
    /// Invariant-factor display, e.g. `Z^2 + Z/4 + Z/4`.
    pub display: String,
}

impl GroupRendering {
    /// Renders a group; torsion coefficients must fit in `u64`, which
    /// everything in range of the computations here does.
    pub fn of(group: &AbelianGroup) -> Self {
        let to_u64 =
            |b: &num_bigint::BigInt| u64::try_from(b).expect("torsion coefficient fits in u64");
        GroupRendering {
            rank: group.rank(),
            invariant_factors: group.invariant_factors().iter().map(to_u64).collect(),
            primary: group
                .primary_decomposition()
                .iter()
                .map(|(p, e)| to_u64(&p.pow(*e)))
                .collect(),
            census: group.census_notation(),
            display: group.to_string(),
        }
    }
}

/// Pass/fail summary of the subshift hypotheses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionsSummary {
    /// (H0): both matrices nonzero.
    pub h0: bool,
    /// (H1): matrices commute with `{0, 1}` product.
    pub h1: bool,
    /// (H2): transition digraph strongly connected.
    pub h2: bool,
    /// (H3): aperiodicity witnesses for all checked periods.
    pub h3: bool,
    /// Period bound used for (H3).
    pub h3_bound: i64,
    /// Number of periods checked for (H3).
    pub h3_periods_checked: usize,
    /// Row and column sums equal `m − 1` resp. `n − 1` throughout.
    pub uniform_sums: bool,
}

/// The full analysis of one datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub m: u32,
    pub n: u32,
    pub alpha: u32,
    pub beta: u32,
    /// `ρ = gcd(α − 1, β − 1)`.
    pub rho: u32,
    pub conditions: ConditionsSummary,
    /// Abelianization of the presented group.
    pub h1: GroupRendering,
    /// Euler characteristic `(α − 1)(β − 1)`.
    pub chi: i64,
    /// `rank H₂ = χ − 1 + rank H₁`.
    pub h2_rank: usize,
    /// The shift group `C`.
    pub shift_group: GroupRendering,
    pub k0: GroupRendering,
    pub k1: GroupRendering,
    pub identity_class_order: u64,
    /// `exact-rho`, `rho-or-half` or `violated`.
    pub order_bound: String,
    /// Whether `rank C = χ − 1 + rank H₁`.
    pub rank_conjecture_holds: bool,
    /// Whether the identity class has order exactly `ρ`.
    pub order_conjecture_holds: bool,
}

/// Runs the complete analysis of a datum, checking (H3) up to
/// `h3_bound`.
pub fn analyze(datum: &VHDatum, h3_bound: i64) -> Result<AnalysisReport, ReportError> {
    if !datum.is_bm() {
        return Err(ReportError::InvalidDatum);
    }
    let tm = TransitionMatrices::build(datum).expect("datum was just validated");
    let h = check_h_conditions(&tm, h3_bound);
    let inv = conjecture_checks(datum, &tm)?;
    Ok(AnalysisReport {
        m: datum.m(),
        n: datum.n(),
        alpha: datum.alpha(),
        beta: datum.beta(),
        rho: datum.rho(),
        conditions: ConditionsSummary {
            h0: h.h0,
            h1: h.h1_commute && h.h1_product_zero_one,
            h2: h.h2,
            h3: h.h3(),
            h3_bound: h.h3_bound,
            h3_periods_checked: h.h3_witnesses.len() + h.h3_failures.len(),
            uniform_sums: h.sums_uniform(),
        },
        h1: GroupRendering::of(&inv.h1),
        chi: inv.chi,
        h2_rank: inv.h2_rank,
        shift_group: GroupRendering::of(&inv.ktheory.c),
        k0: GroupRendering::of(&inv.ktheory.k0),
        k1: GroupRendering::of(&inv.ktheory.k1),
        identity_class_order: u64::try_from(&inv.ktheory.identity_class_order)
            .expect("identity class order fits in u64"),
        order_bound: inv.ktheory.bound_check.to_string(),
        rank_conjecture_holds: inv.rank_conjecture_holds,
        order_conjecture_holds: inv.order_conjecture_holds,
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tick = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(
            f,
            "degrees ({}, {})   alpha = {}, beta = {}, rho = {}",
            self.m, self.n, self.alpha, self.beta, self.rho
        )?;
        writeln!(
            f,
            "conditions: H0 {}  H1 {}  H2 {}  H3 {} (bound {}, {} periods)  uniform sums {}",
            tick(self.conditions.h0),
            tick(self.conditions.h1),
            tick(self.conditions.h2),
            tick(self.conditions.h3),
            self.conditions.h3_bound,
            self.conditions.h3_periods_checked,
            tick(self.conditions.uniform_sums),
        )?;
        writeln!(f, "H1 = {}   [{}]", self.h1.display, self.h1.census)?;
        writeln!(f, "chi = {}, rank H2 = {}", self.chi, self.h2_rank)?;
        writeln!(
            f,
            "C  = {}   [{}]",
            self.shift_group.display, self.shift_group.census
        )?;
        writeln!(f, "K0 = K1 = {}", self.k0.display)?;
        writeln!(
            f,
            "identity class order = {} ({})",
            self.identity_class_order, self.order_bound
        )?;
        write!(
            f,
            "conjectures: rank {}  identity order {}",
            tick(self.rank_conjecture_holds),
            tick(self.order_conjecture_holds),
        )
    }
}

/// One classified group in the census of a degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    /// `"{α}x{β}.{index}"`, indices starting at 01 in canonical order.
    pub name: String,
    /// Number of data in the class.
    pub size: usize,
    /// Relator lines of the canonical datum.
    pub relators: Vec<String>,
    /// Abelianization in census notation.
    pub h1: String,
    /// Shift group in census notation.
    pub c: String,
}

/// Name of the `index`-th class (0-based) of `count` at degrees
/// `(2α, 2β)`: `"{α}x{β}.{index + 1}"`, zero-padded to the census width.
pub fn class_name(alpha: u32, beta: u32, index: usize, count: usize) -> String {
    let width = if count >= 100 { 3 } else { 2 };
    format!("{alpha}x{beta}.{:0width$}", index + 1, width = width)
}

/// Enumerates, classifies and tabulates all groups of one degree.
pub fn census(m: u32, n: u32, mode: EquivalenceMode) -> Result<Vec<CensusRow>, ReportError> {
    let data = enumerate_relation_sets(m, n)?;
    let classes = classify(&data, mode);
    classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            let datum = &class.canonical;
            let tm = TransitionMatrices::build(datum).expect("enumerated datum is valid");
            let inv = conjecture_checks(datum, &tm)?;
            Ok(CensusRow {
                name: class_name(datum.alpha(), datum.beta(), i, classes.len()),
                size: class.members.len(),
                relators: serialize_datum(datum)?
                    .lines()
                    .skip(1)
                    .map(String::from)
                    .collect(),
                h1: inv.h1.census_notation(),
                c: inv.ktheory.c.census_notation(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vhdatum::parse_datum;

    const FIXTURE_01: &str = "\
4 4
+1 +3 +1 -3
+1 +4 +1 -4
+2 +3 +2 -3
+2 +4 +2 -4
";

    #[test]
    fn analysis_of_fixture() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        let report = analyze(&datum, 2).unwrap();
        assert_eq!((report.m, report.n, report.rho), (4, 4, 1));
        assert!(report.conditions.h0 && report.conditions.h1 && report.conditions.h2);
        assert!(report.conditions.h3 && report.conditions.uniform_sums);
        assert_eq!(report.conditions.h3_periods_checked, 24);
        assert_eq!(report.h1.census, "2[(2)2]");
        assert_eq!(report.shift_group.census, "2[(2)4]");
        assert_eq!(report.k0.display, "Z^4 + Z/4 + Z/4");
        assert_eq!(report.identity_class_order, 1);
        assert_eq!(report.order_bound, "exact-rho");
        assert!(report.rank_conjecture_holds && report.order_conjecture_holds);
    }

    #[test]
    fn json_is_deterministic_and_ordered() {
        let datum = parse_datum(FIXTURE_01).unwrap();
        let report = analyze(&datum, 1).unwrap();
        let a = serde_json::to_string_pretty(&report).unwrap();
        let b = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(a, b);
        let m_pos = a.find("\"m\"").unwrap();
        let cond_pos = a.find("\"conditions\"").unwrap();
        let k0_pos = a.find("\"k0\"").unwrap();
        assert!(m_pos < cond_pos && cond_pos < k0_pos);
    }

    #[test]
    fn invalid_datum_is_rejected() {
        let datum = crate::vhdatum::VHDatum::from_tuples(
            2,
            2,
            [crate::vhdatum::RelationTuple::new(
                crate::vhdatum::Letter::new(1).unwrap(),
                crate::vhdatum::Letter::new(3).unwrap(),
                crate::vhdatum::Letter::new(3).unwrap(),
                crate::vhdatum::Letter::new(-1).unwrap(),
            )],
        );
        assert_eq!(analyze(&datum, 1).unwrap_err(), ReportError::InvalidDatum);
    }

    #[test]
    fn group_rendering_forms_agree() {
        let g = AbelianGroup::from_cyclic_orders([2i64, 12]).direct_sum(&AbelianGroup::free(1));
        let r = GroupRendering::of(&g);
        assert_eq!(r.rank, 1);
        assert_eq!(r.invariant_factors, vec![2, 12]);
        assert_eq!(r.primary, vec![2, 4, 3]);
        assert_eq!(r.census, "1[2,4,3]");
        assert_eq!(r.display, "Z + Z/2 + Z/12");
    }

    #[test]
    fn census_of_the_classified_degree() {
        let rows = census(4, 4, EquivalenceMode::WithSwap).unwrap();
        assert_eq!(rows.len(), 52);
        assert_eq!(rows.iter().map(|r| r.size).sum::<usize>(), 541);
        assert_eq!(rows[0].name, "2x2.01");
        assert_eq!(rows[51].name, "2x2.52");
        for row in &rows {
            assert_eq!(row.relators.len(), 4);
        }
    }
}
