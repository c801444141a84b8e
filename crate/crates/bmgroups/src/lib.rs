/*!
Groups acting simply transitively on products of two trees.

A *BM group* is determined by finite presentation data: two sets of
generators `A` and `B` (of even sizes `m = 2α` and `n = 2β`), each closed
under inversion, together with a set of `αβ` commuting-square relations
`a b = b' a'`.  Such a group acts freely and vertex-transitively on the
product of the homogeneous trees `T_m × T_n`, and every element factors
uniquely as (A-word)·(B-word).

This crate models that presentation data and the objects derived from it:

* [`vhdatum`] — generator alphabets, relation squares, datum files,
  validation of the defining conditions, and two-sided normal forms;
* [`subshift`] — the two-dimensional subshift of finite type whose tiles
  are the relation tuples, with its pair of transition matrices and the
  hypotheses (H0)–(H3) needed for the associated C*-algebra;
* [`ktheory`] — the shift group `C = coker(I − M₁ | I − M₂)` and the
  K-groups `K₀ = K₁ = C ⊕ ℤ^{rank C}` of the boundary algebra, plus the
  order of the class of the identity;
* [`invariants`] — abelianization, Euler characteristic and the expected
  second-homology rank, with cross-checks tying them to the K-groups;
* [`enumeration`] — exhaustive construction of all data of a given degree
  and their classification up to generator relabelling;
* [`mozes`] — the arithmetic family of data built from integer quaternions
  of prime norm;
* [`zmatrix`] — the exact integer linear algebra (Smith normal form,
  cokernels, element orders) everything above rests on;
* [`report`] and [`cli`] — a serialisable analysis report and the
  command-line interface.

# Quick start

```
use bmgroups::vhdatum::parse_datum;
use bmgroups::subshift::TransitionMatrices;
use bmgroups::ktheory::k_groups;

let text = "\
4 4
+1 +3 +1 -3
+1 +4 +1 -4
+2 +3 +2 -3
+2 +4 +2 -4
";
let datum = parse_datum(text)?;
assert!(datum.validate().is_bm());

let tm = TransitionMatrices::build(&datum)?;
let report = k_groups(&datum, &tm)?;
assert_eq!(report.c.to_string(), "Z^2 + Z/4 + Z/4");
assert_eq!(report.k0.to_string(), "Z^4 + Z/4 + Z/4");
# Ok::<(), Box<dyn std::error::Error>>(())
```
*/

pub mod cli;
pub mod enumeration;
pub mod invariants;
pub mod ktheory;
pub mod mozes;
pub mod report;
pub mod subshift;
pub mod vhdatum;
pub mod zmatrix;
