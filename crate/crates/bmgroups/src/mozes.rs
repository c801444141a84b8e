/*!
Arithmetic data from pairs of primes, after Mozes.

For a prime `p ≡ 1 (mod 4)` the integer quaternions of norm `p` with odd
positive real part and even imaginary parts form a set `Ã(p)` of exactly
`p + 1` elements, closed under conjugation, and quaternion conjugation
realises inversion modulo the centre.  Given two distinct such primes
`p ≠ l`, every product `a·b` with `a ∈ Ã(p)`, `b ∈ Ã(l)` factors the other
way around, uniquely up to sign:

```text
a · b  =  ± b′ · a′        (b′ ∈ Ã(l), a′ ∈ Ã(p)).
```

Reading each such identity as a commuting square `(a, b, b′, a′)` yields a
datum of degree `(p + 1, l + 1)` — the quotient of the lattice action on
`T_{p+1} × T_{l+1}` coming from the quaternion algebra ramified nowhere
relevant.  Its abelianization depends only on
`r = gcd((p−1)/4, (l−1)/4, 6)`, for which [`conjectured_h1`] returns the
closed form observed in every computed case.
*/

use crate::vhdatum::{Letter, RelationTuple, VHDatum};
use crate::zmatrix::AbelianGroup;
use std::collections::HashMap;
use std::ops::Mul;

/// Errors from the arithmetic construction.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MozesError {
    /// Both parameters must be prime.
    #[error("{0} is not prime")]
    NotPrime(u32),
    /// Both primes must be `≡ 1 (mod 4)` so that the generator counts
    /// `p + 1` are even and the real part can be normalised odd.
    #[error("{0} is not congruent to 1 modulo 4")]
    NotOneModFour(u32),
    /// The two primes must differ.
    #[error("the two primes must be distinct (both are {0})")]
    EqualPrimes(u32),
}

/// An integer (Lipschitz) quaternion `a₀ + a₁i + a₂j + a₃k`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Quaternion {
    pub a0: i64,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
}

impl Quaternion {
    pub fn new(a0: i64, a1: i64, a2: i64, a3: i64) -> Self {
        Quaternion { a0, a1, a2, a3 }
    }

    /// The conjugate `a₀ − a₁i − a₂j − a₃k`, inverse up to the norm.
    pub fn conjugate(self) -> Self {
        Quaternion::new(self.a0, -self.a1, -self.a2, -self.a3)
    }

    /// The reduced norm `a₀² + a₁² + a₂² + a₃²`.
    pub fn norm(self) -> i64 {
        self.a0 * self.a0 + self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3
    }

    /// `self` or `−self`, whichever has positive leading nonzero
    /// component — a canonical representative modulo the central `±1`.
    fn sign_normalized(self) -> Self {
        let lead = [self.a0, self.a1, self.a2, self.a3]
            .into_iter()
            .find(|&c| c != 0)
            .unwrap_or(0);
        if lead < 0 {
            Quaternion::new(-self.a0, -self.a1, -self.a2, -self.a3)
        } else {
            self
        }
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, rhs: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.a0, self.a1, self.a2, self.a3);
        let (b0, b1, b2, b3) = (rhs.a0, rhs.a1, rhs.a2, rhs.a3);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u32) -> Result<(), MozesError> {
    if !is_prime(p) {
        Err(MozesError::NotPrime(p))
    } else if p % 4 != 1 {
        Err(MozesError::NotOneModFour(p))
    } else {
        Ok(())
    }
}

/// The `p + 1` quaternions of norm `p` with `a₀` odd positive and
/// `a₁, a₂, a₃` even, sorted componentwise.
pub fn generator_set(p: u32) -> Result<Vec<Quaternion>, MozesError> {
    check_prime(p)?;
    let target = i64::from(p);
    let r = (target as f64).sqrt() as i64 + 1;
    let odds: Vec<i64> = (1..=r).filter(|v| v % 2 == 1).collect();
    let evens: Vec<i64> = (-r..=r).filter(|v| v % 2 == 0).collect();
    let mut out = Vec::new();
    for &a0 in &odds {
        for &a1 in &evens {
            for &a2 in &evens {
                for &a3 in &evens {
                    let q = Quaternion::new(a0, a1, a2, a3);
                    if q.norm() == target {
                        out.push(q);
                    }
                }
            }
        }
    }
    out.sort();
    debug_assert_eq!(out.len(), (p + 1) as usize);
    Ok(out)
}

/// Assigns table letters `base+1, …, base+count` to a conjugation-closed
/// sorted generator set: the first unseen quaternion gets the next
/// positive letter and its conjugate the negative one.
fn letter_assignment(gens: &[Quaternion], base: u32) -> HashMap<Quaternion, Letter> {
    let mut map: HashMap<Quaternion, Letter> = HashMap::with_capacity(gens.len());
    let mut next = base as i32 + 1;
    for &q in gens {
        if map.contains_key(&q) {
            continue;
        }
        map.insert(q, Letter::new(next).expect("letter values start at 1"));
        map.insert(
            q.conjugate(),
            Letter::new(-next).expect("letter values start at 1"),
        );
        next += 1;
    }
    map
}

/// The degree-`(p + 1, l + 1)` datum of the prime pair, with letters in
/// table order of the underlying quaternions.
pub fn mozes_datum(p: u32, l: u32) -> Result<VHDatum, MozesError> {
    check_prime(p)?;
    check_prime(l)?;
    if p == l {
        return Err(MozesError::EqualPrimes(p));
    }
    let a_gens = generator_set(p)?;
    let b_gens = generator_set(l)?;
    let alpha = p.div_ceil(2);
    let beta = l.div_ceil(2);
    let a_letter = letter_assignment(&a_gens, 0);
    let b_letter = letter_assignment(&b_gens, alpha);

    // Factorisations the other way round, keyed by the product up to sign.
    let mut reversed: HashMap<Quaternion, (Quaternion, Quaternion)> =
        HashMap::with_capacity(a_gens.len() * b_gens.len());
    for &bq in &b_gens {
        for &aq in &a_gens {
            let previous = reversed.insert((bq * aq).sign_normalized(), (bq, aq));
            assert!(previous.is_none(), "products b′·a′ collide up to sign");
        }
    }

    let mut tuples = Vec::with_capacity(a_gens.len() * b_gens.len());
    for &aq in &a_gens {
        for &bq in &b_gens {
            let (bpq, apq) = reversed[&(aq * bq).sign_normalized()];
            tuples.push(RelationTuple::new(
                a_letter[&aq],
                b_letter[&bq],
                b_letter[&bpq],
                a_letter[&apq],
            ));
        }
    }
    Ok(VHDatum::from_tuples(alpha, beta, tuples))
}

/// The closed-form abelianization of the datum of `(p, l)`, depending
/// only on `r = gcd((p−1)/4, (l−1)/4, 6)`.
pub fn conjectured_h1(p: u32, l: u32) -> Result<AbelianGroup, MozesError> {
    check_prime(p)?;
    check_prime(l)?;
    if p == l {
        return Err(MozesError::EqualPrimes(p));
    }
    let r = num_integer::gcd(num_integer::gcd((p - 1) / 4, (l - 1) / 4), 6);
    let orders: &[i64] = match r {
        1 => &[2, 4, 4, 4],
        2 => &[2, 2, 2, 8, 8],
        3 => &[2, 3, 4, 4, 4],
        6 => &[2, 2, 2, 3, 8, 8],
        _ => unreachable!("r divides 6"),
    };
    Ok(AbelianGroup::from_cyclic_orders(orders.iter().copied()))
}
