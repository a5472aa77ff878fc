//! Named algebraic constants, their conjugate spectra, and certified
//! elementary functions (pi, atan, sin, cos) used to reason about them.
//!
//! An [`AlgebraicReal`] is a minimal polynomial plus an isolating interval;
//! refinements are cached per bit count and safe to share across threads.

pub mod spectrum;
pub mod trig;

use std::collections::BTreeMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certreal::error::{CertError, CertResult};
use crate::certreal::roots::{isolate_in_window, refine_root};
use crate::certreal::{Dyadic, DyadicInterval, IntPolynomial};

pub use spectrum::{conjugate_spectrum, shift_angle, ComplexInterval, ConjugateSpectrum};

/// How we know (or decline to claim) that min_poly is irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrreducibilityWitness {
    /// Degree 1, trivially irreducible.
    Linear,
    /// No rational root exists; conclusive for degree 2 and 3.
    RationalRootTest,
    /// Standard fact recorded from the literature, not re-proven here.
    ExternalFact,
    /// Possibly reducible (e.g. a composed polynomial); the isolating
    /// interval still pins a unique root, which is all we rely on.
    NotClaimed,
}

/// A real algebraic number: polynomial with integer coefficients plus an
/// interval containing exactly one of its real roots.
pub struct AlgebraicReal {
    min_poly: IntPolynomial,
    iso: DyadicInterval,
    irreducibility: IrreducibilityWitness,
    cache: RwLock<BTreeMap<u32, DyadicInterval>>,
}

impl Clone for AlgebraicReal {
    fn clone(&self) -> AlgebraicReal {
        AlgebraicReal {
            min_poly: self.min_poly.clone(),
            iso: self.iso.clone(),
            irreducibility: self.irreducibility,
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlgebraicReal")
            .field("min_poly", &self.min_poly)
            .field("approx", &self.approx_f64())
            .finish()
    }
}

impl AlgebraicReal {
    fn new(
        min_poly: IntPolynomial,
        iso: DyadicInterval,
        irreducibility: IrreducibilityWitness,
    ) -> AlgebraicReal {
        AlgebraicReal {
            min_poly,
            iso,
            irreducibility,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.min_poly
    }

    pub fn iso(&self) -> &DyadicInterval {
        &self.iso
    }

    pub fn irreducibility(&self) -> IrreducibilityWitness {
        self.irreducibility
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().expect("nonzero polynomial")
    }

    /// Enclosure of width at most 2^-bits. Cached per bit count; the cache
    /// is write-once per key (idempotent under concurrent insertion).
    pub fn enclosure(&self, bits: u32) -> DyadicInterval {
        if let Some(hit) = self.cache.read().unwrap().get(&bits) {
            return hit.clone();
        }
        let refined = refine_root(&self.min_poly, &self.iso, bits)
            .expect("isolating interval invariant");
        self.cache
            .write()
            .unwrap()
            .entry(bits)
            .or_insert(refined)
            .clone()
    }

    pub fn approx_f64(&self) -> f64 {
        self.enclosure(64).midpoint().to_f64()
    }

    /// Positive real k-th root. The polynomial becomes p(t^k), possibly
    /// reducible, but the isolating interval still pins the unique root.
    pub fn kth_root(&self, k: usize) -> CertResult<AlgebraicReal> {
        if k < 2 {
            return Err(CertError::BadDegree { got: k, min: 2 });
        }
        if !self.enclosure(64).is_strictly_positive() {
            return Err(CertError::BadParameter {
                what: "k-th root requires a positive number".into(),
            });
        }
        let composed = self.min_poly.compose_power(k);
        // widen the enclosure of the root until its k-th root provably
        // isolates within the composed polynomial
        for bits in [128u32, 256, 512, 1024] {
            let cand = self.enclosure(bits).nth_root(k as u32);
            if refine_root(&composed, &cand, 32).is_ok() {
                return Ok(AlgebraicReal::new(
                    composed,
                    cand,
                    IrreducibilityWitness::NotClaimed,
                ));
            }
        }
        Err(CertError::NotCertified {
            what: "k-th root enclosure would not isolate".into(),
        })
    }
}

/// The unique real root of t^3 - t - 1, approximately 1.3247.
pub fn plastic_constant() -> AlgebraicReal {
    let p = IntPolynomial::from_i64s(&[-1, -1, 0, 1]);
    debug_assert!(!has_rational_root(&p), "cubic must be irreducible");
    let iso = single_root_in_unit_window(&p);
    AlgebraicReal::new(p, iso, IrreducibilityWitness::RationalRootTest)
}

/// The unique real root in (1, 2) of x^k - x^(k-1) - ... - x - 1.
pub fn k_fibonacci_root(k: usize) -> CertResult<AlgebraicReal> {
    if k < 2 {
        return Err(CertError::BadDegree { got: k, min: 2 });
    }
    let mut coeffs = vec![BigInt::from(-1); k];
    coeffs.push(BigInt::one());
    let p = IntPolynomial::new(coeffs);
    let iso = single_root_in_unit_window(&p);
    let witness = if k == 2 {
        // x^2 - x - 1 has no rational root (candidates +-1 both fail)
        debug_assert!(!has_rational_root(&p));
        IrreducibilityWitness::RationalRootTest
    } else {
        IrreducibilityWitness::ExternalFact
    };
    Ok(AlgebraicReal::new(p, iso, witness))
}

/// Golden ratio, the k = 2 case.
pub fn golden_ratio() -> AlgebraicReal {
    k_fibonacci_root(2).expect("k = 2 is valid")
}

/// A rational number as a degree-1 algebraic real.
pub fn rational(q: &BigRational) -> AlgebraicReal {
    let p = IntPolynomial::new(vec![-q.numer().clone(), q.denom().clone()]);
    let iso = DyadicInterval::from_ratio(q.numer(), q.denom(), 64);
    AlgebraicReal::new(p, iso, IrreducibilityWitness::Linear)
}

/// An exact dyadic value as a degree-1 algebraic real.
pub fn from_dyadic(v: &Dyadic) -> AlgebraicReal {
    let e = v.exp();
    let p = if e >= 0 {
        IntPolynomial::new(vec![-(v.mant() << e as u64), BigInt::one()])
    } else {
        IntPolynomial::new(vec![-v.mant().clone(), BigInt::one() << (-e) as u64])
    };
    let iso = DyadicInterval::point(v.clone(), 64);
    AlgebraicReal::new(p, iso, IrreducibilityWitness::Linear)
}

/// The unique real root of p inside the open window (lo, hi). Fails with
/// NotIsolating unless the window contains exactly one real root. The
/// polynomial is kept as given and may be reducible; the isolating
/// interval alone pins the number, so derived quantities stay certified.
pub fn root_in_window(
    p: &IntPolynomial,
    lo: &Dyadic,
    hi: &Dyadic,
) -> CertResult<AlgebraicReal> {
    let isos = isolate_in_window(p, lo, hi)?;
    if isos.len() != 1 {
        return Err(CertError::NotIsolating { count: isos.len() });
    }
    Ok(AlgebraicReal::new(
        p.clone(),
        isos.into_iter().next().unwrap(),
        IrreducibilityWitness::NotClaimed,
    ))
}

fn single_root_in_unit_window(p: &IntPolynomial) -> DyadicInterval {
    let isos = isolate_in_window(p, &Dyadic::one(), &Dyadic::from_int(2))
        .expect("nonzero polynomial");
    assert_eq!(isos.len(), 1, "constant must have exactly one root in (1, 2)");
    isos.into_iter().next().unwrap()
}

/// Rational root test: conclusive irreducibility evidence for quadratics
/// and cubics with no rational root.
pub fn has_rational_root(p: &IntPolynomial) -> bool {
    let (Some(c0), Some(lead)) = (p.coeffs().first(), p.leading()) else {
        return false;
    };
    if c0.is_zero() {
        return true; // root 0
    }
    for num in divisors(&c0.abs()) {
        for den in divisors(&lead.abs()) {
            for sign in [1i64, -1] {
                let q = BigRational::new(&num * BigInt::from(sign), den.clone());
                // p(n/d) = 0 iff sum c_i n^i d^(deg-i) = 0
                let mut acc = BigInt::zero();
                let deg = p.degree().unwrap();
                for (i, c) in p.coeffs().iter().enumerate() {
                    acc += c * q.numer().pow(i as u32) * q.denom().pow((deg - i) as u32);
                }
                if acc.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // trial division is fine for the tiny constant terms used here
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}
