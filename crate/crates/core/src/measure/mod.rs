//! Measure-theoretic side of the additive-collision analysis on (1, 2).
//!
//! For x in I_delta = [1+delta, 2) a collision floor(x^a) + floor(x^d) =
//! floor(x^b) + floor(x^c) forces |x^d + x^a - x^b - x^c| < 2. Substituting
//! y = 1/x turns that into a small value of the integer polynomial
//! P_{u,v,w}(y) = 1 + y^u - y^w - y^v on (1/2, beta], beta = 1/(1+delta),
//! where u = d-a, w = d-b, v = d-c. Everything here revolves around that
//! family: the exact threshold constants that split the (u, v, w) space
//! into regimes, certified derivative bounds, exact sublevel measures
//! against their predicted ceilings, and a seeded Monte Carlo scan of how
//! often random bases collide at a given top index.
//!
//! The angular-window half lives in `orbit` and `windows`: certified visits
//! of n*theta mod 1 to an arc, the predicted collision windows for the
//! plastic and k-Fibonacci bases, and the envelope certificate for the sign
//! of the residual E_n.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::certreal::{CertError, CertResult, Dyadic};

mod montecarlo;
mod orbit;
mod slope;
mod windows;

pub use montecarlo::{scan_bad_measure, DecayCurve, DecayRow};
pub use orbit::{orbit_visits, star_discrepancy, OrbitStats};
pub use slope::{build_p, slope_certificate, sublevel_vs_bound, SlopeCertificate, SublevelCheck};
pub use windows::{
    arc_visit_mod_2pi, en_sign_certificate, en_tail_threshold, kfib_window, plastic_window,
    KfibWindow,
};

/// Parameters of one bad-set experiment: the slab I_delta = [1+delta, 2),
/// the range of top indices d to attribute collisions to, and the sampling
/// budget. delta is held exactly as a rational so every derived constant
/// (beta, thresholds, sublevel bounds) stays exact.
#[derive(Clone, Debug)]
pub struct BadSetConfig {
    delta: BigRational,
    d_range: (u64, u64),
    sample_count: u64,
    rng_seed: u64,
    scan_depth: u64,
}

impl BadSetConfig {
    /// Requires 0 < delta < 1 (so the slab has positive length and
    /// beta = 1/(1+delta) lies in (1/2, 1)), a nonempty d range, and a
    /// scan depth covering it.
    pub fn new(
        delta: BigRational,
        d_range: (u64, u64),
        sample_count: u64,
        rng_seed: u64,
        scan_depth: u64,
    ) -> CertResult<BadSetConfig> {
        if !delta.is_positive() || delta >= BigRational::one() {
            return Err(CertError::BadParameter {
                what: "delta must lie strictly between 0 and 1".into(),
            });
        }
        if d_range.0 < 1 || d_range.0 > d_range.1 {
            return Err(CertError::BadParameter {
                what: "d range must be nonempty with d_lo >= 1".into(),
            });
        }
        if sample_count == 0 {
            return Err(CertError::BadParameter {
                what: "sample count must be positive".into(),
            });
        }
        if scan_depth < d_range.1 || scan_depth < 2 {
            return Err(CertError::BadParameter {
                what: "scan depth must cover the d range".into(),
            });
        }
        Ok(BadSetConfig { delta, d_range, sample_count, rng_seed, scan_depth })
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    /// beta = 1/(1+delta), the reciprocal of the slab's left endpoint.
    pub fn beta(&self) -> BigRational {
        (BigRational::one() + &self.delta).recip()
    }

    /// alpha = 1/2, the reciprocal of the right endpoint; kept as a method
    /// so call sites read like the inequalities they implement.
    pub fn alpha_sub(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }

    /// Length of I_delta = [1+delta, 2), which is 1 - delta.
    pub fn interval_length(&self) -> BigRational {
        BigRational::one() - &self.delta
    }

    pub fn d_range(&self) -> (u64, u64) {
        self.d_range
    }

    pub fn sample_count(&self) -> u64 {
        self.sample_count
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn scan_depth(&self) -> u64 {
        self.scan_depth
    }
}

/// The exact integer constants that organize the (u, v, w) regime split
/// for a given delta. All are least integers satisfying their defining
/// rational inequality, so they are reproducible across machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// Least d0 with 2*beta^d0 <= 1/4.
    pub d0: u64,
    /// Least V with beta^V <= 1/8.
    pub v_cut: u64,
    /// (v, U(v)) for v = 1..V-1: U(v) is the least U such that
    /// u*beta^(u-1) <= (v/4)*alpha^(v-1) for every u >= U.
    pub u_of_v: Vec<(u64, u64)>,
    /// max of U(v) over 1 <= v <= V-1 (0 when V <= 1 and the list is empty).
    pub u_star: u64,
}

impl Thresholds {
    /// U(v) for small v, None when v >= V (where the sublevel set is empty
    /// and no slope constant is needed).
    pub fn u_of(&self, v: u64) -> Option<u64> {
        self.u_of_v.iter().find(|&&(vv, _)| vv == v).map(|&(_, u)| u)
    }
}

/// Threshold constants for any positive delta. This deliberately accepts
/// delta >= 1 (where the slab itself degenerates) because the defining
/// inequalities only involve beta; `BadSetConfig` is stricter.
pub fn thresholds_for_delta(delta: &BigRational) -> CertResult<Thresholds> {
    if !delta.is_positive() {
        return Err(CertError::BadParameter {
            what: "delta must be positive".into(),
        });
    }
    let beta = (BigRational::one() + delta).recip();
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let eighth = BigRational::new(BigInt::one(), BigInt::from(8));

    // least d0 with 2 beta^d0 <= 1/4, i.e. beta^d0 <= 1/8
    let two = BigRational::from_integer(BigInt::from(2));
    let d0 = least_power_below(&beta, &(quarter.clone() / &two));
    let v_cut = least_power_below(&beta, &eighth);

    // u * beta^(u-1) is nonincreasing once u >= beta/(1-beta) = 1/delta,
    // so the largest violating u is found by scanning until the sequence
    // is both past that point and under the target.
    let one_over_delta = delta.recip();
    let mut u_of_v = Vec::new();
    let mut u_star = 0u64;
    let alpha = BigRational::new(BigInt::one(), BigInt::from(2));
    for v in 1..v_cut {
        let rhs = BigRational::from_integer(BigInt::from(v))
            * rational_pow(&alpha, v - 1)
            / BigRational::from_integer(BigInt::from(4));
        let mut last_bad = 0u64;
        let mut u = 1u64;
        let mut beta_pow = BigRational::one(); // beta^(u-1)
        loop {
            let f = BigRational::from_integer(BigInt::from(u)) * &beta_pow;
            if f > rhs {
                last_bad = u;
            } else if BigRational::from_integer(BigInt::from(u)) >= one_over_delta {
                break;
            }
            u += 1;
            beta_pow *= &beta;
            assert!(u < 1_000_000, "threshold scan failed to terminate");
        }
        let u_v = last_bad + 1;
        u_star = u_star.max(u_v);
        u_of_v.push((v, u_v));
    }

    Ok(Thresholds { d0, v_cut, u_of_v, u_star })
}

/// Threshold constants for a validated experiment configuration.
pub fn thresholds(config: &BadSetConfig) -> Thresholds {
    // the config invariant 0 < delta < 1 makes the inner call infallible
    thresholds_for_delta(config.delta()).expect("config delta is positive")
}

/// Least n >= 1 with base^n <= target, for 0 < base < 1 and target > 0.
fn least_power_below(base: &BigRational, target: &BigRational) -> u64 {
    debug_assert!(base.is_positive() && base < &BigRational::one());
    let mut n = 1u64;
    let mut p = base.clone();
    while &p > target {
        n += 1;
        p *= base;
        assert!(n < 1_000_000, "power scan failed to terminate");
    }
    n
}

/// base^exp by repeated squaring, exact.
pub(crate) fn rational_pow(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Exact value of a dyadic as a rational, for comparisons against rational
/// bounds without rounding.
pub(crate) fn dyadic_to_rational(d: &Dyadic) -> BigRational {
    let mant = d.mant().clone();
    let exp = d.exp();
    if exp >= 0 {
        BigRational::from_integer(mant << (exp as usize))
    } else {
        BigRational::new(mant, BigInt::one() << ((-exp) as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unit_delta_thresholds() {
        // beta = 1/2: 2*(1/2)^3 = 1/4 and (1/2)^3 = 1/8, both borderline
        let t = thresholds_for_delta(&ratio(1, 1)).unwrap();
        assert_eq!(t.d0, 3);
        assert_eq!(t.v_cut, 3);
        assert_eq!(t.u_of_v, vec![(1, 6), (2, 6)]);
        assert_eq!(t.u_star, 6);
    }

    #[test]
    fn half_delta_thresholds() {
        let t = thresholds_for_delta(&ratio(1, 2)).unwrap();
        assert_eq!(t.d0, 6);
        assert_eq!(t.v_cut, 6);
        assert_eq!(
            t.u_of_v,
            vec![(1, 11), (2, 11), (3, 12), (4, 13), (5, 14)]
        );
        assert_eq!(t.u_star, 14);
        assert_eq!(t.u_of(3), Some(12));
        assert_eq!(t.u_of(6), None);
    }

    #[test]
    fn tenth_delta_thresholds() {
        let t = thresholds_for_delta(&ratio(1, 10)).unwrap();
        assert_eq!(t.d0, 22);
        assert_eq!(t.v_cut, 22);
        assert_eq!(t.u_of(1), Some(59));
        assert_eq!(t.u_of(21), Some(184));
        assert_eq!(t.u_star, 184);
        assert_eq!(t.u_of_v.len(), 21);
    }

    #[test]
    fn thresholds_shrink_as_delta_grows() {
        let mut prev: Option<Thresholds> = None;
        for (n, d) in [(1i64, 10i64), (1, 4), (1, 2), (3, 4), (1, 1), (2, 1)] {
            let t = thresholds_for_delta(&ratio(n, d)).unwrap();
            if let Some(p) = prev {
                assert!(t.d0 <= p.d0, "d0 must not grow with delta");
                assert!(t.v_cut <= p.v_cut, "V must not grow with delta");
            }
            prev = Some(t);
        }
    }

    #[test]
    fn defining_inequalities_hold_and_are_tight() {
        for (n, d) in [(1i64, 1i64), (1, 2), (1, 10), (2, 7)] {
            let delta = ratio(n, d);
            let beta = (BigRational::one() + &delta).recip();
            let t = thresholds_for_delta(&delta).unwrap();
            let two = ratio(2, 1);
            let quarter = ratio(1, 4);
            let eighth = ratio(1, 8);
            assert!(&two * rational_pow(&beta, t.d0) <= quarter);
            assert!(rational_pow(&beta, t.v_cut) <= eighth);
            if t.d0 > 1 {
                assert!(&two * rational_pow(&beta, t.d0 - 1) > quarter);
            }
            if t.v_cut > 1 {
                assert!(rational_pow(&beta, t.v_cut - 1) > eighth);
            }
            let alpha = ratio(1, 2);
            for &(v, u_v) in &t.u_of_v {
                let rhs = ratio(v as i64, 4) * rational_pow(&alpha, v - 1);
                // holds at U(v) and for a stretch beyond
                for u in u_v..u_v + 32 {
                    let f = BigRational::from_integer(BigInt::from(u))
                        * rational_pow(&beta, u - 1);
                    assert!(f <= rhs, "u*beta^(u-1) must stay under the target");
                }
                // and U(v) is least: u = U(v)-1 must violate
                if u_v > 1 {
                    let u = u_v - 1;
                    let f = BigRational::from_integer(BigInt::from(u))
                        * rational_pow(&beta, u - 1);
                    assert!(f > rhs, "U(v) must be the least admissible integer");
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        let ok = BadSetConfig::new(ratio(1, 2), (1, 40), 100, 7, 60);
        assert!(ok.is_ok());
        let c = ok.unwrap();
        assert_eq!(c.beta(), ratio(2, 3));
        assert_eq!(c.interval_length(), ratio(1, 2));
        assert_eq!(c.alpha_sub(), ratio(1, 2));

        assert!(matches!(
            BadSetConfig::new(ratio(1, 1), (1, 40), 100, 7, 60),
            Err(CertError::BadParameter { .. })
        ));
        assert!(matches!(
            BadSetConfig::new(ratio(0, 1), (1, 40), 100, 7, 60),
            Err(CertError::BadParameter { .. })
        ));
        assert!(matches!(
            BadSetConfig::new(ratio(1, 2), (5, 4), 100, 7, 60),
            Err(CertError::BadParameter { .. })
        ));
        assert!(matches!(
            BadSetConfig::new(ratio(1, 2), (1, 40), 0, 7, 60),
            Err(CertError::BadParameter { .. })
        ));
        assert!(matches!(
            BadSetConfig::new(ratio(1, 2), (1, 40), 100, 7, 30),
            Err(CertError::BadParameter { .. })
        ));
    }

    #[test]
    fn rational_pow_matches_naive() {
        let b = ratio(2, 3);
        let mut naive = BigRational::one();
        for e in 0..20u64 {
            assert_eq!(rational_pow(&b, e), naive);
            naive *= &b;
        }
    }

    #[test]
    fn dyadic_rational_round_trip() {
        let d = Dyadic::from_f64(0.8125).unwrap(); // 13/16
        assert_eq!(dyadic_to_rational(&d), ratio(13, 16));
        let n = Dyadic::from_int(-6);
        assert_eq!(dyadic_to_rational(&n), ratio(-6, 1));
        assert_eq!(dyadic_to_rational(&Dyadic::zero()), ratio(0, 1));
    }
}
