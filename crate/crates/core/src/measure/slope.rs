//! Certified slope bounds and exact sublevel measures for the family
//! P_{u,v,w}(y) = 1 + y^u - y^w - y^v on (1/2, beta].
//!
//! Two regimes share the work. When u >= U(v) the derivative is certified
//! to stay below -m_v, so the sublevel set {|P| < eps} is squeezed into a
//! band of measure at most 4 eps / m_v (a strictly monotone function that
//! falls by at least m_v per unit step can spend at most 2 eps/m_v inside
//! any band of height 2 eps, once on the way down and never again; the
//! factor of two on top covers transferring the bound from y back to x).
//! For small u the degree of P is at most U*, and Polya's inequality (for
//! a monic real polynomial Q of degree n, the set {|Q| <= eps} has measure
//! at most 4 (eps/2)^(1/n), with equality for scaled Chebyshev polynomials)
//! gives the ceiling 4 (eps/2)^(1/U*): the leading coefficient of every
//! P_{u,v,w} is 1 or -1 after cancellation (or -2 never: u = w collapses
//! the y^u term entirely), so dividing by it never enlarges the threshold.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::certreal::{
    sublevel_measure, CertError, CertResult, Dyadic, DyadicInterval, IntPolynomial,
};

use super::{dyadic_to_rational, rational_pow, thresholds, BadSetConfig};

/// Working precision for sublevel domains and reported bounds.
const SUBLEVEL_BITS: u32 = 192;

/// P_{u,v,w}(y) = 1 + y^u - y^w - y^v with 1 <= v <= w <= u. Coefficient
/// cancellation (u = w, or w = v) is handled by plain polynomial addition.
pub fn build_p(u: u64, v: u64, w: u64) -> IntPolynomial {
    let one = IntPolynomial::constant(BigInt::one());
    let term = |k: u64| IntPolynomial::monomial(BigInt::one(), k as usize);
    one.add(&term(u)).sub(&term(w)).sub(&term(v))
}

/// Proof record that P'_{u,v,w} <= -m_v held on the whole domain: the
/// certified slope constant and how finely the interval had to be split.
#[derive(Clone, Debug)]
pub struct SlopeCertificate {
    m_v: BigRational,
    pieces: usize,
}

impl SlopeCertificate {
    /// m_v = (v/2) (1/2)^(v-1) = v 2^(-v), the certified uniform slope.
    pub fn m_v(&self) -> &BigRational {
        &self.m_v
    }

    pub fn pieces(&self) -> usize {
        self.pieces
    }
}

/// Certify that P'_{u,v,w}(y) <= -m_v on all of (1/2, beta] by adaptive
/// interval evaluation of the derivative. The certificate is semantic: it
/// can succeed for some u below U(v) (the threshold is crude), and it
/// refuses with an exact witness point whenever the derivative genuinely
/// climbs above -m_v.
pub fn slope_certificate(
    u: u64,
    v: u64,
    w: u64,
    config: &BadSetConfig,
) -> CertResult<SlopeCertificate> {
    check_ordering(u, v, w)?;
    let dp = build_p(u, v, w).derivative();
    // m_v = v/2^v is exactly dyadic
    let m_v_dyadic = Dyadic::from_int(BigInt::from(v)).mul(&Dyadic::power_of_two(-(v as i64)));
    let target = m_v_dyadic.neg();

    let beta = config.beta();
    let beta_up = DyadicInterval::from_ratio(beta.numer(), beta.denom(), SUBLEVEL_BITS)
        .hi()
        .clone();
    let half = Dyadic::power_of_two(-1);

    let mut pieces = 0usize;
    let mut stack = vec![(half, beta_up)];
    let width_floor = Dyadic::power_of_two(-64);
    while let Some((lo, hi)) = stack.pop() {
        let piece = DyadicInterval::new(lo.clone(), hi.clone(), SUBLEVEL_BITS);
        let ev = dp.eval_interval(&piece, SUBLEVEL_BITS);
        if ev.hi() <= &target {
            pieces += 1;
            continue;
        }
        // indecision: look for an exact refutation before splitting
        let mid = lo.average(&hi);
        if dp.eval_exact(&mid) > target {
            return Err(CertError::NotCertified {
                what: format!(
                    "derivative of P_({u},{v},{w}) exceeds -m_v at y = {}",
                    mid.to_f64()
                ),
            });
        }
        if hi.sub(&lo) < width_floor {
            return Err(CertError::NotCertified {
                what: "slope subdivision reached its width floor undecided".into(),
            });
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }

    Ok(SlopeCertificate {
        m_v: BigRational::new(BigInt::from(v), BigInt::one() << (v as usize)),
        pieces,
    })
}

/// Outcome of comparing the exact sublevel measure against its regime
/// ceiling. `bound` is an enclosure of the ceiling (exactly rational in
/// the slope regime, a U*-th root otherwise) and `ok` certifies
/// measure <= ceiling using the safe ends of both enclosures.
#[derive(Clone, Debug)]
pub struct SublevelCheck {
    measure: DyadicInterval,
    bound: DyadicInterval,
    slope_regime: bool,
    ok: bool,
}

impl SublevelCheck {
    /// Enclosure of the measure of {y in (1/2, beta] : |P_{u,v,w}(y)| < 2 beta^d}.
    pub fn measure(&self) -> &DyadicInterval {
        &self.measure
    }

    /// Enclosure of the ceiling the measure was compared against.
    pub fn bound(&self) -> &DyadicInterval {
        &self.bound
    }

    /// True when the ceiling was C_v beta^d (v >= V or u >= U(v)), false
    /// when the degree-capped root bound 4 (beta^d)^(1/U*) was used.
    pub fn slope_regime(&self) -> bool {
        self.slope_regime
    }

    pub fn ok(&self) -> bool {
        self.ok
    }
}

/// Exact sublevel measure of {y in (1/2, beta] : |P_{u,v,w}(y)| < 2 beta^d}
/// against the ceiling predicted for its regime.
pub fn sublevel_vs_bound(
    u: u64,
    v: u64,
    w: u64,
    d: u64,
    config: &BadSetConfig,
) -> CertResult<SublevelCheck> {
    check_ordering(u, v, w)?;
    let t = thresholds(config);
    if d < t.d0 {
        return Err(CertError::WindowViolation {
            what: format!("d = {d} below the threshold d0 = {}", t.d0),
        });
    }

    let p = build_p(u, v, w);
    let beta = config.beta();
    let eps = BigRational::from_integer(BigInt::from(2)) * rational_pow(&beta, d);

    // the domain right endpoint is bracketed; measuring up to the upper
    // bracket overcounts by at most the bracket width, subtracted below
    let beta_enc = DyadicInterval::from_ratio(beta.numer(), beta.denom(), SUBLEVEL_BITS);
    let slack = beta_enc.width();
    let domain = DyadicInterval::new(
        Dyadic::power_of_two(-1),
        beta_enc.hi().clone(),
        SUBLEVEL_BITS,
    );
    let raw = sublevel_measure(&p, &domain, &eps)?;
    let lo = {
        let shifted = raw.lo().sub(&slack);
        if shifted.signum() < 0 { Dyadic::zero() } else { shifted }
    };
    let measure = DyadicInterval::new(lo, raw.hi().clone(), SUBLEVEL_BITS);

    let slope_regime = v >= t.v_cut || t.u_of(v).map_or(false, |u_v| u >= u_v);
    let (bound, ok) = if slope_regime {
        // C_v beta^d with C_v = 4/m_v = 2^(v+2)/v, exactly rational
        let c_v = BigRational::new(BigInt::one() << ((v + 2) as usize), BigInt::from(v));
        let ceil = c_v * rational_pow(&beta, d);
        let ok = dyadic_to_rational(measure.hi()) <= ceil;
        (
            DyadicInterval::from_ratio(ceil.numer(), ceil.denom(), SUBLEVEL_BITS),
            ok,
        )
    } else {
        // 4 (eps/2)^(1/U*) = 4 beta^(d/U*); V >= 3 for every delta < 1,
        // so the small-u regime always has a nonempty v list behind it
        debug_assert!(t.u_star >= 1);
        let ceil = beta_enc
            .pow(d, SUBLEVEL_BITS)
            .nth_root(t.u_star as u32)
            .mul_pow2(2);
        let ok = measure.hi() <= ceil.lo();
        (ceil, ok)
    };

    Ok(SublevelCheck { measure, bound, slope_regime, ok })
}

fn check_ordering(u: u64, v: u64, w: u64) -> CertResult<()> {
    if v < 1 || v > w || w > u {
        return Err(CertError::BadParameter {
            what: format!("exponents must satisfy 1 <= v <= w <= u, got ({u}, {v}, {w})"),
        });
    }
    Ok(())
}
