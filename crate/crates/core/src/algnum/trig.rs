//! Certified enclosures for pi, atan, sin, cos and rectangle arguments.
//!
//! Everything returns an interval that provably contains the exact value;
//! series remainders are bounded by the first omitted term (alternating
//! series with decreasing terms after the documented cutoff).

use num_bigint::BigInt;

use crate::certreal::error::{CertError, CertResult};
use crate::certreal::{Dyadic, DyadicInterval};

/// pi via Machin's formula 16*atan(1/5) - 4*atan(1/239).
pub fn pi(bits: u32) -> DyadicInterval {
    let work = bits + 16;
    let a5 = atan_inverse_int(5, work);
    let a239 = atan_inverse_int(239, work);
    a5.mul_pow2(4).sub(&a239.mul_pow2(2)).round_outward(bits)
}

/// atan(1/m) for integer m >= 2 by the alternating Taylor series.
fn atan_inverse_int(m: i64, work: u32) -> DyadicInterval {
    let m2 = BigInt::from(m * m);
    let tol = Dyadic::power_of_two(-i64::from(work));
    let mut power = BigInt::from(m); // m^(2j+1)
    let mut sum = DyadicInterval::from_ratio(&BigInt::from(1), &power, work);
    let mut j = 1u64;
    loop {
        power *= &m2;
        let den = &power * BigInt::from(2 * j + 1);
        let term = DyadicInterval::from_ratio(&BigInt::from(1), &den, work);
        sum = if j % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        if term.abs_upper() < tol {
            // alternating with strictly decreasing terms: remainder is
            // within +-(first omitted term)
            let b = term.abs_upper();
            return sum.add(&DyadicInterval::new(b.neg(), b, work));
        }
        j += 1;
    }
}

/// atan over an interval; strict monotonicity makes the enclosure the
/// hull of the endpoint enclosures (and keeps the internal reductions on
/// near-point intervals, where they terminate in a few steps).
pub fn atan_interval(x: &DyadicInterval, bits: u32) -> DyadicInterval {
    let work = bits + 16;
    let lo = atan_rec(&DyadicInterval::point(x.lo().clone(), work), work);
    if x.lo() == x.hi() {
        return lo.round_outward(bits);
    }
    let hi = atan_rec(&DyadicInterval::point(x.hi().clone(), work), work);
    lo.hull(&hi).round_outward(bits)
}

fn atan_rec(x: &DyadicInterval, work: u32) -> DyadicInterval {
    let five_eighths = Dyadic::new(BigInt::from(5), -3);
    if x.lo() >= &five_eighths.neg() && x.hi() <= &five_eighths {
        return atan_series(x, work);
    }
    if x.is_strictly_negative() || x.hi().is_zero() {
        return atan_rec(&x.neg(), work).neg();
    }
    if x.lo().signum() >= 0 {
        // atan(t) = pi/4 + atan((t-1)/(t+1)); the image of [0, inf) is
        // [-1, 1), so at most one further reduction step is ever needed
        let one = DyadicInterval::from_int(1, work);
        let u = x.sub(&one).div(&x.add(&one));
        return pi(work).mul_pow2(-2).add(&atan_rec(&u, work));
    }
    // wide sign-spanning argument: split at zero
    let zero = Dyadic::zero();
    let left = DyadicInterval::new(x.lo().clone(), zero.clone(), work);
    let right = DyadicInterval::new(zero, x.hi().clone(), work);
    atan_rec(&left, work).hull(&atan_rec(&right, work))
}

/// Taylor series for |x| <= 5/8: sum (-1)^j x^(2j+1)/(2j+1).
fn atan_series(x: &DyadicInterval, work: u32) -> DyadicInterval {
    let tol = Dyadic::power_of_two(-i64::from(work));
    let sq = x.square().round_outward(work);
    let mut odd_power = x.clone();
    let mut sum = x.clone();
    let mut j = 1u64;
    loop {
        odd_power = odd_power.mul(&sq).round_outward(work);
        let term = odd_power
            .mul(&DyadicInterval::from_ratio(
                &BigInt::from(1),
                &BigInt::from(2 * j + 1),
                work,
            ))
            .round_outward(work);
        sum = if j % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        // |x| <= 5/8 < 1, so term magnitudes strictly decrease and the
        // alternating remainder is within +-(next term) <= +-|x|^(2j+3)
        let next_bound = odd_power.mul(&sq).abs_upper();
        if next_bound < tol {
            return sum.add(&DyadicInterval::new(next_bound.neg(), next_bound, work));
        }
        j += 1;
        assert!(j < 100_000, "atan series failed to converge");
    }
}

/// Argument of the rectangle re + i*im, which must lie strictly inside
/// a half-plane (right, upper, or lower); the left half-plane spans the
/// branch cut and is rejected.
pub fn atan2_interval(
    im: &DyadicInterval,
    re: &DyadicInterval,
    bits: u32,
) -> CertResult<DyadicInterval> {
    let work = bits + 16;
    if re.is_strictly_positive() {
        return Ok(atan_interval(&im.div(re), work).round_outward(bits));
    }
    let half_pi = pi(work).mul_pow2(-1);
    if im.is_strictly_positive() {
        // arg = pi/2 - atan(re/im), valid on the whole upper half-plane
        return Ok(half_pi
            .sub(&atan_interval(&re.div(im), work))
            .round_outward(bits));
    }
    if im.is_strictly_negative() {
        // arg = -pi/2 - atan(re/im), valid on the whole lower half-plane
        return Ok(half_pi
            .neg()
            .sub(&atan_interval(&re.div(im), work))
            .round_outward(bits));
    }
    Err(CertError::NotCertified {
        what: "argument rectangle touches the branch cut half-plane".into(),
    })
}

/// Shift x by an integer multiple of 2*pi into roughly [-pi, pi].
fn reduce_mod_2pi(x: &DyadicInterval, work: u32) -> DyadicInterval {
    let two_pi = pi(work).mul_pow2(1);
    let ratio = x.midpoint().to_f64() / (2.0 * std::f64::consts::PI);
    if !ratio.is_finite() || ratio.abs() > 9e15 {
        return x.clone();
    }
    let mut k = ratio.round() as i64;
    let mut y = x.sub(&two_pi.mul_int(&BigInt::from(k)));
    // guard against damage from the f64 estimate: walk back into range
    let four = Dyadic::from_int(4);
    for _ in 0..4 {
        if y.midpoint() > four {
            k += 1;
        } else if y.midpoint() < four.neg() {
            k -= 1;
        } else {
            break;
        }
        y = x.sub(&two_pi.mul_int(&BigInt::from(k)));
    }
    y
}

/// cos over an interval: Taylor at the midpoint of the 2*pi-reduced
/// argument, widened by the half-width (|cos'| <= 1).
pub fn cos_interval(x: &DyadicInterval, bits: u32) -> DyadicInterval {
    let work = bits + 16;
    let y = reduce_mod_2pi(&x.with_bits(work), work);
    let m = y.midpoint();
    let c = cos_point(&m, work);
    let half_width = y.width().mul_pow2(-1).add(&Dyadic::power_of_two(-i64::from(work)));
    c.add(&DyadicInterval::new(half_width.neg(), half_width, work))
        .round_outward(bits)
}

/// sin over an interval, same scheme as cos_interval.
pub fn sin_interval(x: &DyadicInterval, bits: u32) -> DyadicInterval {
    let work = bits + 16;
    let y = reduce_mod_2pi(&x.with_bits(work), work);
    let m = y.midpoint();
    let s = sin_point(&m, work);
    let half_width = y.width().mul_pow2(-1).add(&Dyadic::power_of_two(-i64::from(work)));
    s.add(&DyadicInterval::new(half_width.neg(), half_width, work))
        .round_outward(bits)
}

/// cos at a dyadic point with |m| <= 8 via the alternating Taylor series.
fn cos_point(m: &Dyadic, work: u32) -> DyadicInterval {
    trig_series(m, work, false)
}

/// sin at a dyadic point with |m| <= 8.
fn sin_point(m: &Dyadic, work: u32) -> DyadicInterval {
    trig_series(m, work, true)
}

fn trig_series(m: &Dyadic, work: u32, odd: bool) -> DyadicInterval {
    assert!(
        m.abs() <= Dyadic::from_int(8),
        "trig series argument must be reduced first"
    );
    let tol = Dyadic::power_of_two(-i64::from(work));
    let m_sq = DyadicInterval::point(m.clone(), work).square().round_outward(work);
    // term_0 = m (sin) or 1 (cos); term_{j+1} = -term_j * m^2 / (d1*d2)
    let mut term = if odd {
        DyadicInterval::point(m.clone(), work)
    } else {
        DyadicInterval::from_int(1, work)
    };
    let mut sum = term.clone();
    let mut n = if odd { 1u64 } else { 0u64 }; // degree of current term
    loop {
        let d = BigInt::from((n + 1) * (n + 2));
        term = term
            .mul(&m_sq)
            .mul(&DyadicInterval::from_ratio(&BigInt::from(1), &d, work))
            .round_outward(work);
        n += 2;
        sum = if (n / 2) % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        // once (n+1)(n+2) > m^2 the terms strictly decrease, making the
        // alternating remainder at most the next term in magnitude
        let decreasing = Dyadic::from_int((n + 1) * (n + 2)) > m_sq.abs_upper();
        let bound = term.abs_upper();
        if decreasing && bound < tol {
            return sum.add(&DyadicInterval::new(bound.neg(), bound, work));
        }
        assert!(n < 100_000, "trig series failed to converge");
    }
}
