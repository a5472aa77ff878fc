//! Exact measure of polynomial sublevel sets {t in domain : |p(t)| < eps}.
//!
//! The set boundary consists of roots of p - eps and p + eps. Both are
//! isolated and refined until pairwise disjoint; each surviving gap is
//! classified by one exact sample, so the returned enclosure is as tight
//! as the root enclosures themselves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::dyadic::Dyadic;
use super::error::{CertError, CertResult};
use super::interval::DyadicInterval;
use super::poly::IntPolynomial;
use super::roots::{isolate_in_window, refine_root};

/// Measure of {t in [domain.lo, domain.hi] : |p(t)| < eps}, enclosed from
/// both sides. eps must be positive.
pub fn sublevel_measure(
    p: &IntPolynomial,
    domain: &DyadicInterval,
    eps: &BigRational,
) -> CertResult<DyadicInterval> {
    if !eps.is_positive() {
        return Err(CertError::BadParameter {
            what: "sublevel threshold must be positive".into(),
        });
    }
    let bits = domain.bits();
    let (lo, hi) = (domain.lo().clone(), domain.hi().clone());
    if lo == hi {
        return Ok(DyadicInterval::point(Dyadic::zero(), bits));
    }

    // |p| < n/d  <=>  |d*p| < n, with integer threshold n.
    let scaled = p.mul_scalar(eps.denom());
    let threshold = eps.numer().clone();
    debug_assert!(threshold.is_positive());

    if scaled.degree().map_or(true, |d| d == 0) {
        let c = scaled.coeffs().first().cloned().unwrap_or_else(BigInt::zero);
        let w = hi.sub(&lo);
        return Ok(if c.abs() < threshold {
            DyadicInterval::new(w.clone(), w, bits)
        } else {
            DyadicInterval::point(Dyadic::zero(), bits)
        });
    }

    let upper = scaled.add_scalar(&-&threshold); // roots where p = +eps
    let lower = scaled.add_scalar(&threshold); // roots where p = -eps
    let mut boundaries = Vec::new();
    for f in [&upper, &lower] {
        for iso in isolate_in_window(f, &lo, &hi)? {
            boundaries.push((f.clone(), iso));
        }
    }

    // Refine every boundary root until all enclosures are strictly disjoint.
    let extra = 8 + 64 - (boundaries.len() as u64 + 1).leading_zeros();
    let mut target = bits + extra;
    let mut refined: Vec<DyadicInterval> = boundaries
        .iter()
        .map(|(f, iso)| refine_root(f, iso, target))
        .collect::<CertResult<_>>()?;
    refined.sort_by(|x, y| x.lo().cmp(y.lo()));
    for _ in 0..64 {
        if strictly_separated(&refined) {
            break;
        }
        target *= 2;
        refined = boundaries
            .iter()
            .map(|(f, iso)| refine_root(f, iso, target))
            .collect::<CertResult<_>>()?;
        refined.sort_by(|x, y| x.lo().cmp(y.lo()));
    }
    if !strictly_separated(&refined) {
        return Err(CertError::NotCertified {
            what: "boundary roots would not separate".into(),
        });
    }

    // Walk the gaps between consecutive boundaries; one exact sample
    // decides each gap because the predicate cannot change inside it.
    let mut cuts = vec![DyadicInterval::point(lo, bits)];
    cuts.extend(refined);
    cuts.push(DyadicInterval::point(hi, bits));
    let mut sum_lo = Dyadic::zero();
    let mut sum_hi = Dyadic::zero();
    for w in cuts.windows(2) {
        let (left, right) = (&w[0], &w[1]);
        if left.hi() >= right.lo() {
            continue; // touching cut points, no gap to classify
        }
        let s = left.hi().average(right.lo());
        if scaled.eval_exact(&s).abs() < Dyadic::from_int(threshold.clone()) {
            sum_lo = sum_lo.add(&right.lo().sub(left.hi()));
            sum_hi = sum_hi.add(&right.hi().sub(left.lo()));
        }
    }
    Ok(DyadicInterval::new(sum_lo, sum_hi, bits).round_outward(bits))
}

fn strictly_separated(sorted: &[DyadicInterval]) -> bool {
    sorted.windows(2).all(|w| w[0].hi() < w[1].lo())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn dom(lo: f64, hi: f64, bits: u32) -> DyadicInterval {
        DyadicInterval::new(
            Dyadic::from_f64(lo).unwrap(),
            Dyadic::from_f64(hi).unwrap(),
            bits,
        )
    }

    #[test]
    fn linear_band_has_width_two_eps() {
        // |t| < 1/4 on [-1, 1]: measure exactly 1/2
        let p = IntPolynomial::from_i64s(&[0, 1]);
        let m = sublevel_measure(&p, &dom(-1.0, 1.0, 80), &ratio(1, 4)).unwrap();
        let truth = Dyadic::from_f64(0.5).unwrap();
        assert!(m.contains(&truth));
        assert!(m.width() <= Dyadic::power_of_two(-70));
    }

    #[test]
    fn quadratic_band_matches_sqrt_eps() {
        // |t^2| < 1/16 on [-1, 1]: {|t| < 1/4}, measure 1/2
        let p = IntPolynomial::from_i64s(&[0, 0, 1]);
        let m = sublevel_measure(&p, &dom(-1.0, 1.0, 80), &ratio(1, 16)).unwrap();
        assert!(m.contains(&Dyadic::from_f64(0.5).unwrap()));
    }

    #[test]
    fn shifted_quadratic_counts_both_bands() {
        // |t^2 - 1| < 1/4 on [0, 2]: band around t=1 of length
        // (sqrt(5) - sqrt(3))/2 = 0.2520085849654562014...
        let p = IntPolynomial::from_i64s(&[-1, 0, 1]);
        let m = sublevel_measure(&p, &dom(0.0, 2.0, 96), &ratio(1, 4)).unwrap();
        assert!(m.lo() > &Dyadic::from_f64(0.2520085849654561).unwrap());
        assert!(m.hi() < &Dyadic::from_f64(0.2520085849654563).unwrap());
        assert!(m.width() <= Dyadic::power_of_two(-80));
    }

    #[test]
    fn threshold_above_sup_gives_full_domain() {
        // |t^2| < 2 on [-1, 1]: everything qualifies
        let p = IntPolynomial::from_i64s(&[0, 0, 1]);
        let m = sublevel_measure(&p, &dom(-1.0, 1.0, 80), &ratio(2, 1)).unwrap();
        assert!(m.contains(&Dyadic::from_int(2)));
    }

    #[test]
    fn threshold_below_inf_gives_zero() {
        // |t^2 + 2| < 1 never holds
        let p = IntPolynomial::from_i64s(&[2, 0, 1]);
        let m = sublevel_measure(&p, &dom(-1.0, 1.0, 80), &ratio(1, 1)).unwrap();
        assert!(m.contains(&Dyadic::zero()));
        assert!(m.hi() <= &Dyadic::power_of_two(-70));
    }

    #[test]
    fn strictness_matters_at_tangency() {
        // |t^2| < 1 on [0, 1]: set is [0, 1) up to the boundary root at 1,
        // measure exactly 1; enclosure must still be tight around 1
        let p = IntPolynomial::from_i64s(&[0, 0, 1]);
        let m = sublevel_measure(&p, &dom(0.0, 1.0, 80), &ratio(1, 1)).unwrap();
        assert!(m.contains(&Dyadic::one()));
        assert!(m.width() <= Dyadic::power_of_two(-70));
    }

    #[test]
    fn constant_polynomial_degenerates_cleanly() {
        let p3 = IntPolynomial::from_i64s(&[3]);
        let full = sublevel_measure(&p3, &dom(0.0, 2.0, 64), &ratio(4, 1)).unwrap();
        assert!(full.contains(&Dyadic::from_int(2)));
        let none = sublevel_measure(&p3, &dom(0.0, 2.0, 64), &ratio(2, 1)).unwrap();
        assert!(none.contains(&Dyadic::zero()) && none.hi().is_zero());
    }

    #[test]
    fn rejects_nonpositive_threshold() {
        let p = IntPolynomial::from_i64s(&[0, 1]);
        assert!(matches!(
            sublevel_measure(&p, &dom(0.0, 1.0, 64), &ratio(0, 1)),
            Err(CertError::BadParameter { .. })
        ));
        assert!(matches!(
            sublevel_measure(&p, &dom(0.0, 1.0, 64), &ratio(-1, 2)),
            Err(CertError::BadParameter { .. })
        ));
    }
}
