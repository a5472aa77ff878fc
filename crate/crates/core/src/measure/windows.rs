//! Predicted collision windows from the angular analysis, and the envelope
//! certificate for the sign of the residual E_n = T_n - x^n.
//!
//! For the plastic base the residual is exactly 2 rho^n cos(n omega) with
//! rho the conjugate-pair modulus, so collisions are driven by where the
//! rotation n omega mod 2pi lands; `plastic_window` builds the arc that
//! forces the (m, m+2, m+3, m+4) pattern and certifies the four cosine
//! signs behind it on a grid of interior samples. For the k-Fibonacci bases
//! the pair only dominates the remaining k-3 conjugates, so the analogous
//! arc `kfib_window` comes with a margin c0 = sin(eta), and the sign of E_n
//! is certified by `en_sign_certificate` whenever the main term
//! 2 rho^n cos(n omega) clears the tail envelope (k-3) rho2^n.

use num_bigint::BigInt;

use crate::algnum::trig::{cos_interval, pi, sin_interval};
use crate::algnum::ConjugateSpectrum;
use crate::certreal::{CertError, CertResult, Dyadic, DyadicInterval};

/// The k-Fibonacci collision arc J = (-pi/2 + eta, pi/2 - (delta+omega) - eta)
/// together with its cosine margin c0 = sin(eta): every angle t in J keeps
/// cos t, cos(t + delta), cos(t + delta + omega) all at least c0.
#[derive(Clone, Debug)]
pub struct KfibWindow {
    lo: DyadicInterval,
    hi: DyadicInterval,
    c0: DyadicInterval,
}

impl KfibWindow {
    pub fn lo(&self) -> &DyadicInterval {
        &self.lo
    }

    pub fn hi(&self) -> &DyadicInterval {
        &self.hi
    }

    /// The guaranteed cosine margin sin(eta), strictly positive.
    pub fn c0(&self) -> &DyadicInterval {
        &self.c0
    }
}

/// The plastic collision arc I(omega) = (5pi/2 - 3 omega, 7pi/2 - 4 omega),
/// certified for an omega enclosure inside (3pi/4, 5pi/6). On `samples`
/// interior points t the four sign conditions cos t > 0, cos(t+2w) > 0,
/// cos(t+3w) < 0, cos(t+4w) < 0 are certified; they are what turn a visit
/// of the rotation orbit into a floor-power collision.
pub fn plastic_window(
    omega: &DyadicInterval,
    samples: usize,
    bits: u32,
) -> CertResult<(DyadicInterval, DyadicInterval)> {
    let work = bits + 32;
    let p = pi(work);
    let lower = p.mul_int(&BigInt::from(3)).mul_pow2(-2); // 3pi/4
    let upper = p
        .mul_int(&BigInt::from(5))
        .div(&DyadicInterval::from_int(6, work)); // 5pi/6
    if !(omega.lo() > lower.hi() && omega.hi() < upper.lo()) {
        return Err(CertError::WindowViolation {
            what: "omega enclosure must lie strictly inside (3pi/4, 5pi/6)".into(),
        });
    }

    let arc_lo = p.mul_int(&BigInt::from(5)).mul_pow2(-1).sub(&omega.mul_int(&BigInt::from(3)));
    let arc_hi = p.mul_int(&BigInt::from(7)).mul_pow2(-1).sub(&omega.mul_int(&BigInt::from(4)));
    if arc_lo.hi() >= arc_hi.lo() {
        return Err(CertError::EmptyWindow);
    }

    // interior grid: t_j = lo + j/(samples+1) * (hi - lo), kept strictly
    // inside by using the pessimistic ends of both endpoint enclosures
    let inner_lo = arc_lo.hi().clone();
    let inner_span = arc_hi.lo().sub(&inner_lo);
    for j in 1..=samples {
        let frac = DyadicInterval::from_ratio(&BigInt::from(j), &BigInt::from(samples + 1), work);
        let t = DyadicInterval::point(inner_lo.clone(), work)
            .add(&DyadicInterval::point(inner_span.clone(), work).mul(&frac));
        let checks: [(i64, i8); 4] = [(0, 1), (2, 1), (3, -1), (4, -1)];
        for (mult, want) in checks {
            let angle = if mult == 0 {
                t.clone()
            } else {
                t.add(&omega.mul_int(&BigInt::from(mult)))
            };
            let c = cos_interval(&angle, work);
            let good = if want > 0 {
                c.is_strictly_positive()
            } else {
                c.is_strictly_negative()
            };
            if !good {
                return Err(CertError::NotCertified {
                    what: format!(
                        "cosine sign check failed at sample {j} (offset {mult} omega)"
                    ),
                });
            }
        }
    }

    Ok((arc_lo.round_outward(bits), arc_hi.round_outward(bits)))
}

/// The k-Fibonacci arc J and its margin c0 for odd k >= 13, given
/// enclosures of the pair angle omega, the shift delta (both in (0, pi)),
/// and the slack eta with 0 < eta < (pi - (delta+omega))/4. Endpoint
/// samples of J are certified to keep all three shifted angles inside
/// (-pi/2 + eta, pi/2 - eta), where the cosine is at least sin(eta).
pub fn kfib_window(
    k: usize,
    omega: &DyadicInterval,
    delta_shift: &DyadicInterval,
    eta: &DyadicInterval,
    bits: u32,
) -> CertResult<KfibWindow> {
    if k < 13 || k % 2 == 0 {
        return Err(CertError::BadParameter {
            what: format!("window analysis needs odd k >= 13, got {k}"),
        });
    }
    let work = bits + 32;
    let p = pi(work);
    let sum = delta_shift.add(omega);
    let three_quarter = p.mul_int(&BigInt::from(3)).mul_pow2(-2);
    if !(sum.hi() < three_quarter.lo()) {
        return Err(CertError::WindowViolation {
            what: "delta + omega must stay below 3pi/4".into(),
        });
    }
    if eta.lo() <= &Dyadic::zero() {
        return Err(CertError::BadParameter {
            what: "eta must be strictly positive".into(),
        });
    }
    let quarter_gap = p.sub(&sum).mul_pow2(-2); // (pi - (delta+omega))/4
    if !(eta.hi() < quarter_gap.lo()) {
        return Err(CertError::WindowViolation {
            what: "eta must stay below (pi - (delta+omega))/4".into(),
        });
    }

    let half_pi = p.mul_pow2(-1);
    let j_lo = eta.sub(&half_pi);
    let j_hi = half_pi.sub(&sum).sub(eta);
    if j_lo.hi() >= j_hi.lo() {
        return Err(CertError::EmptyWindow);
    }

    let c0 = sin_interval(eta, work);
    if !c0.is_strictly_positive() {
        return Err(CertError::NotCertified {
            what: "sin(eta) enclosure is not strictly positive".into(),
        });
    }

    // strip bounds the three angles must respect
    let strip_lo = j_lo.clone(); // -pi/2 + eta
    let strip_hi = half_pi.sub(eta); // pi/2 - eta
    let xi = j_hi.lo().sub(j_lo.hi()).mul_pow2(-6);
    let samples = [
        DyadicInterval::point(j_lo.hi().add(&xi), work),
        DyadicInterval::point(j_hi.lo().sub(&xi), work),
    ];
    for t in &samples {
        let angles = [t.clone(), t.add(delta_shift), t.add(&sum)];
        for a in &angles {
            if !(a.lo() > strip_lo.hi() && a.hi() < strip_hi.lo()) {
                return Err(CertError::NotCertified {
                    what: "endpoint sample leaves the cosine margin strip".into(),
                });
            }
        }
    }

    Ok(KfibWindow {
        lo: j_lo.round_outward(bits),
        hi: j_hi.round_outward(bits),
        c0: c0.round_outward(bits),
    })
}

/// Certified membership of n*step mod 2pi in the arc (lo, hi), where the
/// arc sits well inside (-2, 2) so the reduced representative is
/// unambiguous. Some(true)/Some(false) are certified; None means the
/// enclosure straddles an arc endpoint.
pub fn arc_visit_mod_2pi(
    step: &DyadicInterval,
    n: u64,
    lo: &DyadicInterval,
    hi: &DyadicInterval,
    bits: u32,
) -> CertResult<Option<bool>> {
    let two = Dyadic::from_int(2);
    if !(lo.lo() > &two.neg() && hi.hi() < &two && lo.hi() < hi.lo()) {
        return Err(CertError::BadParameter {
            what: "arc must be nonempty and lie inside (-2, 2)".into(),
        });
    }
    let work = bits + 16;
    let two_pi = pi(work).mul_pow2(1);
    let angle = step.mul_int(&BigInt::from(n));
    let ratio = angle.midpoint().to_f64() / (2.0 * std::f64::consts::PI);
    if !ratio.is_finite() || ratio.abs() > 9e15 {
        return Err(CertError::ExponentOverflow {
            op: "arc reduction".into(),
        });
    }
    let mut k = ratio.round() as i64;
    let mut y = angle.sub(&two_pi.mul_int(&BigInt::from(k)));
    // guard walk, mirroring the trig reduction: land roughly in [-pi, pi]
    let four = Dyadic::from_int(4);
    for _ in 0..4 {
        if y.midpoint() > four {
            k += 1;
        } else if y.midpoint() < four.neg() {
            k -= 1;
        } else {
            break;
        }
        y = angle.sub(&two_pi.mul_int(&BigInt::from(k)));
    }
    if y.lo() > lo.hi() && y.hi() < hi.lo() {
        return Ok(Some(true));
    }
    if y.hi() <= lo.lo() || y.lo() >= hi.hi() {
        return Ok(Some(false));
    }
    Ok(None)
}

/// Least n with (k-3) (rho2/rho)^n <= c0: past this index the tail of k-3
/// small conjugates can never overturn a cosine that clears the margin c0.
pub fn en_tail_threshold(
    k: usize,
    spectrum: &ConjugateSpectrum,
    c0: &DyadicInterval,
) -> CertResult<u64> {
    if spectrum.roots().len() != k {
        return Err(CertError::BadParameter {
            what: "spectrum degree does not match k".into(),
        });
    }
    if !c0.is_strictly_positive() {
        return Err(CertError::BadParameter {
            what: "margin c0 must be strictly positive".into(),
        });
    }
    let weight = k.saturating_sub(3);
    if weight == 0 {
        return Ok(1);
    }
    let rho = spectrum
        .dominant_pair_modulus()
        .ok_or_else(|| CertError::BadParameter {
            what: "tail threshold needs a complex dominant pair".into(),
        })?;
    let rho2 = spectrum
        .second_modulus()
        .ok_or_else(|| CertError::BadParameter {
            what: "tail threshold needs a second modulus".into(),
        })?;
    let ratio = rho2.div(rho);
    if !(ratio.hi() < &Dyadic::one()) {
        return Err(CertError::NotCertified {
            what: "rho2/rho is not certified below 1".into(),
        });
    }
    let w = BigInt::from(weight);
    let mut pow = ratio.clone();
    for n in 1..=1_000_000u64 {
        if pow.mul_int(&w).hi() <= c0.lo() {
            return Ok(n);
        }
        pow = pow.mul(&ratio);
    }
    Err(CertError::PrecisionExhausted { n: 1_000_000 })
}

/// Certified sign of E_n = T_n - x^n through the envelope
/// E_n = 2 rho^n cos(n omega) + R with |R| <= (k-3) rho2^n. Returns +1 or
/// -1 only when the main term clears the envelope; Undecided otherwise.
/// For k = 3 the envelope is empty and the certificate is exact.
pub fn en_sign_certificate(
    k: usize,
    n: u64,
    spectrum: &ConjugateSpectrum,
) -> CertResult<i8> {
    if spectrum.roots().len() != k {
        return Err(CertError::BadParameter {
            what: "spectrum degree does not match k".into(),
        });
    }
    let rho = spectrum
        .dominant_pair_modulus()
        .ok_or_else(|| CertError::BadParameter {
            what: "sign certificate needs a complex dominant pair".into(),
        })?;
    let omega = spectrum
        .dominant_pair_argument()
        .ok_or_else(|| CertError::BadParameter {
            what: "sign certificate needs the pair argument".into(),
        })?;
    let work = spectrum.bits();
    let weight = k.saturating_sub(3);
    let envelope = if weight == 0 {
        Dyadic::zero()
    } else {
        let rho2 = spectrum
            .second_modulus()
            .ok_or_else(|| CertError::BadParameter {
                what: "sign certificate needs a second modulus".into(),
            })?;
        rho2.pow(n, work).mul_int(&BigInt::from(weight)).hi().clone()
    };

    let main = rho
        .pow(n, work)
        .mul(&cos_interval(&omega.mul_int(&BigInt::from(n)), work))
        .mul_pow2(1);
    if main.lo() > &envelope {
        Ok(1)
    } else if main.hi() < &envelope.neg() {
        Ok(-1)
    } else {
        Err(CertError::Undecided { n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::{conjugate_spectrum, k_fibonacci_root, plastic_constant, shift_angle};
    use crate::floorpow::{sign_sequence, TraceSequence};
    use crate::certreal::PrecisionPolicy;

    fn d(v: f64) -> Dyadic {
        Dyadic::from_f64(v).unwrap()
    }

    #[test]
    fn plastic_arc_matches_frozen_endpoints() {
        let rho = plastic_constant();
        let s = conjugate_spectrum(&rho, 160).unwrap();
        let omega = s.dominant_pair_argument().unwrap();
        let (lo, hi) = plastic_window(omega, 100, 128).unwrap();
        // 0.5407768371095329332439607858868051254135
        assert!(lo.lo() > &d(0.5407768371095328) && lo.hi() < &d(0.5407768371095331));
        // 1.244634558411009450735721611728990647917
        assert!(hi.lo() > &d(1.2446345584110092) && hi.hi() < &d(1.2446345584110097));
        assert!(lo.hi() < hi.lo(), "arc must have certified positive length");
    }

    #[test]
    fn plastic_window_rejects_out_of_range_omega() {
        let bad = DyadicInterval::point(d(2.0), 96); // below 3pi/4
        assert!(matches!(
            plastic_window(&bad, 10, 64),
            Err(CertError::WindowViolation { .. })
        ));
        let p = pi(96);
        let boundary = p.mul_int(&BigInt::from(3)).mul_pow2(-2); // exactly 3pi/4
        assert!(matches!(
            plastic_window(&boundary, 10, 64),
            Err(CertError::WindowViolation { .. })
        ));
        let high = DyadicInterval::point(d(2.7), 96); // above 5pi/6
        assert!(matches!(
            plastic_window(&high, 10, 64),
            Err(CertError::WindowViolation { .. })
        ));
    }

    #[test]
    fn kfib_window_matches_frozen_endpoints() {
        let a = k_fibonacci_root(13).unwrap();
        let s = conjugate_spectrum(&a, 256).unwrap();
        let omega = s.dominant_pair_argument().unwrap();
        let delta = shift_angle(13, &s).unwrap();
        let p = pi(288);
        let eta = p.sub(&delta.add(omega)).mul_pow2(-3); // (pi - (delta+omega))/8
        let win = kfib_window(13, omega, &delta, &eta, 192).unwrap();
        // J = (-1.2923689822424251794, 0.37819508507240345974)
        assert!(win.lo().lo() > &d(-1.2923689822424255));
        assert!(win.lo().hi() < &d(-1.2923689822424248));
        assert!(win.hi().lo() > &d(0.3781950850724032));
        assert!(win.hi().hi() < &d(0.3781950850724037));
        // c0 = sin(eta) = 0.274843898369127242766291339713
        assert!(win.c0().lo() > &d(0.2748438983691270));
        assert!(win.c0().hi() < &d(0.2748438983691275));
    }

    #[test]
    fn kfib_window_preconditions() {
        let a = k_fibonacci_root(13).unwrap();
        let s = conjugate_spectrum(&a, 192).unwrap();
        let omega = s.dominant_pair_argument().unwrap();
        let delta = shift_angle(13, &s).unwrap();
        let p = pi(224);
        let eta = p.sub(&delta.add(omega)).mul_pow2(-3);
        // parity and size of k
        assert!(matches!(
            kfib_window(12, omega, &delta, &eta, 96),
            Err(CertError::BadParameter { .. })
        ));
        assert!(matches!(
            kfib_window(11, omega, &delta, &eta, 96),
            Err(CertError::BadParameter { .. })
        ));
        // eta too large: (pi - sum)/2 exceeds the quarter-gap bound
        let fat_eta = p.sub(&delta.add(omega)).mul_pow2(-1);
        assert!(matches!(
            kfib_window(13, omega, &delta, &fat_eta, 96),
            Err(CertError::WindowViolation { .. })
        ));
        // nonpositive eta
        let neg_eta = DyadicInterval::point(Dyadic::from_int(-1), 96);
        assert!(matches!(
            kfib_window(13, omega, &delta, &neg_eta, 96),
            Err(CertError::BadParameter { .. })
        ));
    }

    #[test]
    fn tail_threshold_is_frozen_for_k13() {
        let a = k_fibonacci_root(13).unwrap();
        let s = conjugate_spectrum(&a, 256).unwrap();
        let omega = s.dominant_pair_argument().unwrap();
        let delta = shift_angle(13, &s).unwrap();
        let p = pi(288);
        let eta = p.sub(&delta.add(omega)).mul_pow2(-3);
        let win = kfib_window(13, omega, &delta, &eta, 192).unwrap();
        assert_eq!(en_tail_threshold(13, &s, win.c0()).unwrap(), 151);
    }

    #[test]
    fn plastic_sign_certificate_is_exact_and_matches_the_sign_route() {
        // k = 3: no tail, E_n = 2 rho^n cos(n omega) exactly, so the
        // certificate must reproduce the certified sign sequence
        let rho = plastic_constant();
        let s = conjugate_spectrum(&rho, 192).unwrap();
        let p = rho.min_poly().clone();
        let mut ts = TraceSequence::new(&p).unwrap();
        ts.extend_to(130);
        let policy = PrecisionPolicy::new(64, 4096);
        let ss = sign_sequence(&rho, &ts, 22, 122, &policy).unwrap();
        for n in 22..=122u64 {
            let got = en_sign_certificate(3, n, &s).unwrap();
            let want = if ss.sign(n).unwrap() == 1 { 1 } else { -1 };
            assert_eq!(got, want, "sign mismatch at n = {n}");
        }
    }

    #[test]
    fn kfib_sign_certificate_agrees_with_the_exact_route() {
        let a = k_fibonacci_root(13).unwrap();
        let s = conjugate_spectrum(&a, 512).unwrap();
        let p = a.min_poly().clone();
        let mut ts = TraceSequence::new(&p).unwrap();
        ts.extend_to(360);
        let policy = PrecisionPolicy::new(64, 4096);
        let ss = sign_sequence(&a, &ts, 184, 334, &policy).unwrap();
        let mut decided = 0usize;
        let mut plus = 0usize;
        let mut minus = 0usize;
        for n in 184..=334u64 {
            match en_sign_certificate(13, n, &s) {
                Ok(sign) => {
                    decided += 1;
                    if sign > 0 {
                        plus += 1;
                    } else {
                        minus += 1;
                    }
                    let want = if ss.sign(n).unwrap() == 1 { 1 } else { -1 };
                    assert_eq!(sign, want, "certified sign disagrees at n = {n}");
                }
                Err(CertError::Undecided { .. }) => {}
                Err(e) => panic!("unexpected error at n = {n}: {e}"),
            }
        }
        assert!(decided >= 120, "envelope should decide most indices, got {decided}");
        assert!(plus > 0 && minus > 0, "both signs should occur");
    }

    #[test]
    fn arc_visit_reduction_handles_large_multiples() {
        let p = pi(192);
        // step = pi/2: orbit 0, pi/2, pi, -pi/2 cycling; arc around pi/2
        let step = p.mul_pow2(-1);
        let lo = DyadicInterval::point(d(1.5), 192);
        let hi = DyadicInterval::point(d(1.6), 192);
        for n in 1..=41u64 {
            let got = arc_visit_mod_2pi(&step, n, &lo, &hi, 160).unwrap();
            assert_eq!(got, Some(n % 4 == 1), "n = {n}");
        }
        // arc outside (-2, 2) is rejected
        let wide = DyadicInterval::point(d(2.5), 192);
        assert!(matches!(
            arc_visit_mod_2pi(&step, 3, &lo, &wide, 160),
            Err(CertError::BadParameter { .. })
        ));
    }
}
