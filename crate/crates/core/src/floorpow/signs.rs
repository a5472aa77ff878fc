//! Comparison bits between trace values and powers, decided through the
//! conjugate spectrum: T_n - x^n equals the sum of the non-dominant root
//! powers, so its sign is read off a certified enclosure of that sum.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algnum::spectrum::{conjugate_spectrum, ComplexInterval, ConjugateSpectrum};
use crate::algnum::AlgebraicReal;
use crate::certreal::error::{CertError, CertResult};
use crate::certreal::{Dyadic, DyadicInterval, PrecisionPolicy, Round};

use super::traces::TraceSequence;

/// Bits u_n with u_n = 1 exactly when T_n > x^n, over a contiguous index
/// range starting at or after the residual threshold.
#[derive(Clone, Debug)]
pub struct SignSequence {
    start: u64,
    bits: Vec<u8>,
    error_bound_log: Vec<i64>,
}

impl SignSequence {
    pub fn start(&self) -> u64 {
        self.start
    }

    /// Last covered index (inclusive).
    pub fn end(&self) -> u64 {
        self.start + self.bits.len() as u64 - 1
    }

    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn sign(&self, n: u64) -> Option<u8> {
        n.checked_sub(self.start)
            .and_then(|i| self.bits.get(i as usize).copied())
    }

    /// Certified log2 upper bound on |T_n - x^n| at index n.
    pub fn error_bound_log(&self, n: u64) -> Option<i64> {
        n.checked_sub(self.start)
            .and_then(|i| self.error_bound_log.get(i as usize).copied())
    }
}

/// log2 upper bound of a nonnegative dyadic: m * 2^e < 2^(e + bitlen(m)).
fn log2_upper(d: &Dyadic) -> i64 {
    if d.is_zero() {
        i64::MIN
    } else {
        d.exp() + d.mant().bits() as i64
    }
}

const THRESHOLD_BITS: u32 = 192;

/// Upper-bound ingredients for |T_n - x^n|: with a dominant conjugate
/// pair of modulus m the tail is at most 2 m^n + (k-3) r^n where r bounds
/// the remaining moduli; without a pair, max(2, k-1) m^n over the largest
/// non-dominant modulus. Both use enclosure upper endpoints throughout.
fn residual_bound_parts(spectrum: &ConjugateSpectrum) -> (Dyadic, BigInt, Dyadic) {
    let k = spectrum.roots().len();
    match (spectrum.dominant_pair_modulus(), spectrum.second_modulus()) {
        (Some(m), Some(r)) => (
            m.hi().clone(),
            BigInt::from(k.saturating_sub(3) as u64),
            r.hi().clone(),
        ),
        (Some(m), None) => (m.hi().clone(), BigInt::from(0), Dyadic::zero()),
        _ => {
            let m = spectrum.max_nondominant_modulus();
            let weight = (k.saturating_sub(1) as u64).max(2);
            // fold the count into the pair slot so bound = weight * m^n
            (
                m.hi().clone(),
                BigInt::from(weight - 2),
                m.hi().clone(),
            )
        }
    }
}

/// Least N1 such that the certified bound on |T_n - x^n| is below 1/10
/// for every n >= N1. The bound decays geometrically, so this is the
/// first index where it drops under the threshold.
pub fn residual_threshold(x: &AlgebraicReal, spectrum: &ConjugateSpectrum) -> CertResult<u64> {
    let k = x.min_poly().degree().unwrap_or(0);
    if spectrum.roots().len() != k {
        return Err(CertError::BadParameter {
            what: "spectrum does not match the minimal polynomial".into(),
        });
    }
    let (m1, extra, r2) = residual_bound_parts(spectrum);
    let one = Dyadic::one();
    if m1 >= one || (!extra.is_zero() && r2 >= one) {
        return Err(CertError::NotCertified {
            what: "non-dominant modulus bound not below one".into(),
        });
    }
    let ten = Dyadic::from_int(10);
    let mut m1_pow = m1.round(THRESHOLD_BITS, Round::Up);
    let mut r2_pow = r2.round(THRESHOLD_BITS, Round::Up);
    for n in 1..=1_000_000u64 {
        let bound = m1_pow.mul_pow2(1).add(&r2_pow.mul_int(&extra));
        if bound.mul(&ten) < one {
            return Ok(n);
        }
        m1_pow = m1_pow.mul(&m1).round(THRESHOLD_BITS, Round::Up);
        r2_pow = r2_pow.mul(&r2).round(THRESHOLD_BITS, Round::Up);
    }
    Err(CertError::NotCertified {
        what: "residual bound did not drop below 1/10 within 10^6 indices".into(),
    })
}

/// residual_threshold with the spectrum certified internally, escalating
/// along the policy ladder until certification succeeds.
pub fn residual_threshold_auto(x: &AlgebraicReal, policy: &PrecisionPolicy) -> CertResult<u64> {
    let mut last = CertError::PrecisionExhausted { n: 0 };
    for work in policy.ladder() {
        match conjugate_spectrum(x, work) {
            Ok(s) => return residual_threshold(x, &s),
            Err(e @ CertError::PrecisionExhausted { .. }) | Err(e @ CertError::Undecided { .. }) => {
                last = e
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Decide u_n over [n_lo, n_hi]. The trace sequence must already cover
/// n_hi and n_lo must be at or past the residual threshold; precision
/// escalates per index and the first undecidable index is reported.
pub fn sign_sequence(
    x: &AlgebraicReal,
    ts: &TraceSequence,
    n_lo: u64,
    n_hi: u64,
    policy: &PrecisionPolicy,
) -> CertResult<SignSequence> {
    if n_lo > n_hi {
        return Err(CertError::EmptyWindow);
    }
    if ts.source_poly() != x.min_poly() {
        return Err(CertError::BadParameter {
            what: "trace sequence was built from a different polynomial".into(),
        });
    }
    if ts.len() <= n_hi {
        return Err(CertError::BadParameter {
            what: "trace sequence does not cover the requested range".into(),
        });
    }
    let k = x.min_poly().degree().unwrap_or(0);
    if k < 2 {
        return Err(CertError::BadParameter {
            what: "sign bits need a non-trivial conjugate spectrum".into(),
        });
    }

    let mut bits_out: Vec<u8> = Vec::with_capacity((n_hi - n_lo + 1) as usize);
    let mut log_out: Vec<i64> = Vec::with_capacity(bits_out.capacity());
    let mut n = n_lo;
    let mut threshold_checked = false;

    for work in policy.ladder() {
        let spectrum = match conjugate_spectrum(x, work) {
            Ok(s) => s,
            // a rung too coarse for spectrum certification is not fatal;
            // the next one may succeed
            Err(CertError::PrecisionExhausted { .. }) | Err(CertError::Undecided { .. }) => {
                continue
            }
            Err(e) => return Err(e),
        };
        if !threshold_checked {
            let n1 = residual_threshold(x, &spectrum)?;
            if n_lo < n1 {
                return Err(CertError::WindowViolation {
                    what: format!("sign range starts at {n_lo}, below the residual threshold {n1}"),
                });
            }
            threshold_checked = true;
        }
        let mut powers: Vec<ComplexInterval> = spectrum
            .nondominant_roots()
            .map(|r| r.pow(n, work))
            .collect();
        'indices: while n <= n_hi {
            let mut e = DyadicInterval::point(Dyadic::zero(), work);
            for p in &powers {
                e = e.add(p.re());
            }
            let bit = if e.is_strictly_positive() {
                1
            } else if e.hi() <= &Dyadic::zero() {
                0
            } else {
                break 'indices; // escalate, keeping the decided prefix
            };
            bits_out.push(bit);
            log_out.push(log2_upper(&e.abs_upper()));
            n += 1;
            if n <= n_hi {
                for (p, r) in powers.iter_mut().zip(spectrum.nondominant_roots()) {
                    *p = p.mul(r, work);
                }
            }
        }
        if n > n_hi {
            return Ok(SignSequence {
                start: n_lo,
                bits: bits_out,
                error_bound_log: log_out,
            });
        }
    }
    Err(CertError::PrecisionExhausted { n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::{golden_ratio, k_fibonacci_root, plastic_constant};

    fn spectrum_of(x: &AlgebraicReal, bits: u32) -> ConjugateSpectrum {
        conjugate_spectrum(x, bits).unwrap()
    }

    #[test]
    fn plastic_threshold() {
        let x = plastic_constant();
        let s = spectrum_of(&x, 128);
        assert_eq!(residual_threshold(&x, &s).unwrap(), 22);
    }

    #[test]
    fn golden_threshold() {
        let x = golden_ratio();
        let s = spectrum_of(&x, 128);
        assert_eq!(residual_threshold(&x, &s).unwrap(), 7);
    }

    #[test]
    fn k13_threshold() {
        let x = k_fibonacci_root(13).unwrap();
        let s = spectrum_of(&x, 160);
        assert_eq!(residual_threshold(&x, &s).unwrap(), 184);
    }

    #[test]
    fn golden_signs_alternate_with_parity() {
        // T_n - phi^n = (-1/phi)^n, positive exactly at even n
        let x = golden_ratio();
        let mut ts = TraceSequence::new(x.min_poly()).unwrap();
        ts.extend_to(40);
        let ss = sign_sequence(&x, &ts, 7, 40, &PrecisionPolicy::default()).unwrap();
        for n in 7..=40u64 {
            let want = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(ss.sign(n), Some(want), "n = {n}");
        }
        assert_eq!(ss.start(), 7);
        assert_eq!(ss.end(), 40);
        assert_eq!(ss.sign(6), None);
        assert_eq!(ss.sign(41), None);
    }

    #[test]
    fn plastic_error_bounds_decay() {
        let x = plastic_constant();
        let mut ts = TraceSequence::new(x.min_poly()).unwrap();
        ts.extend_to(80);
        let ss = sign_sequence(&x, &ts, 22, 80, &PrecisionPolicy::default()).unwrap();
        // |T_22 - rho^22| is about 0.084, so its log2 sits near -3.6
        let l22 = ss.error_bound_log(22).unwrap();
        assert!((-5..=-3).contains(&l22), "log bound at 22 was {l22}");
        let l80 = ss.error_bound_log(80).unwrap();
        assert!(l80 < l22 - 10, "no decay: {l22} -> {l80}");
    }

    #[test]
    fn range_below_threshold_is_rejected() {
        let x = plastic_constant();
        let mut ts = TraceSequence::new(x.min_poly()).unwrap();
        ts.extend_to(30);
        let err = sign_sequence(&x, &ts, 5, 30, &PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, CertError::WindowViolation { .. }), "{err}");
    }

    #[test]
    fn mismatched_trace_sequence_is_rejected() {
        let x = plastic_constant();
        let mut ts = TraceSequence::new(golden_ratio().min_poly()).unwrap();
        ts.extend_to(60);
        let err = sign_sequence(&x, &ts, 22, 50, &PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, CertError::BadParameter { .. }), "{err}");
    }

    #[test]
    fn short_trace_sequence_is_rejected() {
        let x = plastic_constant();
        let mut ts = TraceSequence::new(x.min_poly()).unwrap();
        ts.extend_to(30);
        let err = sign_sequence(&x, &ts, 22, 50, &PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, CertError::BadParameter { .. }), "{err}");
    }

    #[test]
    fn starved_policy_reports_first_stuck_index() {
        let x = plastic_constant();
        let mut ts = TraceSequence::new(x.min_poly()).unwrap();
        ts.extend_to(322);
        let policy = PrecisionPolicy::new(8, 16);
        let err = sign_sequence(&x, &ts, 22, 322, &policy).unwrap_err();
        match err {
            CertError::PrecisionExhausted { n } => {
                assert!((22..=322).contains(&n), "stuck index {n}")
            }
            other => panic!("expected precision exhaustion, got {other}"),
        }
    }
}
