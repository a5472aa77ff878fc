//! Real-root isolation (Sturm bisection) and certified refinement
//! (interval Newton with sign-test bisection fallback).
//!
//! Isolating intervals are closed; each contains exactly one root of the
//! square-free part and the endpoints are never roots, except for exact
//! dyadic roots which come back as point intervals.

use super::dyadic::Dyadic;
use super::error::{CertError, CertResult};
use super::interval::DyadicInterval;
use super::poly::{count_roots_half_open, IntPolynomial};

const ISO_BITS: u32 = 64;

/// Roots of the square-free part of `p` in the half-open window (lo, hi].
pub fn isolate_in_window(
    p: &IntPolynomial,
    lo: &Dyadic,
    hi: &Dyadic,
) -> CertResult<Vec<DyadicInterval>> {
    if p.is_zero() {
        return Err(CertError::ZeroPolynomial);
    }
    if lo > hi {
        return Err(CertError::BadParameter {
            what: "isolation window has lo > hi".into(),
        });
    }
    if lo == hi {
        return Ok(vec![]);
    }
    let q = p.squarefree_part();
    if q.degree() == Some(0) {
        return Ok(vec![]);
    }
    let chain = q.sturm_chain();
    let mut out = Vec::new();

    // Exact root at the right end belongs to the half-open window.
    let mut hi = hi.clone();
    if q.sign_at(&hi) == 0 {
        out.push(DyadicInterval::point(hi.clone(), ISO_BITS));
        hi = step_until(&q, &chain, lo, &hi, StepEnd::High);
    }
    // A root at the left end is excluded, but closed output intervals must
    // not start on it; advance past it without skipping any other root.
    let mut lo = lo.clone();
    if q.sign_at(&lo) == 0 {
        lo = step_until(&q, &chain, &lo, &hi, StepEnd::Low);
    }

    let total = count_roots_half_open(&chain, &lo, &hi);
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(DyadicInterval::new(a, b, ISO_BITS));
            continue;
        }
        let m = a.average(&b);
        if q.sign_at(&m) == 0 {
            out.push(DyadicInterval::point(m.clone(), ISO_BITS));
            // Carve out a punctured neighborhood of the exact root so the
            // flanking pieces keep non-root endpoints.
            let mut h = b.sub(&a).mul_pow2(-2);
            loop {
                let (ml, mr) = (m.sub(&h), m.add(&h));
                if q.sign_at(&ml) != 0
                    && q.sign_at(&mr) != 0
                    && count_roots_half_open(&chain, &ml, &mr) == 1
                {
                    let cl = count_roots_half_open(&chain, &a, &ml);
                    let cr = count_roots_half_open(&chain, &mr, &b);
                    debug_assert_eq!(cl + cr + 1, count);
                    stack.push((a, ml, cl));
                    stack.push((mr, b, cr));
                    break;
                }
                h = h.mul_pow2(-1);
            }
        } else {
            let cl = count_roots_half_open(&chain, &a, &m);
            let cr = count_roots_half_open(&chain, &m, &b);
            debug_assert_eq!(cl + cr, count);
            stack.push((a, m.clone(), cl));
            stack.push((m, b, cr));
        }
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()).then(x.hi().cmp(y.hi())));
    Ok(out)
}

/// All real roots of the square-free part of `p`.
pub fn isolate_all(p: &IntPolynomial) -> CertResult<Vec<DyadicInterval>> {
    if p.is_zero() {
        return Err(CertError::ZeroPolynomial);
    }
    let b = p.squarefree_part().cauchy_bound();
    isolate_in_window(p, &b.neg(), &b)
}

enum StepEnd {
    Low,
    High,
}

/// Nudge an endpoint off an exact root without crossing any other root.
fn step_until(
    q: &IntPolynomial,
    chain: &[IntPolynomial],
    lo: &Dyadic,
    hi: &Dyadic,
    end: StepEnd,
) -> Dyadic {
    let mut h = hi.sub(lo).mul_pow2(-1);
    loop {
        let cand = match end {
            StepEnd::Low => lo.add(&h),
            StepEnd::High => hi.sub(&h),
        };
        if q.sign_at(&cand) != 0 {
            let clean = match end {
                // no root may hide in (lo, cand]
                StepEnd::Low => count_roots_half_open(chain, lo, &cand) == 0,
                // only the root at hi may sit in (cand, hi]
                StepEnd::High => count_roots_half_open(chain, &cand, hi) == 1,
            };
            if clean {
                return cand;
            }
        }
        h = h.mul_pow2(-1);
    }
}

/// Shrink an isolating interval until its width is at most 2^-target_bits.
///
/// Verifies the isolation claim first and reports `NotIsolating` with the
/// actual root count when it fails.
pub fn refine_root(
    p: &IntPolynomial,
    iso: &DyadicInterval,
    target_bits: u32,
) -> CertResult<DyadicInterval> {
    if p.is_zero() {
        return Err(CertError::ZeroPolynomial);
    }
    let q = p.squarefree_part();
    let chain = q.sturm_chain();
    let (mut a, mut b) = (iso.lo().clone(), iso.hi().clone());
    let count = count_roots_half_open(&chain, &a, &b)
        + usize::from(q.sign_at(&a) == 0);
    if count != 1 {
        return Err(CertError::NotIsolating { count });
    }
    if q.sign_at(&a) == 0 {
        return Ok(DyadicInterval::point(a, target_bits));
    }
    if q.sign_at(&b) == 0 {
        return Ok(DyadicInterval::point(b, target_bits));
    }
    let dq = q.derivative();
    let tol = Dyadic::power_of_two(-(i64::from(target_bits)));
    let work = target_bits + 64;
    let mut sa = q.sign_at(&a);
    loop {
        let width = b.sub(&a);
        if width <= tol {
            return Ok(DyadicInterval::new(a, b, target_bits));
        }
        let x = DyadicInterval::new(a.clone(), b.clone(), work);
        let slope = dq.eval_interval(&x, work);
        let mut stepped = false;
        if slope.definite_sign().is_some() {
            // Interval Newton: any root of q in x lies in m - q(m)/q'(x).
            let m = pick_center(&a, &b, work);
            let qm = q.eval_exact(&m);
            if qm.is_zero() {
                return Ok(DyadicInterval::point(m, target_bits));
            }
            let num = DyadicInterval::point(qm, work);
            let shifted = DyadicInterval::point(m, work).sub(&num.div(&slope));
            match shifted.intersect(&x) {
                None => {
                    return Err(CertError::NotCertified {
                        what: "interval Newton emptied an isolating interval".into(),
                    })
                }
                Some(nx) => {
                    // accept only real contraction, otherwise bisect
                    if nx.width() <= width.mul_pow2(-1) {
                        a = nx.lo().clone();
                        b = nx.hi().clone();
                        let s = q.sign_at(&a);
                        if s == 0 {
                            return Ok(DyadicInterval::point(a, target_bits));
                        }
                        if q.sign_at(&b) == 0 {
                            return Ok(DyadicInterval::point(b, target_bits));
                        }
                        sa = s;
                        stepped = true;
                    }
                }
            }
        }
        if !stepped {
            let m = a.average(&b);
            let sm = q.sign_at(&m);
            if sm == 0 {
                return Ok(DyadicInterval::point(m, target_bits));
            }
            if sm == sa {
                a = m;
            } else {
                b = m;
            }
        }
    }
}

/// Interior point near the midpoint with a short mantissa.
fn pick_center(a: &Dyadic, b: &Dyadic, bits: u32) -> Dyadic {
    let mid = a.average(b);
    let rounded = mid.round(bits, super::dyadic::Round::Down);
    if &rounded > a && &rounded < b {
        rounded
    } else {
        mid
    }
}
