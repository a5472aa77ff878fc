//! Certified conjugate spectra: disjoint complex enclosures of every root
//! of a monic square-free integer polynomial, with derived angular data.
//!
//! Pipeline: f64 simultaneous iteration for seeds, dyadic Newton polish,
//! then a-posteriori correction disks. For approximations z_1..z_k of a
//! monic degree-k polynomial, with W_j = p(z_j)/prod_{l!=j}(z_j - z_l),
//! every root lies in the union of disks D(z_j, k|W_j|), and a disk
//! disjoint from all others contains exactly one root (Rouche along the
//! homotopy between prod(z - z_j) and p). Radii are computed with outward
//! rounding, so disjointness and axis separation are exact statements.
//! Real roots are counted and enclosed independently via Sturm chains;
//! the two views must agree before anything is returned.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::trig::atan2_interval;
use super::AlgebraicReal;
use crate::certreal::error::{CertError, CertResult};
use crate::certreal::roots::{isolate_all, refine_root};
use crate::certreal::{Dyadic, DyadicInterval, IntPolynomial, Round};

/// Rectangle in the complex plane: re + i*im with interval parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    re: DyadicInterval,
    im: DyadicInterval,
}

impl ComplexInterval {
    pub fn new(re: DyadicInterval, im: DyadicInterval) -> ComplexInterval {
        ComplexInterval { re, im }
    }

    pub fn point(re: Dyadic, im: Dyadic, bits: u32) -> ComplexInterval {
        ComplexInterval {
            re: DyadicInterval::point(re, bits),
            im: DyadicInterval::point(im, bits),
        }
    }

    pub fn real(v: DyadicInterval) -> ComplexInterval {
        let bits = v.bits();
        ComplexInterval {
            re: v,
            im: DyadicInterval::point(Dyadic::zero(), bits),
        }
    }

    pub fn re(&self) -> &DyadicInterval {
        &self.re
    }

    pub fn im(&self) -> &DyadicInterval {
        &self.im
    }

    /// True when the imaginary part is exactly the zero point.
    pub fn on_real_line(&self) -> bool {
        self.im.lo().is_zero() && self.im.hi().is_zero()
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> ComplexInterval {
        ComplexInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn add_real(&self, v: &Dyadic) -> ComplexInterval {
        ComplexInterval { re: self.re.add_dyadic(v), im: self.im.clone() }
    }

    pub fn mul(&self, rhs: &ComplexInterval, bits: u32) -> ComplexInterval {
        let re = self
            .re
            .mul(&rhs.re)
            .sub(&self.im.mul(&rhs.im))
            .round_outward(bits);
        let im = self
            .re
            .mul(&rhs.im)
            .add(&self.im.mul(&rhs.re))
            .round_outward(bits);
        ComplexInterval { re, im }
    }

    /// |z|^2 enclosure; tight because square() handles sign-spanning parts.
    pub fn mod_squared(&self) -> DyadicInterval {
        self.re.square().add(&self.im.square())
    }

    /// |z| enclosure at the given output precision.
    pub fn modulus(&self, bits: u32) -> DyadicInterval {
        self.mod_squared().round_outward(bits + 8).sqrt().round_outward(bits)
    }

    /// z^n by binary powering at elevated working precision.
    pub fn pow(&self, n: u64, bits: u32) -> ComplexInterval {
        if n == 0 {
            return ComplexInterval {
                re: DyadicInterval::from_int(1, bits),
                im: DyadicInterval::point(Dyadic::zero(), bits),
            };
        }
        let slack = 2 * (64 - n.leading_zeros()) + 6;
        let work = bits + slack;
        let mut base = ComplexInterval {
            re: self.re.with_bits(work),
            im: self.im.with_bits(work),
        };
        let mut acc: Option<ComplexInterval> = None;
        let mut rest = n;
        while rest > 0 {
            if rest & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base, work),
                });
            }
            rest >>= 1;
            if rest > 0 {
                base = base.mul(&base, work);
            }
        }
        let out = acc.unwrap();
        ComplexInterval {
            re: out.re.round_outward(bits),
            im: out.im.round_outward(bits),
        }
    }

    pub fn contains_real(&self, v: &Dyadic) -> bool {
        self.re.contains(v) && self.im.contains(&Dyadic::zero())
    }
}

/// All roots of a minimal polynomial with certified disjoint enclosures,
/// plus the angular data carried by the maximal non-dominant pair.
#[derive(Clone, Debug)]
pub struct ConjugateSpectrum {
    roots: Vec<ComplexInterval>,
    dominant_index: usize,
    dominant_pair: Option<(usize, usize)>,
    dominant_pair_modulus: Option<DyadicInterval>,
    dominant_pair_argument: Option<DyadicInterval>,
    second_modulus: Option<DyadicInterval>,
    bits: u32,
}

impl ConjugateSpectrum {
    pub fn roots(&self) -> &[ComplexInterval] {
        &self.roots
    }

    pub fn dominant_index(&self) -> usize {
        self.dominant_index
    }

    pub fn dominant(&self) -> &ComplexInterval {
        &self.roots[self.dominant_index]
    }

    /// Indices (upper, lower) of the maximal-modulus non-dominant pair.
    pub fn dominant_pair(&self) -> Option<(usize, usize)> {
        self.dominant_pair
    }

    /// Upper-half member of the dominant pair.
    pub fn dominant_pair_upper(&self) -> Option<&ComplexInterval> {
        self.dominant_pair.map(|(u, _)| &self.roots[u])
    }

    /// Modulus of the dominant pair (|alpha| resp. rho of the pair).
    pub fn dominant_pair_modulus(&self) -> Option<&DyadicInterval> {
        self.dominant_pair_modulus.as_ref()
    }

    /// Argument omega of the upper member of the dominant pair.
    pub fn dominant_pair_argument(&self) -> Option<&DyadicInterval> {
        self.dominant_pair_argument.as_ref()
    }

    /// Max modulus among roots other than the dominant one and the pair.
    pub fn second_modulus(&self) -> Option<&DyadicInterval> {
        self.second_modulus.as_ref()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn nondominant_roots(&self) -> impl Iterator<Item = &ComplexInterval> {
        let d = self.dominant_index;
        self.roots
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != d)
            .map(|(_, r)| r)
    }

    /// Largest modulus among all non-dominant roots (enclosure of the
    /// exact maximum).
    pub fn max_nondominant_modulus(&self) -> DyadicInterval {
        let bits = self.bits;
        let mut lo = Dyadic::zero();
        let mut hi = Dyadic::zero();
        for r in self.nondominant_roots() {
            let m = r.modulus(bits);
            if m.lo() > &lo {
                lo = m.lo().clone();
            }
            if m.hi() > &hi {
                hi = m.hi().clone();
            }
        }
        DyadicInterval::new(lo, hi, bits)
    }

    /// Expand prod (t - root_i) and check every coefficient enclosure
    /// contains the integer coefficient of the minimal polynomial.
    pub fn vieta_holds(&self, p: &IntPolynomial) -> bool {
        let bits = self.bits + 16;
        let one = ComplexInterval {
            re: DyadicInterval::from_int(1, bits),
            im: DyadicInterval::point(Dyadic::zero(), bits),
        };
        let zero = ComplexInterval {
            re: DyadicInterval::point(Dyadic::zero(), bits),
            im: DyadicInterval::point(Dyadic::zero(), bits),
        };
        let mut coeffs = vec![one];
        for root in &self.roots {
            let mut next = vec![zero.clone(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                // (t - root) * c t^i contributes c at i+1 and -root*c at i
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&root.mul(c, bits));
            }
            coeffs = next;
        }
        p.coeffs().iter().enumerate().all(|(i, want)| {
            let got = &coeffs[i];
            got.re.contains(&Dyadic::from_int(want.clone()))
                && got.im.contains(&Dyadic::zero())
        })
    }
}

/// Dyadic point in the complex plane (internal scratch type).
#[derive(Clone, Debug)]
struct CPoint {
    re: Dyadic,
    im: Dyadic,
}

impl CPoint {
    fn sub_exact(&self, rhs: &CPoint) -> CPoint {
        CPoint { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    fn mul_rounded(&self, rhs: &CPoint, bits: u32) -> CPoint {
        let re = self
            .re
            .mul(&rhs.re)
            .sub(&self.im.mul(&rhs.im))
            .round(bits, Round::Down);
        let im = self
            .re
            .mul(&rhs.im)
            .add(&self.im.mul(&rhs.re))
            .round(bits, Round::Down);
        CPoint { re, im }
    }

    fn mod_squared_exact(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    fn div_rounded(&self, rhs: &CPoint, bits: u32) -> Option<CPoint> {
        let m2 = rhs.mod_squared_exact();
        if m2.is_zero() {
            return None;
        }
        let num_re = self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im));
        let num_im = self.im.mul(&rhs.re).sub(&self.re.mul(&rhs.im));
        Some(CPoint {
            re: num_re.div(&m2, bits, Round::Down),
            im: num_im.div(&m2, bits, Round::Down),
        })
    }
}

fn eval_point(p: &IntPolynomial, z: &CPoint, bits: u32) -> CPoint {
    let mut acc = CPoint { re: Dyadic::zero(), im: Dyadic::zero() };
    for c in p.coeffs().iter().rev() {
        acc = acc.mul_rounded(z, bits);
        acc.re = acc.re.add(&Dyadic::from_int(c.clone()));
    }
    acc
}

fn eval_rect(p: &IntPolynomial, z: &ComplexInterval, bits: u32) -> ComplexInterval {
    let mut acc = ComplexInterval {
        re: DyadicInterval::point(Dyadic::zero(), bits),
        im: DyadicInterval::point(Dyadic::zero(), bits),
    };
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z, bits).add_real(&Dyadic::from_int(c.clone()));
    }
    acc
}

/// Simultaneous f64 iteration for seed approximations of all roots.
fn durand_kerner(p: &IntPolynomial) -> Option<Vec<Complex64>> {
    let deg = p.degree()?;
    let lead = p.leading()?.to_f64()?;
    let coeffs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_f64().map(|v| v / lead))
        .collect::<Option<_>>()?;
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let base = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|j| base.powu(j as u32 + 1)).collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for j in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for l in 0..deg {
                if l != j {
                    den *= z[j] - z[l];
                }
            }
            if den.norm_sqr() == 0.0 {
                return None;
            }
            let w = eval(z[j]) / den;
            z[j] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-13 {
            break;
        }
    }
    z.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(z)
}

/// Newton polish of every center at the given working precision.
fn polish(p: &IntPolynomial, dp: &IntPolynomial, centers: &mut [CPoint], work: u32) {
    let iters = 6 + (32 - work.leading_zeros());
    for z in centers.iter_mut() {
        for _ in 0..iters {
            let val = eval_point(p, z, work);
            let slope = eval_point(dp, z, work);
            match val.div_rounded(&slope, work) {
                Some(step) => {
                    z.re = z.re.sub(&step.re).round(work, Round::Down);
                    z.im = z.im.sub(&step.im).round(work, Round::Down);
                }
                None => break,
            }
        }
    }
}

struct RungOutput {
    uppers: Vec<(CPoint, Dyadic)>,
}

/// Correction-disk certification at one working precision. Returns the
/// strictly-upper-half disks when every check passes.
fn certify_rung(
    p: &IntPolynomial,
    centers: &[CPoint],
    real_count: usize,
    bits: u32,
    work: u32,
) -> Option<RungOutput> {
    let k = centers.len();
    let k_int = BigInt::from(k);
    let mut radii = Vec::with_capacity(k);
    for (j, z) in centers.iter().enumerate() {
        let val = eval_rect(
            p,
            &ComplexInterval::point(z.re.clone(), z.im.clone(), work),
            work,
        );
        let num2_hi = val.mod_squared().hi().clone();
        if num2_hi.signum() < 0 {
            return None;
        }
        let mut den2 = Dyadic::one();
        for (l, other) in centers.iter().enumerate() {
            if l != j {
                den2 = den2.mul(&z.sub_exact(other).mod_squared_exact());
            }
        }
        if den2.is_zero() {
            return None;
        }
        let num = num2_hi.nth_root(2, work, Round::Up);
        let den = den2.nth_root(2, work, Round::Down);
        if den.is_zero() {
            return None;
        }
        let r = num.div(&den, work, Round::Up).mul_int(&k_int);
        // enclosures must be at least as tight as the requested output
        if r > Dyadic::power_of_two(-(i64::from(bits) + 4)) {
            return None;
        }
        radii.push(r);
    }
    // pairwise disjoint disks: each then contains exactly one root
    for i in 0..k {
        for j in i + 1..k {
            let dist2 = centers[i].sub_exact(&centers[j]).mod_squared_exact();
            let rsum = radii[i].add(&radii[j]);
            if dist2 <= rsum.mul(&rsum) {
                return None;
            }
        }
    }
    // classify against the real axis; counts must match the Sturm view
    let mut uppers = Vec::new();
    let mut lowers = 0usize;
    let mut on_axis = 0usize;
    for (z, r) in centers.iter().zip(&radii) {
        if z.im.abs() <= *r {
            on_axis += 1;
        } else if z.im.signum() > 0 {
            uppers.push((z.clone(), r.clone()));
        } else {
            lowers += 1;
        }
    }
    (on_axis == real_count && uppers.len() == lowers).then_some(RungOutput { uppers })
}

/// Certified enclosures of all roots of the minimal polynomial of `a`.
pub fn conjugate_spectrum(a: &AlgebraicReal, bits: u32) -> CertResult<ConjugateSpectrum> {
    let p = a.min_poly();
    if !p.is_monic() {
        return Err(CertError::NotMonic);
    }
    let k = match p.degree() {
        None | Some(0) => return Err(CertError::ZeroPolynomial),
        Some(d) => d,
    };
    if p.gcd(&p.derivative()).degree() != Some(0) {
        return Err(CertError::BadParameter {
            what: "conjugate spectrum requires a square-free polynomial".into(),
        });
    }
    let real_isos = isolate_all(p)?;
    let reals: Vec<DyadicInterval> = real_isos
        .iter()
        .map(|iso| refine_root(p, iso, bits + 8))
        .collect::<CertResult<_>>()?;

    if reals.len() == k {
        return assemble(p, reals, Vec::new(), bits);
    }

    let seeds = durand_kerner(p).ok_or_else(|| CertError::NotCertified {
        what: "simultaneous iteration diverged".into(),
    })?;
    let mut centers: Vec<CPoint> = seeds
        .into_iter()
        .map(|z| {
            Some(CPoint {
                re: Dyadic::from_f64(z.re)?,
                im: Dyadic::from_f64(z.im)?,
            })
        })
        .collect::<Option<_>>()
        .ok_or_else(|| CertError::NotCertified {
            what: "seed approximations are not finite".into(),
        })?;

    let dp = p.derivative();
    let cap = ((bits + 64) * 16).max(16_384).min(1 << 20);
    let mut work = bits + 64;
    loop {
        polish(p, &dp, &mut centers, work);
        if let Some(rung) = certify_rung(p, &centers, reals.len(), bits, work) {
            match assemble(p, reals.clone(), rung.uppers, bits) {
                Ok(s) => return Ok(s),
                Err(CertError::Undecided { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if work >= cap {
            return Err(CertError::PrecisionExhausted { n: u64::from(work) });
        }
        work = (work * 2).min(cap);
    }
}

/// Build the spectrum from certified parts; Undecided errors signal the
/// caller to escalate precision.
fn assemble(
    p: &IntPolynomial,
    reals: Vec<DyadicInterval>,
    uppers: Vec<(CPoint, Dyadic)>,
    bits: u32,
) -> CertResult<ConjugateSpectrum> {
    let k = p.degree().unwrap();
    let mut roots = Vec::with_capacity(k);
    for r in &reals {
        roots.push(ComplexInterval::real(r.round_outward(bits + 8)));
    }
    let mut uppers_sorted = uppers;
    uppers_sorted.sort_by(|(a, _), (b, _)| a.re.cmp(&b.re));
    let mut pair_indices = Vec::new();
    for (z, r) in &uppers_sorted {
        let rect = ComplexInterval::new(
            DyadicInterval::new(z.re.sub(r), z.re.add(r), bits + 8).round_outward(bits + 8),
            DyadicInterval::new(z.im.sub(r), z.im.add(r), bits + 8).round_outward(bits + 8),
        );
        let upper_idx = roots.len();
        roots.push(rect.clone());
        roots.push(rect.conj());
        pair_indices.push((upper_idx, upper_idx + 1));
    }
    assert_eq!(roots.len(), k, "every root must be accounted for");

    // dominance: exactly one modulus enclosure entirely above 1
    let one = Dyadic::one();
    let mut dominant = None;
    for (i, root) in roots.iter().enumerate() {
        let m2 = root.mod_squared();
        if m2.lo() > &one {
            if dominant.is_some() {
                return Err(CertError::NotCertified {
                    what: "two roots certify as dominant".into(),
                });
            }
            dominant = Some(i);
        } else if !(m2.hi() < &one) {
            return Err(CertError::Undecided { n: i as u64 });
        }
    }
    let dominant_index = dominant.ok_or(CertError::NotCertified {
        what: "no root has modulus above 1".into(),
    })?;

    // maximal-modulus pair among the strictly complex roots
    let mut pair = None;
    if !pair_indices.is_empty() {
        let moduli: Vec<DyadicInterval> = pair_indices
            .iter()
            .map(|&(u, _)| roots[u].modulus(bits + 8))
            .collect();
        let top = (0..moduli.len())
            .max_by(|&x, &y| moduli[x].lo().cmp(moduli[y].lo()))
            .unwrap();
        // the top pair must beat every other non-dominant root strictly
        for (i, m) in moduli.iter().enumerate() {
            if i != top && !(m.hi() < moduli[top].lo()) {
                return Err(CertError::Undecided { n: i as u64 });
            }
        }
        for (i, root) in roots.iter().enumerate() {
            if i == dominant_index || !root.on_real_line() {
                continue;
            }
            let m = root.modulus(bits + 8);
            if !(m.hi() < moduli[top].lo()) {
                return Err(CertError::Undecided { n: i as u64 });
            }
        }
        pair = Some((pair_indices[top], moduli[top].clone()));
    }

    let (dominant_pair, dominant_pair_modulus, dominant_pair_argument, second_modulus) =
        match pair {
            None => (None, None, None, None),
            Some(((u, l), modulus)) => {
                let arg = atan2_interval(roots[u].im(), roots[u].re(), bits)?;
                // max modulus among everything else (excluding dominant
                // and the pair itself)
                let mut lo = Dyadic::zero();
                let mut hi = Dyadic::zero();
                let mut any = false;
                for (i, root) in roots.iter().enumerate() {
                    if i == dominant_index || i == u || i == l {
                        continue;
                    }
                    any = true;
                    let m = root.modulus(bits);
                    if m.lo() > &lo {
                        lo = m.lo().clone();
                    }
                    if m.hi() > &hi {
                        hi = m.hi().clone();
                    }
                }
                let second = any.then(|| DyadicInterval::new(lo, hi, bits));
                (
                    Some((u, l)),
                    Some(modulus.round_outward(bits)),
                    Some(arg),
                    second,
                )
            }
        };

    Ok(ConjugateSpectrum {
        roots,
        dominant_index,
        dominant_pair,
        dominant_pair_modulus,
        dominant_pair_argument,
        second_modulus,
        bits,
    })
}

/// Certified enclosure of delta, where delta = k*omega mod 2*pi, computed
/// through the stable route -arg(2 - beta) using the relation
/// beta^k (2 - beta) = 1 satisfied by the non-dominant roots.
pub fn shift_angle(k: usize, spectrum: &ConjugateSpectrum) -> CertResult<DyadicInterval> {
    let bits = spectrum.bits();
    let beta = spectrum
        .dominant_pair_upper()
        .ok_or_else(|| CertError::BadParameter {
            what: "shift angle needs a complex dominant pair".into(),
        })?;
    // certification of the route: beta^k (2 - beta) must enclose 1
    let two = ComplexInterval::point(Dyadic::from_int(2), Dyadic::zero(), bits + 16);
    let two_minus = two.sub(beta);
    let product = beta.pow(k as u64, bits + 16).mul(&two_minus, bits + 16);
    if !product.contains_real(&Dyadic::one()) {
        return Err(CertError::NotCertified {
            what: "modulus relation beta^k (2 - beta) = 1 failed".into(),
        });
    }
    let arg = atan2_interval(two_minus.im(), two_minus.re(), bits)?;
    let half_pi = super::trig::pi(bits + 8).mul_pow2(-1);
    // arg(2 - beta) must sit in (-pi/2, 0), so delta = -arg lies in (0, pi/2)
    let ok = arg.hi() < &Dyadic::zero() && arg.lo() > &half_pi.hi().neg();
    if !ok {
        return Err(CertError::WindowViolation {
            what: "shift angle enclosure escapes (0, pi/2)".into(),
        });
    }
    Ok(arg.neg())
}
