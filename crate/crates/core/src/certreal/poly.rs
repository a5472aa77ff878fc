//! Integer polynomials: exact evaluation, Sturm chains, square-free parts.
//!
//! Coefficients are stored ascending by degree; the zero polynomial is the
//! empty vector. All divisions here are exact integer steps (primitive
//! pseudo-remainders), so sign information is never corrupted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::interval::DyadicInterval;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPolynomial {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> IntPolynomial {
        IntPolynomial::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPolynomial {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn constant(c: BigInt) -> IntPolynomial {
        IntPolynomial::new(vec![c])
    }

    /// c * x^k.
    pub fn monomial(c: BigInt, k: usize) -> IntPolynomial {
        if c.is_zero() {
            return IntPolynomial::zero();
        }
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPolynomial { coeffs: v }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| c.is_one())
    }

    /// Exact Horner evaluation at a dyadic point.
    pub fn eval_exact(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Dyadic::from_int(c.clone()));
        }
        acc
    }

    /// Sign of the exact value at x.
    pub fn sign_at(&self, x: &Dyadic) -> i8 {
        self.eval_exact(x).signum()
    }

    /// Horner evaluation over an interval with outward rounding at `bits`.
    pub fn eval_interval(&self, x: &DyadicInterval, bits: u32) -> DyadicInterval {
        let mut acc = DyadicInterval::from_int(0, bits);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(x)
                .add_dyadic(&Dyadic::from_int(c.clone()))
                .round_outward(bits);
        }
        acc
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPolynomial::new(out)
    }

    pub fn sub(&self, rhs: &IntPolynomial) -> IntPolynomial {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn mul_scalar(&self, k: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add_scalar(&self, k: &BigInt) -> IntPolynomial {
        let mut cs = self.coeffs.clone();
        if cs.is_empty() {
            cs.push(k.clone());
        } else {
            cs[0] += k;
        }
        IntPolynomial::new(cs)
    }

    /// p(t^k): spreads coefficients k positions apart.
    pub fn compose_power(&self, k: usize) -> IntPolynomial {
        assert!(k >= 1);
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        IntPolynomial::new(out)
    }

    /// Positive gcd of the coefficients (1 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }

    /// Divide out the content; leading coefficient keeps its sign.
    pub fn primitive_part(&self) -> IntPolynomial {
        let g = self.content();
        if g.is_one() {
            return self.clone();
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Exact quotient; None when the division does not come out exact.
    pub fn exact_div(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        let (dd, dn) = (self.degree()?, divisor.degree()?);
        if dd < dn {
            return None;
        }
        let lead = divisor.leading()?.clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dd - dn + 1];
        for k in (0..=dd - dn).rev() {
            let top = rem[k + dn].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPolynomial::new(quot))
    }

    /// Pseudo-remainder scaled only by positive powers of |lc(divisor)|, so
    /// the result is `c*self - q*divisor` with c > 0 (sign-safe for Sturm).
    fn pseudo_rem_abs(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let dn = divisor.degree().expect("nonzero divisor");
        let lead = divisor.leading().unwrap().clone();
        let lead_abs = lead.abs();
        let lead_sign_neg = lead.is_negative();
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < dn {
                break;
            }
            let top = rem.leading().unwrap().clone();
            // rem = rem * |lc| - sgn(lc) * top * x^(dr-dn) * divisor
            let shift_mul = IntPolynomial::monomial(
                if lead_sign_neg { -&top } else { top.clone() },
                dr - dn,
            );
            rem = rem.mul_scalar(&lead_abs).sub(&shift_mul.mul(divisor));
            debug_assert!(rem.degree().map_or(true, |d| d < dr));
        }
        rem
    }

    /// Primitive polynomial gcd with positive leading coefficient.
    pub fn gcd(&self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut a = self.primitive_part();
        let mut b = rhs.primitive_part();
        if a.is_zero() {
            return normalize_sign(b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem_abs(&b).primitive_part();
            a = b;
            b = r;
        }
        normalize_sign(a)
    }

    /// Square-free part: p / gcd(p, p'), primitive, positive leading coeff.
    pub fn squarefree_part(&self) -> IntPolynomial {
        let pp = self.primitive_part();
        let g = pp.gcd(&pp.derivative());
        if g.degree() == Some(0) {
            return normalize_sign(pp);
        }
        let q = pp
            .exact_div(&g)
            .or_else(|| pp.neg().exact_div(&g))
            .expect("gcd divides its argument");
        normalize_sign(q.primitive_part())
    }

    /// Sturm chain of a square-free polynomial.
    pub fn sturm_chain(&self) -> Vec<IntPolynomial> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2]
                .pseudo_rem_abs(&chain[n - 1])
                .primitive_part()
                .neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// Power-of-two B with every real root in (-B, B).
    pub fn cauchy_bound(&self) -> Dyadic {
        let lead = match self.leading() {
            Some(l) => l,
            None => return Dyadic::one(),
        };
        let maxc = self
            .coeffs
            .iter()
            .take(self.coeffs.len() - 1)
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        if maxc.is_zero() {
            return Dyadic::from_int(2);
        }
        let k = (maxc.bits() as i64 - lead.bits() as i64 + 2).max(1);
        Dyadic::power_of_two(k)
    }
}

fn normalize_sign(p: IntPolynomial) -> IntPolynomial {
    if p.leading().map_or(false, |c| c.is_negative()) {
        p.neg()
    } else {
        p
    }
}

/// Sign variations in a sequence, ignoring zeros.
fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs {
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Sign variations of the chain at a point.
pub fn variations_at(chain: &[IntPolynomial], x: &Dyadic) -> usize {
    variations(chain.iter().map(|p| p.sign_at(x)))
}

/// Number of roots of the (square-free) chain head in the half-open
/// interval (a, b]. Correct even when a or b is itself a root.
pub fn count_roots_half_open(chain: &[IntPolynomial], a: &Dyadic, b: &Dyadic) -> usize {
    debug_assert!(a <= b);
    let va = variations_at(chain, a);
    let vb = variations_at(chain, b);
    va.saturating_sub(vb)
}

/// Total number of real roots of the (square-free) chain head.
pub fn count_real_roots(chain: &[IntPolynomial]) -> usize {
    let at_inf = |neg: bool| {
        variations(chain.iter().map(|p| match p.degree() {
            None => 0,
            Some(d) => {
                let s = if p.leading().unwrap().is_negative() { -1 } else { 1 };
                if neg && d % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        }))
    };
    at_inf(true).saturating_sub(at_inf(false))
}
