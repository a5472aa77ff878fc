//! Closed dyadic intervals with outward rounding.
//!
//! Soundness contract: every operation returns an interval containing the
//! exact image of its inputs. Rounding at `p` bits adds at most
//! `2^(1-p) * max(|lo|, |hi|, 1)` of width on top of the exact image.

use num_bigint::BigInt;

use super::dyadic::{Dyadic, Round};

#[derive(Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl DyadicInterval {
    /// Requires lo <= hi and bits >= 1.
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> DyadicInterval {
        assert!(bits >= 1, "precision must be positive");
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        DyadicInterval { lo, hi, bits }
    }

    pub fn point(v: Dyadic, bits: u32) -> DyadicInterval {
        DyadicInterval::new(v.clone(), v, bits)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, bits: u32) -> DyadicInterval {
        DyadicInterval::point(Dyadic::from_int(v), bits)
    }

    /// Enclosure of num/den at `bits`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> DyadicInterval {
        let lo = Dyadic::from_ratio(num, den, bits, Round::Down);
        let hi = Dyadic::from_ratio(num, den, bits, Round::Up);
        DyadicInterval::new(lo, hi, bits)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(&self, bits: u32) -> DyadicInterval {
        DyadicInterval::new(self.lo.clone(), self.hi.clone(), bits)
    }

    /// Exact width hi - lo.
    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Exact midpoint.
    pub fn midpoint(&self) -> Dyadic {
        self.lo.average(&self.hi)
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains(&Dyadic::from_int(v.clone()))
    }

    pub fn contains_interval(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// Certified sign: Some(-1|0-excluded|1) when the interval is sign-definite.
    pub fn definite_sign(&self) -> Option<i8> {
        if self.is_strictly_positive() {
            Some(1)
        } else if self.is_strictly_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Entirely left of v (hi < v).
    pub fn lt(&self, v: &Dyadic) -> bool {
        self.hi < *v
    }

    /// Entirely right of v (lo > v).
    pub fn gt(&self, v: &Dyadic) -> bool {
        self.lo > *v
    }

    /// Entirely left of the other interval.
    pub fn entirely_before(&self, other: &DyadicInterval) -> bool {
        self.hi < other.lo
    }

    pub fn intersects(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Some(floor) when both endpoints share it; the certified floor decision.
    pub fn floor_decision(&self) -> Option<BigInt> {
        let fl = self.lo.floor_int();
        if fl == self.hi.floor_int() {
            Some(fl)
        } else {
            None
        }
    }

    /// Outward re-rounding at `bits`.
    pub fn round_outward(&self, bits: u32) -> DyadicInterval {
        DyadicInterval::new(
            self.lo.round(bits, Round::Down),
            self.hi.round(bits, Round::Up),
            bits,
        )
    }

    pub fn neg(&self) -> DyadicInterval {
        DyadicInterval::new(self.hi.neg(), self.lo.neg(), self.bits)
    }

    pub fn add(&self, rhs: &DyadicInterval) -> DyadicInterval {
        let bits = self.bits.max(rhs.bits);
        DyadicInterval::new(
            self.lo.add(&rhs.lo).round(bits, Round::Down),
            self.hi.add(&rhs.hi).round(bits, Round::Up),
            bits,
        )
    }

    pub fn sub(&self, rhs: &DyadicInterval) -> DyadicInterval {
        self.add(&rhs.neg())
    }

    /// Exact translation by a dyadic (no rounding).
    pub fn add_dyadic(&self, v: &Dyadic) -> DyadicInterval {
        DyadicInterval::new(self.lo.add(v), self.hi.add(v), self.bits)
    }

    pub fn sub_dyadic(&self, v: &Dyadic) -> DyadicInterval {
        self.add_dyadic(&v.neg())
    }

    pub fn mul(&self, rhs: &DyadicInterval) -> DyadicInterval {
        let bits = self.bits.max(rhs.bits);
        let cands = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let lo = cands.iter().min().unwrap().round(bits, Round::Down);
        let hi = cands.iter().max().unwrap().round(bits, Round::Up);
        DyadicInterval::new(lo, hi, bits)
    }

    /// Tight square (handles sign-spanning intervals exactly).
    pub fn square(&self) -> DyadicInterval {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let (lo, hi) = if self.contains_zero() {
            (Dyadic::zero(), a.max(b))
        } else {
            (a.clone().min(b.clone()), a.max(b))
        };
        DyadicInterval::new(
            lo.round(self.bits, Round::Down),
            hi.round(self.bits, Round::Up),
            self.bits,
        )
    }

    /// Exact scaling by an integer.
    pub fn mul_int(&self, k: &BigInt) -> DyadicInterval {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        DyadicInterval::new(lo, hi, self.bits)
    }

    /// Exact scaling by 2^k.
    pub fn mul_pow2(&self, k: i64) -> DyadicInterval {
        DyadicInterval::new(self.lo.mul_pow2(k), self.hi.mul_pow2(k), self.bits)
    }

    /// Quotient enclosure; rhs must be sign-definite (no zero inside).
    pub fn div(&self, rhs: &DyadicInterval) -> DyadicInterval {
        assert!(
            rhs.definite_sign().map_or(false, |s| s != 0),
            "division by an interval containing zero"
        );
        let bits = self.bits.max(rhs.bits);
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| a.div(b, bits, Round::Down))
            .min()
            .unwrap();
        let hi = pairs
            .iter()
            .map(|(a, b)| a.div(b, bits, Round::Up))
            .max()
            .unwrap();
        DyadicInterval::new(lo, hi, bits)
    }

    /// Enclosure of sqrt; requires lo >= 0.
    pub fn sqrt(&self) -> DyadicInterval {
        self.nth_root(2)
    }

    /// Enclosure of the n-th root; requires lo >= 0.
    pub fn nth_root(&self, n: u32) -> DyadicInterval {
        DyadicInterval::new(
            self.lo.nth_root(n, self.bits, Round::Down),
            self.hi.nth_root(n, self.bits, Round::Up),
            self.bits,
        )
    }

    /// Enclosure of x^n by binary exponentiation. Internal work runs at an
    /// elevated precision so the final outward rounding at `bits` dominates
    /// the error.
    pub fn pow(&self, n: u64, bits: u32) -> DyadicInterval {
        if n == 0 {
            return DyadicInterval::from_int(1, bits);
        }
        let slack = 2 * (64 - n.leading_zeros()) + 4;
        let work = bits.saturating_add(slack);
        let mut base = self.round_outward(work);
        let mut acc: Option<DyadicInterval> = None;
        let mut m = n;
        while m > 0 {
            if m & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base).round_outward(work),
                });
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base).round_outward(work);
            }
        }
        acc.unwrap().round_outward(bits)
    }

    pub fn intersect(&self, other: &DyadicInterval) -> Option<DyadicInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(DyadicInterval::new(lo, hi, self.bits.max(other.bits)))
        } else {
            None
        }
    }

    pub fn hull(&self, other: &DyadicInterval) -> DyadicInterval {
        DyadicInterval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.bits.max(other.bits),
        )
    }

    /// max(|lo|, |hi|, 1): the magnitude scale in the width contract.
    pub fn magnitude(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs()).max(Dyadic::one())
    }

    /// Largest absolute value attained on the interval (no clamping;
    /// use `magnitude` for the rounding contract).
    pub fn abs_upper(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Width bound from the rounding contract: 2^(1-bits) * magnitude.
    pub fn rounding_slack(&self) -> Dyadic {
        self.magnitude().mul_pow2(1 - self.bits as i64)
    }
}

impl std::fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}]@{} (~{})",
            self.lo,
            self.hi,
            self.bits,
            self.midpoint().to_f64()
        )
    }
}
