//! Exact binary rationals: mantissa * 2^exp with directed rounding.
//!
//! Every finite f64 is representable exactly, and add/sub/mul are exact,
//! so enclosure endpoints never drift unless a rounding is requested.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// Rounding direction for operations that cannot stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant * 2^exp`, normalized so `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().expect("nonzero mantissa");
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Dyadic {
        Dyadic::new(v.into(), 0)
    }

    /// 2^k.
    pub fn power_of_two(k: i64) -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    /// Exact value of a finite f64. None for NaN or infinities.
    pub fn from_f64(x: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074) // subnormal
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * mant as i64), exp))
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// -1, 0, or 1.
    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn sig_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exact negation.
    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact sum.
    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    /// Exact difference.
    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.neg())
    }

    /// Exact product.
    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    /// Exact scaling by 2^k.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Exact halving of a sum; the workhorse of bisection.
    pub fn average(&self, rhs: &Dyadic) -> Dyadic {
        self.add(rhs).mul_pow2(-1)
    }

    /// Round to at most `bits` significant bits in the given direction.
    /// Exact values with few bits pass through unchanged.
    pub fn round(&self, bits: u32, dir: Round) -> Dyadic {
        assert!(bits >= 1, "rounding needs at least one bit");
        let len = self.mant.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        let mant = shr_directed(&self.mant, shift, dir);
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// Largest integer <= self.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_directed(&self.mant, (-self.exp) as u64, Round::Down)
        }
    }

    /// Smallest integer >= self.
    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_directed(&self.mant, (-self.exp) as u64, Round::Up)
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0
    }

    /// self - floor(self), exact, in [0, 1).
    pub fn frac(&self) -> Dyadic {
        self.sub(&Dyadic::from_int(self.floor_int()))
    }

    /// Directed rounding of num/den to `bits` significant bits. den != 0.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den, dir) = if den.is_negative() {
            (-num, -den, dir)
        } else {
            (num.clone(), den.clone(), dir)
        };
        if num.is_zero() {
            return Dyadic::zero();
        }
        // scale num so the quotient has ~bits+1 significant bits
        let s = (den.bits() + bits as u64 + 2).saturating_sub(num.bits());
        let scaled = &num << s;
        let (q, r) = num_integer::Integer::div_rem(&scaled, &den);
        // div_rem truncates toward zero; fix direction by remainder sign
        let q = match dir {
            Round::Down => {
                if r.is_negative() {
                    q - 1
                } else {
                    q
                }
            }
            Round::Up => {
                if r.is_positive() {
                    q + 1
                } else {
                    q
                }
            }
        };
        Dyadic::new(q, -(s as i64)).round(bits, dir)
    }

    /// Directed rounding of self/rhs. rhs != 0.
    pub fn div(&self, rhs: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        let q = Dyadic::from_ratio(&self.mant, &rhs.mant, bits, dir);
        q.mul_pow2(self.exp - rhs.exp)
    }

    /// Directed n-th root for self >= 0.
    pub fn nth_root(&self, n: u32, bits: u32, dir: Round) -> Dyadic {
        assert!(n >= 1);
        assert!(self.signum() >= 0, "nth_root of negative value");
        if self.is_zero() {
            return Dyadic::zero();
        }
        if n == 1 {
            return self.round(bits, dir);
        }
        // shift so that exponent is divisible by n and the mantissa carries
        // enough bits for `bits` significant result bits
        let want = (n as u64) * (bits as u64 + 2);
        let mut s = want.saturating_sub(self.mant.bits()) as i64;
        let rem = (self.exp - s).rem_euclid(n as i64);
        s += rem;
        let scaled: BigInt = &self.mant << s as u64;
        let root = scaled.nth_root(n);
        let exact = num_traits::Pow::pow(&root, n) == scaled;
        let mant = match dir {
            Round::Down => root,
            Round::Up => {
                if exact {
                    root
                } else {
                    root + 1
                }
            }
        };
        Dyadic::new(mant, (self.exp - s) / n as i64).round(bits, dir)
    }

    /// Exact decimal expansion (dyadics always terminate in base 10).
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return (&self.mant << self.exp as u64).to_string();
        }
        let k = (-self.exp) as u64;
        let five = BigInt::from(5u32);
        let digits: BigInt = &self.mant * num_traits::Pow::pow(&five, k as usize);
        let neg = digits.is_negative();
        let mut s = digits.abs().to_string();
        let k = k as usize;
        if s.len() <= k {
            let pad = k - s.len();
            s = format!("0.{}{}", "0".repeat(pad), s);
        } else {
            s.insert(s.len() - k, '.');
        }
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }

    /// Nearest f64 (approximate; saturates on overflow).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(64, Round::Down);
        let m = num_traits::ToPrimitive::to_f64(&r.mant).unwrap_or(f64::NAN);
        // split the scaling so powi never overflows on the way to a
        // subnormal (powi(-n) goes through 1/2^n internally)
        let e = r.exp.clamp(-1200, 1200);
        let h = e / 2;
        m * 2f64.powi(h as i32) * 2f64.powi((e - h) as i32)
    }
}

/// Shift right with directed rounding (num-bigint's `>>` floors, which is
/// Round::Down; Up is obtained by negating twice).
fn shr_directed(v: &BigInt, shift: u64, dir: Round) -> BigInt {
    match dir {
        Round::Down => v >> shift,
        Round::Up => -((-v) >> shift),
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let ls = self.signum();
        let rs = other.signum();
        if ls != rs {
            return ls.cmp(&rs);
        }
        if ls == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: compare mantissas aligned to the smaller exponent
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

// Display shares the debug form; decimal output stays explicit via
// `to_decimal_string` so huge expansions never sneak into logs.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}
