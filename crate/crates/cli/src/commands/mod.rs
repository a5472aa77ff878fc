pub mod aphit;
pub mod collide;
pub mod decay;
pub mod orbit;
pub mod seq;
pub mod verify;

use floorsidon::certreal::Dyadic;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Outward dyadic bounds of a rational at the given precision, for feeding
/// exact decimals into interval-typed windows.
pub fn rational_interval(
    q: &BigRational,
    bits: u32,
) -> floorsidon::certreal::DyadicInterval {
    floorsidon::certreal::DyadicInterval::from_ratio(q.numer(), q.denom(), bits)
}

/// Exact rational value of a dyadic (mantissa times 2^exp).
pub fn rational_of(d: &Dyadic) -> BigRational {
    if d.exp() >= 0 {
        BigRational::from_integer(d.mant() << d.exp() as u64)
    } else {
        BigRational::new(d.mant().clone(), BigInt::one() << (-d.exp()) as u64)
    }
}
