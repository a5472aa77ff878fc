//! Base selector grammar shared by the sequence-oriented commands:
//! `plastic`, `kfib:K`, `dyadic:VALUE` (any exact decimal), or
//! `root:C0,C1,...,CK` with polynomial coefficients listed constant term
//! first; the selected number is the polynomial's largest real root.

use floorsidon::algnum::{k_fibonacci_root, plastic_constant, rational, root_in_window, AlgebraicReal};
use floorsidon::certreal::{isolate_all, IntPolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::CliFailure;

pub fn parse_base(selector: &str) -> Result<AlgebraicReal, CliFailure> {
    if selector == "plastic" {
        return Ok(plastic_constant());
    }
    if let Some(arg) = selector.strip_prefix("kfib:") {
        let k: usize = arg
            .parse()
            .map_err(|_| usage(format!("kfib order must be an integer, got {arg:?}")))?;
        return k_fibonacci_root(k).map_err(CliFailure::from);
    }
    if let Some(arg) = selector.strip_prefix("dyadic:") {
        let q = parse_decimal(arg)
            .ok_or_else(|| usage(format!("dyadic base must be a decimal number, got {arg:?}")))?;
        return Ok(rational(&q));
    }
    if let Some(arg) = selector.strip_prefix("root:") {
        let coeffs: Result<Vec<BigInt>, _> = arg.split(',').map(|c| c.trim().parse()).collect();
        let coeffs = coeffs
            .map_err(|_| usage(format!("root coefficients must be integers, got {arg:?}")))?;
        let p = IntPolynomial::new(coeffs);
        let isos = isolate_all(&p).map_err(CliFailure::from)?;
        let top = isos
            .last()
            .ok_or_else(|| usage("polynomial has no real roots".into()))?;
        return root_in_window(&p, top.lo(), top.hi()).map_err(CliFailure::from);
    }
    Err(usage(format!(
        "unknown base selector {selector:?}; expected plastic, kfib:K, dyadic:VALUE, or root:C0,C1,..."
    )))
}

/// Exact decimal to rational: "2.125" becomes 17/8, "0.5" becomes 1/2.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() || s.starts_with('-') || s.starts_with('+') {
        return None;
    }
    match s.split_once('.') {
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
        Some((int_part, frac_part)) => {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let int_val: BigInt = if int_part.is_empty() {
                BigInt::from(0)
            } else {
                int_part.parse().ok()?
            };
            let frac_val: BigInt = frac_part.parse().ok()?;
            let den = BigInt::from(10).pow(frac_part.len() as u32);
            Some(BigRational::new(int_val * &den + frac_val, den))
        }
    }
}

/// "LO,HI" with both parts exact decimals, LO < HI.
pub fn parse_decimal_pair(s: &str) -> Option<(BigRational, BigRational)> {
    let (lo, hi) = s.split_once(',')?;
    let lo = parse_decimal(lo)?;
    let hi = parse_decimal(hi)?;
    if lo < hi {
        Some((lo, hi))
    } else {
        None
    }
}

pub fn usage(message: String) -> CliFailure {
    CliFailure::Usage(message)
}
