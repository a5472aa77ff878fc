//! Residue-class hitting for floor power sequences.
//!
//! Fix a modulus d and residue r. The bases x > 1 whose n-th floor power
//! lands in that class, floor(x^n) ≡ r (mod d), form a union of open cells
//! (m^(1/n), (m+1)^(1/n)) over the integers m ≡ r (mod d): inside one cell
//! the floor is constantly m. For large n these unions are dense in (1, ∞)
//! because the image of any base interval under x -> x^n eventually spans
//! more than one full residue period. This module makes those facts
//! effective: it enumerates the cells meeting a window with certified
//! endpoints, searches a concrete base for a hitting exponent with certified
//! floors, exhibits explicit dense-cover witnesses, and (in [`nested`])
//! drives a nested-interval construction whose limit point hits every
//! requested class.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::certreal::{Dyadic, DyadicInterval, PrecisionPolicy};
use crate::floorpow::floor_pow;
use crate::algnum::AlgebraicReal;
use crate::{CertError, CertResult};

mod nested;

pub use nested::{nested_builder, NestedRecord, NestedState, Witness, WitnessRecord};

/// A residue class target: floor values congruent to `residue` mod `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct APSpec {
    modulus: u64,
    residue: u64,
}

impl APSpec {
    pub fn new(modulus: u64, residue: u64) -> CertResult<APSpec> {
        if modulus < 1 {
            return Err(CertError::BadParameter {
                what: "modulus must be at least 1".into(),
            });
        }
        if residue >= modulus {
            return Err(CertError::BadParameter {
                what: format!("residue {residue} not below modulus {modulus}"),
            });
        }
        Ok(APSpec { modulus, residue })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// True when `value` lies in the class. Uses floored division, so
    /// negative inputs reduce to their canonical nonnegative residue.
    pub fn matches(&self, value: &BigInt) -> bool {
        value.mod_floor(&BigInt::from(self.modulus)) == BigInt::from(self.residue)
    }
}

/// Round-robin enumeration of residue classes: round t lists (d, r) for
/// d = 1..=t and r = 0..d, so every class appears in all later rounds and
/// is revisited infinitely often as the prefix length grows.
pub fn diagonal_specs(count: usize) -> Vec<APSpec> {
    let mut out = Vec::with_capacity(count);
    let mut round = 1u64;
    while out.len() < count {
        'inner: for d in 1..=round {
            for r in 0..d {
                if out.len() == count {
                    break 'inner;
                }
                out.push(APSpec {
                    modulus: d,
                    residue: r,
                });
            }
        }
        round += 1;
    }
    out
}

/// One open base cell (m^(1/n), (m+1)^(1/n)): the x > 1 with floor(x^n) = m.
#[derive(Debug, Clone)]
pub struct ApCell {
    floor_value: BigInt,
    lo: DyadicInterval,
    hi: DyadicInterval,
}

impl ApCell {
    /// The constant floor value m taken on the cell.
    pub fn floor_value(&self) -> &BigInt {
        &self.floor_value
    }

    /// Enclosure of the left endpoint m^(1/n).
    pub fn lo(&self) -> &DyadicInterval {
        &self.lo
    }

    /// Enclosure of the right endpoint (m+1)^(1/n).
    pub fn hi(&self) -> &DyadicInterval {
        &self.hi
    }
}

/// Exact n-th power of a dyadic by repeated squaring.
pub(crate) fn pow_exact(x: &Dyadic, n: u64) -> Dyadic {
    let mut acc = Dyadic::one();
    let mut base = x.clone();
    let mut m = n;
    while m > 0 {
        if m & 1 == 1 {
            acc = acc.mul(&base);
        }
        m >>= 1;
        if m > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

/// Three-way comparison of an enclosed real against an exact dyadic bound:
/// `Some(true)` when the value certifiably exceeds the bound, `Some(false)`
/// when it certifiably does not (equality counts as not exceeding), `None`
/// when the enclosure straddles the bound.
fn certified_gt(enc: &DyadicInterval, bound: &Dyadic) -> Option<bool> {
    if enc.lo() > bound {
        Some(true)
    } else if enc.hi() <= bound {
        Some(false)
    } else {
        None
    }
}

fn certified_lt(enc: &DyadicInterval, bound: &Dyadic) -> Option<bool> {
    if enc.hi() < bound {
        Some(true)
    } else if enc.lo() >= bound {
        Some(false)
    } else {
        None
    }
}

/// Decides whether the open cell for m at exponent n meets the open window,
/// escalating root precision until the comparison resolves. Returns the
/// endpoint enclosures alongside the verdict so callers can reuse them.
fn cell_meets_window(
    m: &BigInt,
    n: u64,
    w_lo: &Dyadic,
    w_hi: &Dyadic,
    bits: u32,
) -> CertResult<(bool, DyadicInterval, DyadicInterval)> {
    let root_order = n as u32;
    let mut work = bits;
    for _ in 0..6 {
        let cell_lo = DyadicInterval::point(Dyadic::from_int(m.clone()), work).nth_root(root_order);
        let cell_hi =
            DyadicInterval::point(Dyadic::from_int(m + BigInt::one()), work).nth_root(root_order);
        // open-vs-open intersection: cell_hi > w_lo and cell_lo < w_hi
        match (
            certified_gt(&cell_hi, w_lo),
            certified_lt(&cell_lo, w_hi),
        ) {
            (Some(false), _) | (_, Some(false)) => return Ok((false, cell_lo, cell_hi)),
            (Some(true), Some(true)) => return Ok((true, cell_lo, cell_hi)),
            _ => work = work.saturating_mul(2),
        }
    }
    Err(CertError::NotCertified {
        what: format!("cell boundary for m = {m} at exponent {n} undecidable against window"),
    })
}

fn check_window(w_lo: &Dyadic, w_hi: &Dyadic) -> CertResult<()> {
    if w_lo < &Dyadic::one() {
        return Err(CertError::BadParameter {
            what: "window must lie in (1, infinity)".into(),
        });
    }
    if w_lo >= w_hi {
        return Err(CertError::EmptyWindow);
    }
    Ok(())
}

/// Enclosures of w_lo^n and w_hi^n sharp enough that their floors sit
/// within a couple of integers of the truth. At the caller's precision
/// alone the absolute slack grows like 2^(n log2 w - bits), and a
/// candidate walk starting from such a floor would crawl through
/// millions of spurious cells below the window image.
fn window_power_enclosures(
    w_lo: &Dyadic,
    w_hi: &Dyadic,
    n: u64,
    bits: u32,
) -> (DyadicInterval, DyadicInterval) {
    let rough = DyadicInterval::point(w_hi.clone(), bits).pow(n, bits);
    let magnitude = rough.hi().floor_int().bits() as u32;
    let work = bits.max(magnitude + 64);
    (
        DyadicInterval::point(w_lo.clone(), work).pow(n, work),
        DyadicInterval::point(w_hi.clone(), work).pow(n, work),
    )
}

/// All cells (m^(1/n), (m+1)/n-th root) with m ≡ r (mod d) meeting the open
/// window (window.lo, window.hi), in increasing m order. Endpoint enclosures
/// are computed at `bits` significant bits (refined further where needed to
/// decide a boundary). An empty result is a certificate that no cell of the
/// class meets the window at this exponent.
pub fn ap_interval_union(
    n: u64,
    spec: &APSpec,
    window: &DyadicInterval,
    bits: u32,
) -> CertResult<Vec<ApCell>> {
    if n < 1 {
        return Err(CertError::BadParameter {
            what: "exponent must be at least 1".into(),
        });
    }
    let (w_lo, w_hi) = (window.lo().clone(), window.hi().clone());
    check_window(&w_lo, &w_hi)?;

    let (lo_pow, hi_pow) = window_power_enclosures(&w_lo, &w_hi, n, bits);
    // Candidate m straddle [floor(w_lo^n) - 1, floor(w_hi^n) + 1]; each one
    // is then accepted or rejected by a certified endpoint comparison.
    let mut m: BigInt = lo_pow.lo().floor_int() - 1;
    if m.is_negative() {
        m = BigInt::zero();
    }
    let d = BigInt::from(spec.modulus);
    let r = BigInt::from(spec.residue);
    let shift = (&r - &m).mod_floor(&d);
    m += shift;
    let last = hi_pow.hi().floor_int() + 1;

    let mut cells = Vec::new();
    while m <= last {
        let (meets, cell_lo, cell_hi) = cell_meets_window(&m, n, &w_lo, &w_hi, bits)?;
        if meets {
            cells.push(ApCell {
                floor_value: m.clone(),
                lo: cell_lo,
                hi: cell_hi,
            });
        }
        m += &d;
    }
    Ok(cells)
}

/// Least exponent n <= n_max with floor(x^n) in the class, or None if the
/// whole range misses. Floors are certified, so a `Some` return is a proof
/// and `None` is a proof of absence over the range.
pub fn hits_ap(
    x: &AlgebraicReal,
    spec: &APSpec,
    n_max: u64,
    policy: &PrecisionPolicy,
) -> CertResult<Option<u64>> {
    for n in 1..=n_max {
        let (floor, _) = floor_pow(x, n, policy)?;
        if spec.matches(&floor) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Explicit witness that the class's cell union meets a window at some
/// exponent n >= the requested threshold.
#[derive(Debug, Clone)]
pub struct DensityWitness {
    exponent: u64,
    floor_value: BigInt,
    cell_lo: DyadicInterval,
    cell_hi: DyadicInterval,
}

impl DensityWitness {
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn floor_value(&self) -> &BigInt {
        &self.floor_value
    }

    pub fn cell_lo(&self) -> &DyadicInterval {
        &self.cell_lo
    }

    pub fn cell_hi(&self) -> &DyadicInterval {
        &self.cell_hi
    }
}

const DENSITY_EXPONENT_SPAN: u64 = 10_000;

/// Finds the least n >= n_min, and for it the smallest m ≡ r (mod d), whose
/// cell meets the open window, returning certified cell endpoints. The image
/// of the window under x -> x^n grows without bound, so a witness always
/// exists; the search is capped generously and reports overflow rather than
/// looping if the cap is somehow reached.
pub fn density_probe(
    spec: &APSpec,
    n_min: u64,
    window: &DyadicInterval,
    bits: u32,
) -> CertResult<DensityWitness> {
    let (w_lo, w_hi) = (window.lo().clone(), window.hi().clone());
    check_window(&w_lo, &w_hi)?;
    let start = n_min.max(1);
    for n in start..start + DENSITY_EXPONENT_SPAN {
        let (lo_pow, hi_pow) = window_power_enclosures(&w_lo, &w_hi, n, bits);
        let mut m: BigInt = lo_pow.lo().floor_int() - 1;
        if m.is_negative() {
            m = BigInt::zero();
        }
        let d = BigInt::from(spec.modulus);
        let shift = (BigInt::from(spec.residue) - &m).mod_floor(&d);
        m += shift;
        let last = hi_pow.hi().floor_int() + 1;
        while m <= last {
            let (meets, cell_lo, cell_hi) = cell_meets_window(&m, n, &w_lo, &w_hi, bits)?;
            if meets {
                return Ok(DensityWitness {
                    exponent: n,
                    floor_value: m,
                    cell_lo,
                    cell_hi,
                });
            }
            m += &d;
        }
    }
    Err(CertError::ExponentOverflow {
        op: "density probe exponent cap".into(),
    })
}
