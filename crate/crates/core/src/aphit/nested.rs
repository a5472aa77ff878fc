//! Nested-interval construction of a base hitting every requested residue
//! class.
//!
//! Starting from a closed dyadic interval inside (1, infinity), each step
//! consumes one class (d, r): it finds an exponent n at which the image of
//! the current interval under x -> x^n is longer than 2d (so a full cell of
//! the class fits strictly inside), picks the smallest admissible floor
//! value m ≡ r (mod d), and shrinks the interval to a closed dyadic
//! subinterval of the open cell (m^(1/n), (m+1)^(1/n)). Every point of the
//! final interval then satisfies floor(x^n) = m for all recorded witnesses
//! simultaneously, and exponents increase strictly, so feeding the
//! round-robin class enumeration produces intervals converging to a base
//! whose floor sequence meets every class infinitely often.
//!
//! All interval endpoints stay exact dyadics: image lengths, placement
//! bounds, and the final floor-property verification use exact powers, so
//! a returned state is a checked certificate rather than an approximation.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::{pow_exact, APSpec};
use crate::certreal::{Dyadic, DyadicInterval, Round};
use crate::{CertError, CertResult};

/// One satisfied class: floor(x^exponent) = floor_value ≡ r (mod d) holds
/// for every x in the builder's final interval.
#[derive(Debug, Clone)]
pub struct Witness {
    spec: APSpec,
    exponent: u64,
    floor_value: BigInt,
}

impl Witness {
    pub fn spec(&self) -> &APSpec {
        &self.spec
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn floor_value(&self) -> &BigInt {
        &self.floor_value
    }
}

/// Current interval, satisfied classes, and the exponent floor for the next
/// step. Invariants maintained by the builder: 1 < lo < hi, each shrink
/// nests strictly inside its predecessor, witness exponents increase
/// strictly, and for every witness the whole interval maps into
/// [m, m+1) under x -> x^n.
#[derive(Debug, Clone)]
pub struct NestedState {
    lo: Dyadic,
    hi: Dyadic,
    witnesses: Vec<Witness>,
    min_next_exponent: u64,
}

impl NestedState {
    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.average(&self.hi)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    pub fn min_next_exponent(&self) -> u64 {
        self.min_next_exponent
    }

    /// Serializable snapshot with exact decimal endpoints.
    pub fn record(&self) -> NestedRecord {
        NestedRecord {
            lo: self.lo.to_decimal_string(),
            hi: self.hi.to_decimal_string(),
            lo_fraction_bits: fraction_bits(&self.lo),
            hi_fraction_bits: fraction_bits(&self.hi),
            min_next_exponent: self.min_next_exponent,
            witnesses: self
                .witnesses
                .iter()
                .map(|w| WitnessRecord {
                    modulus: w.spec.modulus(),
                    residue: w.spec.residue(),
                    exponent: w.exponent,
                    floor_value: w.floor_value.to_string(),
                })
                .collect(),
        }
    }
}

fn fraction_bits(x: &Dyadic) -> u64 {
    if x.exp() < 0 {
        (-x.exp()) as u64
    } else {
        0
    }
}

/// Snapshot of a [`NestedState`] for export. Endpoints are exact decimal
/// strings (dyadic values terminate in base 10); `*_fraction_bits` = b means
/// the endpoint is an integer multiple of 2^-b, so the string is exact, not
/// rounded.
#[derive(Debug, Clone, Serialize)]
pub struct NestedRecord {
    pub lo: String,
    pub hi: String,
    pub lo_fraction_bits: u64,
    pub hi_fraction_bits: u64,
    pub min_next_exponent: u64,
    pub witnesses: Vec<WitnessRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub modulus: u64,
    pub residue: u64,
    pub exponent: u64,
    pub floor_value: String,
}

fn root_precision(n: u64) -> u32 {
    // cell width at exponent n scales like x / (n * m) with m < hi^n, so a
    // precision growing linearly in n leaves the rounding error far below
    // the cell width
    160 + 2 * n.min(1 << 20) as u32
}

/// Runs the construction for `specs` in order, starting from the closed
/// interval `start` (which must satisfy 1 < lo < hi). Exponents are chosen
/// least-first above `min_next_exponent`; a step that would need an exponent
/// beyond `exponent_cap` reports overflow instead of searching further.
pub fn nested_builder(
    specs: &[APSpec],
    start: &DyadicInterval,
    exponent_cap: u64,
) -> CertResult<NestedState> {
    if start.lo() <= &Dyadic::one() {
        return Err(CertError::BadParameter {
            what: "start interval must lie strictly above 1".into(),
        });
    }
    if start.lo() >= start.hi() {
        return Err(CertError::EmptyWindow);
    }
    let mut state = NestedState {
        lo: start.lo().clone(),
        hi: start.hi().clone(),
        witnesses: Vec::with_capacity(specs.len()),
        min_next_exponent: 0,
    };
    for spec in specs {
        advance(&mut state, spec, exponent_cap)?;
    }
    Ok(state)
}

fn advance(state: &mut NestedState, spec: &APSpec, exponent_cap: u64) -> CertResult<()> {
    let d = BigInt::from(spec.modulus());
    let r = BigInt::from(spec.residue());
    let two_d = Dyadic::from_int(2 * BigInt::from(spec.modulus()));

    // margin-trimmed placement bounds in base space; powers of these decide
    // admissibility exactly
    let margin = state.hi.sub(&state.lo).mul_pow2(-8);
    let a = state.lo.add(&margin);
    let b = state.hi.sub(&margin);

    let mut n = state.min_next_exponent + 1;
    loop {
        if n > exponent_cap {
            return Err(CertError::ExponentOverflow {
                op: format!(
                    "nested builder exceeded exponent cap {exponent_cap} for class ({}, {})",
                    spec.modulus(),
                    spec.residue()
                ),
            });
        }
        let image_len = pow_exact(&state.hi, n).sub(&pow_exact(&state.lo, n));
        if image_len > two_d {
            // smallest m ≡ r (mod d) with m > a^n; the cell fits iff also
            // m + 1 < b^n, and no larger m in the class can fit if this one
            // does not
            let a_n = pow_exact(&a, n);
            let b_n = pow_exact(&b, n);
            let mut m: BigInt = a_n.floor_int() + 1;
            let shift = (&r - &m).mod_floor(&d);
            m += shift;
            if Dyadic::from_int(&m + 1) < b_n {
                let (new_lo, new_hi) = shrink_to_cell(&m, n)?;
                state.lo = new_lo;
                state.hi = new_hi;
                state.witnesses.push(Witness {
                    spec: *spec,
                    exponent: n,
                    floor_value: m,
                });
                state.min_next_exponent = n;
                return Ok(());
            }
        }
        n += 1;
    }
}

/// Closed dyadic [L, H] inside the open cell (m^(1/n), (m+1)^(1/n)), with
/// the floor property m <= L^n and H^n < m+1 verified by exact powers.
fn shrink_to_cell(m: &BigInt, n: u64) -> CertResult<(Dyadic, Dyadic)> {
    let bits = root_precision(n);
    let m_lo = Dyadic::from_int(m.clone());
    let m_hi = Dyadic::from_int(m + 1);
    let lo = m_lo.nth_root(n as u32, bits, Round::Up);
    let mut hi = m_hi.nth_root(n as u32, bits, Round::Down);
    if pow_exact(&hi, n) >= m_hi {
        // the right root was exactly representable; step strictly inside
        hi = hi.sub(&hi.sub(&lo).mul_pow2(-16));
    }
    if !(lo < hi && pow_exact(&lo, n) >= m_lo && pow_exact(&hi, n) < m_hi) {
        return Err(CertError::NotCertified {
            what: format!("shrink to cell of m = {m} at exponent {n} failed verification"),
        });
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aphit::{diagonal_specs, hits_ap};
    use crate::certreal::PrecisionPolicy;
    use crate::floorpow::floor_pow;
    use crate::{algnum, measure};
    use num_rational::BigRational;
    use num_traits::Pow;

    fn start_interval() -> DyadicInterval {
        // [2 + 2^-4, 2 + 2^-3] = [33/16, 17/8]
        DyadicInterval::new(
            Dyadic::from_f64(2.0625).unwrap(),
            Dyadic::from_f64(2.125).unwrap(),
            64,
        )
    }

    #[test]
    fn first_step_matches_hand_computation() {
        // from [33/16, 17/8] with class (1, 0): least n with exact image
        // length above 2 is n = 4, and the margin-trimmed bounds
        // (18.104..., 20.381...) admit exactly m = 19
        let specs = vec![APSpec::new(1, 0).unwrap()];
        let state = nested_builder(&specs, &start_interval(), 100).unwrap();
        assert_eq!(state.witnesses().len(), 1);
        let w = &state.witnesses()[0];
        assert_eq!(w.exponent(), 4);
        assert_eq!(w.floor_value(), &BigInt::from(19));
        assert_eq!(state.min_next_exponent(), 4);
        // interval sits inside (19^(1/4), 20^(1/4)) = (2.0877..., 2.1147...)
        assert!(pow_exact(state.lo(), 4) >= Dyadic::from_int(19));
        assert!(pow_exact(state.hi(), 4) < Dyadic::from_int(20));
    }

    #[test]
    fn diagonal_prefix_builds_nested_certificate() {
        let specs = diagonal_specs(6);
        let start = start_interval();
        let state = nested_builder(&specs, &start, 10_000).unwrap();
        assert_eq!(state.witnesses().len(), 6);

        // strictly increasing exponents, residues honored
        for pair in state.witnesses().windows(2) {
            assert!(pair[0].exponent() < pair[1].exponent());
        }
        for w in state.witnesses() {
            assert!(w.spec().matches(w.floor_value()));
        }

        // strict nesting inside the start interval
        assert!(state.lo() > start.lo());
        assert!(state.hi() < start.hi());
        assert!(state.lo() < state.hi());

        // the whole final interval satisfies every witness: exact powers of
        // both endpoints and the midpoint land in [m, m+1)
        for w in state.witnesses() {
            let n = w.exponent();
            let m = Dyadic::from_int(w.floor_value().clone());
            let m1 = Dyadic::from_int(w.floor_value() + 1);
            for x in [state.lo().clone(), state.midpoint(), state.hi().clone()] {
                let p = pow_exact(&x, n);
                assert!(p >= m && p < m1, "witness n = {n} fails at sample");
            }
        }
    }

    #[test]
    fn witnesses_agree_with_certified_floor_route() {
        let specs = diagonal_specs(4);
        let state = nested_builder(&specs, &start_interval(), 10_000).unwrap();
        let mid = state.midpoint();
        let x = algnum::rational(&measure::dyadic_to_rational(&mid));
        let policy = PrecisionPolicy::default();
        for w in state.witnesses() {
            let (floor, _) = floor_pow(&x, w.exponent(), &policy).unwrap();
            assert_eq!(&floor, w.floor_value());
            // the recorded exponent hits the class, so the least hit is at
            // most the recorded one
            let hit = hits_ap(&x, w.spec(), w.exponent(), &policy).unwrap();
            assert!(hit.is_some() && hit.unwrap() <= w.exponent());
        }
    }

    #[test]
    fn builder_rejects_bad_start() {
        let specs = vec![APSpec::new(1, 0).unwrap()];
        let at_one = DyadicInterval::new(Dyadic::one(), Dyadic::from_int(2), 64);
        assert!(matches!(
            nested_builder(&specs, &at_one, 100),
            Err(CertError::BadParameter { .. })
        ));
        let degenerate = DyadicInterval::point(Dyadic::from_f64(1.5).unwrap(), 64);
        assert!(matches!(
            nested_builder(&specs, &degenerate, 100),
            Err(CertError::EmptyWindow)
        ));
    }

    #[test]
    fn exponent_cap_reports_overflow() {
        // image length must exceed 100; from a width-2^-4 interval near 2
        // that takes n around 9, far past the cap of 5
        let specs = vec![APSpec::new(50, 7).unwrap()];
        let err = nested_builder(&specs, &start_interval(), 5).unwrap_err();
        assert!(matches!(err, CertError::ExponentOverflow { .. }));
    }

    #[test]
    fn record_exports_exact_decimal_endpoints() {
        let specs = diagonal_specs(2);
        let state = nested_builder(&specs, &start_interval(), 10_000).unwrap();
        let rec = state.record();
        assert_eq!(rec.witnesses.len(), 2);
        assert_eq!(rec.min_next_exponent, state.min_next_exponent());

        // decimal strings reproduce the endpoints exactly
        let parse = |s: &str| -> BigRational {
            let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
            let digits: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
            BigRational::new(digits, BigInt::from(10u32).pow(frac_part.len()))
        };
        assert_eq!(parse(&rec.lo), measure::dyadic_to_rational(state.lo()));
        assert_eq!(parse(&rec.hi), measure::dyadic_to_rational(state.hi()));

        // fraction-bit annotations certify exactness: endpoint * 2^bits is
        // an integer
        let scaled = state.lo().mul_pow2(rec.lo_fraction_bits as i64);
        assert!(scaled.exp() >= 0);

        // serializes to JSON with the witness fields visible
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"modulus\""));
        assert!(json.contains("\"floor_value\""));
    }

    #[test]
    fn state_contains_its_own_points() {
        let specs = diagonal_specs(3);
        let state = nested_builder(&specs, &start_interval(), 10_000).unwrap();
        assert!(state.contains(state.lo()));
        assert!(state.contains(state.hi()));
        assert!(state.contains(&state.midpoint()));
        assert!(!state.contains(&Dyadic::from_int(3)));
    }
}
