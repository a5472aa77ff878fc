//! Certified visits of the rotation orbit n*theta mod 1 to a sub-arc of
//! [0, 1), with a star-discrepancy estimate of the orbit prefix.
//!
//! Membership is decided from enclosures only: a visit is recorded when the
//! enclosure of n*theta mod 1 lies entirely inside the open arc, a miss when
//! it lies entirely outside, and anything else (including enclosures that
//! straddle an integer, where the wrapped set touches both ends of [0, 1))
//! is reported as undecided rather than guessed. Rational angles whose
//! multiples land exactly on integers therefore show up as undecided at
//! those indices, which is the honest answer for an enclosure-based scan.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::certreal::{CertError, CertResult, Dyadic, DyadicInterval};

/// Orbit scan summary: certified visits, indices the enclosures could not
/// decide, and an (uncertified, f64) star-discrepancy estimate of the full
/// prefix {theta mod 1, 2 theta mod 1, ..., N theta mod 1}.
#[derive(Clone, Debug)]
pub struct OrbitStats {
    angle: DyadicInterval,
    window: (DyadicInterval, DyadicInterval),
    horizon: u64,
    visit_indices: Vec<u64>,
    undecided_indices: Vec<u64>,
    discrepancy: f64,
}

impl OrbitStats {
    pub fn angle(&self) -> &DyadicInterval {
        &self.angle
    }

    pub fn window(&self) -> &(DyadicInterval, DyadicInterval) {
        &self.window
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn visit_indices(&self) -> &[u64] {
        &self.visit_indices
    }

    pub fn undecided_indices(&self) -> &[u64] {
        &self.undecided_indices
    }

    /// Star discrepancy of the orbit prefix, from sorted f64 samples.
    pub fn discrepancy(&self) -> f64 {
        self.discrepancy
    }

    /// Certified visits as a fraction of the horizon.
    pub fn visit_fraction(&self) -> f64 {
        self.visit_indices.len() as f64 / self.horizon as f64
    }

    /// Delimited export: one row per index that is a visit or undecided.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,status\n");
        let mut merged: Vec<(u64, &str)> = self
            .visit_indices
            .iter()
            .map(|&n| (n, "visit"))
            .chain(self.undecided_indices.iter().map(|&n| (n, "undecided")))
            .collect();
        merged.sort_unstable();
        for (n, status) in merged {
            let _ = writeln!(out, "{n},{status}");
        }
        out
    }
}

/// Scan n = 1..=horizon for certified membership of n*theta mod 1 in the
/// open arc (window.0, window.1), both endpoints given as enclosures with
/// 0 <= lo < hi <= 1. theta must be a nonnegative enclosure.
pub fn orbit_visits(
    theta: &DyadicInterval,
    window: &(DyadicInterval, DyadicInterval),
    horizon: u64,
) -> CertResult<OrbitStats> {
    if horizon == 0 {
        return Err(CertError::BadParameter {
            what: "orbit horizon must be positive".into(),
        });
    }
    if theta.lo().signum() < 0 {
        return Err(CertError::BadParameter {
            what: "rotation angle must be nonnegative".into(),
        });
    }
    let (w_lo, w_hi) = window;
    if w_lo.lo().signum() < 0 || w_hi.hi() > &Dyadic::one() {
        return Err(CertError::BadParameter {
            what: "window must be a sub-arc of [0, 1)".into(),
        });
    }
    if w_lo.hi() >= w_hi.lo() {
        return Err(CertError::EmptyWindow);
    }

    let mut visits = Vec::new();
    let mut undecided = Vec::new();
    let mut fracs = Vec::with_capacity(horizon as usize);
    for n in 1..=horizon {
        let prod = theta.mul_int(&BigInt::from(n));
        fracs.push(frac_estimate(&prod));
        let f_lo = prod.lo().floor_int();
        let f_hi = prod.hi().floor_int();
        if f_lo == f_hi {
            let frac = prod.sub_dyadic(&Dyadic::from_int(f_lo));
            if frac.lo() > w_lo.hi() && frac.hi() < w_hi.lo() {
                visits.push(n);
            } else if frac.hi() <= w_lo.lo() || frac.lo() >= w_hi.hi() {
                // certified outside
            } else {
                undecided.push(n);
            }
        } else {
            // the enclosure wraps past an integer: its fractional image is
            // [lo - floor(lo), 1) with [0, hi - floor(hi)], certified
            // outside only when both pieces miss the arc
            let part_a_lo = prod.lo().sub(&Dyadic::from_int(f_lo.clone()));
            let part_b_hi = prod.hi().sub(&Dyadic::from_int(f_hi));
            let a_misses = &part_a_lo >= w_hi.hi();
            let b_misses = &part_b_hi <= w_lo.lo();
            if a_misses && b_misses {
                // certified outside
            } else {
                undecided.push(n);
            }
        }
    }

    Ok(OrbitStats {
        angle: theta.clone(),
        window: window.clone(),
        horizon,
        visit_indices: visits,
        undecided_indices: undecided,
        discrepancy: star_discrepancy(&fracs),
    })
}

fn frac_estimate(prod: &DyadicInterval) -> f64 {
    prod.midpoint().frac().to_f64()
}

/// Star discrepancy of points in [0, 1) by the sorted-sample formula
/// D*_N = max_i max(x_(i) - (i-1)/N, i/N - x_(i)). An f64 estimate: the
/// points themselves are rounded samples, not enclosures.
pub fn star_discrepancy(points: &[f64]) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let n = points.len() as f64;
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("orbit samples are finite"));
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let below = x - i as f64 / n;
            let above = (i + 1) as f64 / n - x;
            below.max(above)
        })
        .fold(0.0, f64::max)
}
