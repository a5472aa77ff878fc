//! Additive collision detection over floor-power runs: a_p + a_q = a_r + a_s
//! with {p,q} != {r,s}. Quadruples are kept in the canonical nested form
//! a < b <= c < d with v_a + v_d = v_b + v_c; equal values at distinct
//! indices are reported separately so the pre-tail plateau (where several
//! floors coincide) cannot masquerade as quadruple structure.

pub mod patterns;

pub use patterns::{
    chain_transfer, kfib_pattern_scan, plastic_pattern_scan, tail_sidon_probe,
};

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::certreal::error::{CertError, CertResult};
use crate::floorpow::FloorPowerSequence;

/// One non-trivial additive collision in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CollisionQuadruple {
    indices: (u64, u64, u64, u64),
    values: (BigInt, BigInt, BigInt, BigInt),
    shared_sum: BigInt,
}

impl CollisionQuadruple {
    fn assemble(
        indices: (u64, u64, u64, u64),
        values: (BigInt, BigInt, BigInt, BigInt),
        shared_sum: BigInt,
    ) -> CollisionQuadruple {
        let (a, b, c, d) = indices;
        debug_assert!(a < b && b <= c && c < d);
        debug_assert_eq!(&values.0 + &values.3, shared_sum);
        debug_assert_eq!(&values.1 + &values.2, shared_sum);
        CollisionQuadruple {
            indices,
            values,
            shared_sum,
        }
    }

    /// Indices (a, b, c, d) with a < b <= c < d.
    pub fn indices(&self) -> (u64, u64, u64, u64) {
        self.indices
    }

    pub fn values(&self) -> &(BigInt, BigInt, BigInt, BigInt) {
        &self.values
    }

    /// The common value of v_a + v_d and v_b + v_c.
    pub fn shared_sum(&self) -> &BigInt {
        &self.shared_sum
    }

    /// Offsets (b-a, c-a, d-a); collisions of equal shape differ only in
    /// their starting index.
    pub fn shape(&self) -> (u64, u64, u64) {
        let (a, b, c, d) = self.indices;
        (b - a, c - a, d - a)
    }

    pub fn record(&self) -> CollisionRecord {
        CollisionRecord {
            indices: [self.indices.0, self.indices.1, self.indices.2, self.indices.3],
            values: [
                self.values.0.to_string(),
                self.values.1.to_string(),
                self.values.2.to_string(),
                self.values.3.to_string(),
            ],
            shared_sum: self.shared_sum.to_string(),
        }
    }
}

/// Serialized form of a collision: values as decimal strings since they
/// routinely exceed machine width.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CollisionRecord {
    pub indices: [u64; 4],
    pub values: [String; 4],
    pub shared_sum: String,
}

/// Outcome of scanning one index range of one base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidonScanReport {
    base: String,
    n_lo: u64,
    n_hi: u64,
    collisions: Vec<CollisionQuadruple>,
    duplicate_values: Vec<(u64, u64)>,
    is_sidon_on_range: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ScanRecord {
    pub base: String,
    pub range: [u64; 2],
    pub collisions: Vec<CollisionRecord>,
    pub duplicate_values: Vec<[u64; 2]>,
    pub is_sidon_on_range: bool,
}

impl SidonScanReport {
    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn range(&self) -> (u64, u64) {
        (self.n_lo, self.n_hi)
    }

    pub fn collisions(&self) -> &[CollisionQuadruple] {
        &self.collisions
    }

    /// Index pairs (i, j), i < j, with a_i = a_j.
    pub fn duplicate_values(&self) -> &[(u64, u64)] {
        &self.duplicate_values
    }

    pub fn is_sidon_on_range(&self) -> bool {
        self.is_sidon_on_range
    }

    pub fn record(&self) -> ScanRecord {
        ScanRecord {
            base: self.base.clone(),
            range: [self.n_lo, self.n_hi],
            collisions: self.collisions.iter().map(|c| c.record()).collect(),
            duplicate_values: self.duplicate_values.iter().map(|&(i, j)| [i, j]).collect(),
            is_sidon_on_range: self.is_sidon_on_range,
        }
    }

    /// Combine reports from disjoint subranges of the same base. The result
    /// covers the hull of the two ranges but lists only events each scan saw;
    /// pairs straddling a gap between subranges need a direct scan of the
    /// hull. Associative and commutative.
    pub fn merge(&self, other: &SidonScanReport) -> CertResult<SidonScanReport> {
        if self.base != other.base {
            return Err(CertError::BadParameter {
                what: "cannot merge scan reports of different bases".into(),
            });
        }
        let mut collisions = self.collisions.clone();
        collisions.extend(other.collisions.iter().cloned());
        collisions.sort();
        collisions.dedup();
        let mut duplicate_values = self.duplicate_values.clone();
        duplicate_values.extend(other.duplicate_values.iter().copied());
        duplicate_values.sort_unstable();
        duplicate_values.dedup();
        let is_sidon_on_range = collisions.is_empty() && duplicate_values.is_empty();
        Ok(SidonScanReport {
            base: self.base.clone(),
            n_lo: self.n_lo.min(other.n_lo),
            n_hi: self.n_hi.max(other.n_hi),
            collisions,
            duplicate_values,
            is_sidon_on_range,
        })
    }
}

/// Plain-text rendering of an integer polynomial for report labels.
pub(crate) fn poly_descriptor(p: &crate::certreal::IntPolynomial) -> String {
    use num_traits::{One, Signed, Zero};
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let term = match i {
            0 => mag.to_string(),
            1 if mag.is_one() => "t".into(),
            1 => format!("{mag}*t"),
            _ if mag.is_one() => format!("t^{i}"),
            _ => format!("{mag}*t^{i}"),
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{term}")
            } else {
                term
            });
        } else {
            parts.push(format!("{} {term}", if c.is_negative() { "-" } else { "+" }));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        format!("root of {}", parts.join(" "))
    }
}

/// Scan explicit (index, value) data. Values must be non-decreasing in
/// index order, which is how any set is listed and how floor powers of a
/// base above 1 always come out; under that order every equal sum of two
/// distinct strict pairs either shares an index (an equal-value event) or
/// nests canonically.
pub fn find_collisions_in_values(
    indices: &[u64],
    values: &[BigInt],
    base: &str,
) -> CertResult<SidonScanReport> {
    if indices.len() != values.len() || indices.is_empty() {
        return Err(CertError::BadParameter {
            what: "index and value lists must be equal-length and nonempty".into(),
        });
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CertError::BadParameter {
            what: "indices must be strictly increasing".into(),
        });
    }
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(CertError::BadParameter {
            what: "values must be non-decreasing".into(),
        });
    }

    // exact big-integer keys; the map hashes their byte representation so
    // equal sums collide without quadratic comparisons
    let mut by_sum: HashMap<BigInt, Vec<(usize, usize)>> = HashMap::new();
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            by_sum
                .entry(&values[i] + &values[j])
                .or_default()
                .push((i, j));
        }
    }

    let mut collisions: Vec<CollisionQuadruple> = Vec::new();
    for (sum, pairs) in &by_sum {
        if pairs.len() < 2 {
            continue;
        }
        for x in 0..pairs.len() {
            for y in (x + 1)..pairs.len() {
                let (mut p, mut q) = (pairs[x], pairs[y]);
                if p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1 {
                    // cancelling the shared index leaves an equal-value
                    // pair, reported through duplicate_values below
                    continue;
                }
                if p.0 > q.0 {
                    std::mem::swap(&mut p, &mut q);
                }
                let (a, d) = p;
                let (b, c) = q;
                if c > d {
                    // crossing pairs force equal values under monotone
                    // input, already covered as duplicates
                    continue;
                }
                if values[a] == values[b] {
                    // then also v_c = v_d: the equality is forced by the
                    // repeated values, not by additive structure
                    continue;
                }
                collisions.push(CollisionQuadruple::assemble(
                    (indices[a], indices[b], indices[c], indices[d]),
                    (
                        values[a].clone(),
                        values[b].clone(),
                        values[c].clone(),
                        values[d].clone(),
                    ),
                    sum.clone(),
                ));
            }
        }
    }
    collisions.sort();

    let mut by_value: HashMap<&BigInt, Vec<u64>> = HashMap::new();
    for (i, v) in values.iter().enumerate() {
        by_value.entry(v).or_default().push(indices[i]);
    }
    let mut duplicate_values: BTreeSet<(u64, u64)> = BTreeSet::new();
    for group in by_value.into_values() {
        for i in 0..group.len() {
            for j in (i + 1)..group.len() {
                duplicate_values.insert((group[i], group[j]));
            }
        }
    }
    let duplicate_values: Vec<(u64, u64)> = duplicate_values.into_iter().collect();

    let is_sidon_on_range = collisions.is_empty() && duplicate_values.is_empty();
    Ok(SidonScanReport {
        base: base.to_string(),
        n_lo: indices[0],
        n_hi: *indices.last().unwrap(),
        collisions,
        duplicate_values,
        is_sidon_on_range,
    })
}

/// Scan a floor-power run over [n_lo, n_hi] (which it must cover).
pub fn find_collisions(
    seq: &FloorPowerSequence,
    n_lo: u64,
    n_hi: u64,
) -> CertResult<SidonScanReport> {
    if n_lo > n_hi {
        return Err(CertError::EmptyWindow);
    }
    if n_lo < seq.start() || n_hi > seq.end() {
        return Err(CertError::BadParameter {
            what: "sequence does not cover the requested range".into(),
        });
    }
    let indices: Vec<u64> = (n_lo..=n_hi).collect();
    let values: Vec<BigInt> = indices
        .iter()
        .map(|&n| seq.value(n).unwrap().clone())
        .collect();
    let base = poly_descriptor(seq.base().min_poly());
    find_collisions_in_values(&indices, &values, &base)
}
