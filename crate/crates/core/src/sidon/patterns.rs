//! The specific collision mechanisms of floor-power runs: the plastic
//! four-term pattern, the k-Fibonacci three-bit pattern, transfer of
//! collisions down the k-th-root chain, and a finite tail probe.

use num_bigint::BigInt;

use crate::algnum::{k_fibonacci_root, plastic_constant, AlgebraicReal};
use crate::certreal::error::{CertError, CertResult};
use crate::certreal::PrecisionPolicy;
use crate::floorpow::{
    floor_pow, residual_threshold_auto, sign_sequence, FloorPowerSequence, TraceSequence,
};

use super::{find_collisions, CollisionQuadruple, SidonScanReport};

/// All m in [N1, m_max] where the plastic sign bits satisfy
/// u_{m+4} + u_m = u_{m+3} + u_{m+2}. Since the trace recurrence gives
/// T_{m+4} + T_m = T_{m+3} + T_{m+2} exactly, each such m is an additive
/// collision of the floors; every returned index is re-verified against
/// independently computed floors.
pub fn plastic_pattern_scan(m_max: u64, policy: &PrecisionPolicy) -> CertResult<Vec<u64>> {
    let x = plastic_constant();
    let n1 = residual_threshold_auto(&x, policy)?;
    if m_max < n1 {
        return Err(CertError::EmptyWindow);
    }
    let mut ts = TraceSequence::new(x.min_poly())?;
    ts.extend_to(m_max + 4);
    let ss = sign_sequence(&x, &ts, n1, m_max + 4, policy)?;
    let hits: Vec<u64> = (n1..=m_max)
        .filter(|&m| {
            let u = |i: u64| ss.sign(i).unwrap() as i32;
            u(m + 4) + u(m) == u(m + 3) + u(m + 2)
        })
        .collect();

    // re-verify through the direct interval route, not the trace route
    let seq = FloorPowerSequence::compute(&x, n1, m_max + 4, policy)?;
    for &m in &hits {
        let lhs = seq.value(m + 4).unwrap() + seq.value(m).unwrap();
        let rhs = seq.value(m + 3).unwrap() + seq.value(m + 2).unwrap();
        if lhs != rhs {
            return Err(CertError::NotCertified {
                what: format!("pattern index {m} failed the floor identity"),
            });
        }
    }
    Ok(hits)
}

/// All n in [N1, n_max] where the base of x^k = x^{k-1} + ... + 1 has
/// u_n = u_{n+k} = u_{n+k+1}; by the shifted trace identity
/// T_{n+k+1} + T_n = 2 T_{n+k} each such n gives
/// floor(x^{n+k+1}) + floor(x^n) = 2 floor(x^{n+k}). Floors here come
/// from the exact trace route (T_n - u_n), which stays cheap far past
/// the point where direct powering would need tens of thousands of bits.
pub fn kfib_pattern_scan(k: usize, n_max: u64, policy: &PrecisionPolicy) -> CertResult<Vec<u64>> {
    if k < 5 || k % 2 == 0 {
        return Err(CertError::BadParameter {
            what: "pattern scan is defined for odd k >= 5".into(),
        });
    }
    let x = k_fibonacci_root(k)?;
    let n1 = residual_threshold_auto(&x, policy)?;
    if n_max < n1 {
        return Err(CertError::EmptyWindow);
    }
    let top = n_max + k as u64 + 1;
    let mut ts = TraceSequence::new(x.min_poly())?;
    ts.extend_to(top);
    let ss = sign_sequence(&x, &ts, n1, top, policy)?;
    let hits: Vec<u64> = (n1..=n_max)
        .filter(|&n| {
            let u0 = ss.sign(n).unwrap();
            u0 == ss.sign(n + k as u64).unwrap() && u0 == ss.sign(n + k as u64 + 1).unwrap()
        })
        .collect();

    let a = |n: u64| ts.value(n).unwrap() - BigInt::from(ss.sign(n).unwrap());
    for &n in &hits {
        if a(n + k as u64 + 1) + a(n) != a(n + k as u64) * 2 {
            return Err(CertError::NotCertified {
                what: format!("pattern index {n} failed the floor identity"),
            });
        }
    }
    Ok(hits)
}

/// Map each collision of x0 to the predicted collision of x0^(1/k) at
/// k-times the indices, verifying every floor against a direct
/// computation for the root base. The floors themselves transfer
/// unchanged: the kn-th power of the k-th root is the n-th power of x0.
pub fn chain_transfer(
    x0: &AlgebraicReal,
    report: &SidonScanReport,
    k: usize,
    policy: &PrecisionPolicy,
) -> CertResult<Vec<CollisionQuadruple>> {
    if k < 2 {
        return Err(CertError::BadParameter {
            what: "chain transfer needs k >= 2".into(),
        });
    }
    let root = x0.kth_root(k)?;
    let k = k as u64;
    let mut out = Vec::with_capacity(report.collisions().len());
    for q in report.collisions() {
        let (a, b, c, d) = q.indices();
        let scaled = (k * a, k * b, k * c, k * d);
        let vals = q.values();
        for (idx, want) in [
            (scaled.0, &vals.0),
            (scaled.1, &vals.1),
            (scaled.2, &vals.2),
            (scaled.3, &vals.3),
        ] {
            let (got, _) = floor_pow(&root, idx, policy)?;
            if got != *want {
                return Err(CertError::ChainMismatch {
                    n: idx,
                    detail: format!("root-base floor {got} differs from source floor {want}"),
                });
            }
        }
        out.push(CollisionQuadruple::assemble(
            scaled,
            vals.clone(),
            q.shared_sum().clone(),
        ));
    }
    Ok(out)
}

/// Smallest N0 <= n_max - window such that [N0, n_max] contains no
/// collision and no repeated value, or None. Finite evidence only: a
/// clean window says nothing about indices beyond n_max.
pub fn tail_sidon_probe(
    x: &AlgebraicReal,
    n_max: u64,
    window: u64,
    policy: &PrecisionPolicy,
) -> CertResult<Option<u64>> {
    if n_max < 2 || window >= n_max {
        return Ok(None);
    }
    let seq = FloorPowerSequence::compute(x, 1, n_max, policy)?;
    let report = find_collisions(&seq, 1, n_max)?;
    let mut blocked = 0u64;
    for q in report.collisions() {
        blocked = blocked.max(q.indices().0);
    }
    for &(i, _) in report.duplicate_values() {
        blocked = blocked.max(i);
    }
    let n0 = blocked + 1;
    Ok((n0 <= n_max - window).then_some(n0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::rational;
    use crate::certreal::Dyadic;
    use num_rational::BigRational;

    #[test]
    fn plastic_scan_matches_frozen_prefix() {
        let hits = plastic_pattern_scan(100, &PrecisionPolicy::default()).unwrap();
        assert_eq!(
            &hits[..12],
            &[23, 24, 26, 28, 29, 30, 32, 33, 34, 36, 37, 39]
        );
        assert!(hits.iter().all(|&m| (22..=100).contains(&m)));
    }

    #[test]
    fn plastic_scan_agrees_with_brute_force_restriction() {
        let policy = PrecisionPolicy::default();
        let hits = plastic_pattern_scan(200, &policy).unwrap();
        let x = plastic_constant();
        let seq = FloorPowerSequence::compute(&x, 22, 204, &policy).unwrap();
        let report = find_collisions(&seq, 22, 204).unwrap();
        let brute: Vec<u64> = report
            .collisions()
            .iter()
            .filter(|q| q.shape() == (2, 3, 4))
            .map(|q| q.indices().0)
            .filter(|&a| a <= 200)
            .collect();
        assert_eq!(hits, brute);
    }

    #[test]
    fn plastic_non_hits_fail_the_floor_identity() {
        let policy = PrecisionPolicy::default();
        let hits = plastic_pattern_scan(120, &policy).unwrap();
        let x = plastic_constant();
        let seq = FloorPowerSequence::compute(&x, 22, 124, &policy).unwrap();
        for m in 22..=120u64 {
            let lhs = seq.value(m + 4).unwrap() + seq.value(m).unwrap();
            let rhs = seq.value(m + 3).unwrap() + seq.value(m + 2).unwrap();
            assert_eq!(lhs == rhs, hits.contains(&m), "m = {m}");
        }
    }

    #[test]
    fn k5_scan_matches_frozen_oracle() {
        let hits = kfib_pattern_scan(5, 300, &PrecisionPolicy::default()).unwrap();
        assert_eq!(hits.len(), 119);
        assert_eq!(&hits[..12], &[25, 27, 30, 32, 34, 37, 39, 41, 44, 46, 48, 51]);
        assert_eq!(&hits[hits.len() - 3..], &[294, 296, 298]);
    }

    #[test]
    fn k5_criterion_matches_direct_floors() {
        // on a range where direct powering is still affordable, the trace
        // route floors behind the scan agree with interval floors
        let policy = PrecisionPolicy::default();
        let hits = kfib_pattern_scan(5, 120, &policy).unwrap();
        let x = k_fibonacci_root(5).unwrap();
        let seq = FloorPowerSequence::compute(&x, 24, 126, &policy).unwrap();
        for n in 24..=120u64 {
            let lhs = seq.value(n + 6).unwrap() + seq.value(n).unwrap();
            let rhs = seq.value(n + 5).unwrap() * BigInt::from(2);
            assert_eq!(lhs == rhs, hits.contains(&n), "n = {n}");
        }
    }

    #[test]
    fn even_or_small_k_is_rejected() {
        let policy = PrecisionPolicy::default();
        assert!(matches!(
            kfib_pattern_scan(4, 100, &policy),
            Err(CertError::BadParameter { .. })
        ));
        assert!(matches!(
            kfib_pattern_scan(3, 100, &policy),
            Err(CertError::BadParameter { .. })
        ));
    }

    #[test]
    fn chain_transfer_scales_indices_and_verifies() {
        let policy = PrecisionPolicy::default();
        let x = plastic_constant();
        let seq = FloorPowerSequence::compute(&x, 22, 40, &policy).unwrap();
        let report = find_collisions(&seq, 22, 40).unwrap();
        assert!(!report.collisions().is_empty());
        let transferred = chain_transfer(&x, &report, 2, &policy).unwrap();
        assert_eq!(transferred.len(), report.collisions().len());
        let q0 = &report.collisions()[0];
        let t0 = &transferred[0];
        let (a, b, c, d) = q0.indices();
        assert_eq!(t0.indices(), (2 * a, 2 * b, 2 * c, 2 * d));
        assert_eq!(t0.values(), q0.values());
        assert!(matches!(
            chain_transfer(&x, &report, 1, &policy),
            Err(CertError::BadParameter { .. })
        ));
    }

    #[test]
    fn probe_finds_immediate_tail_for_integer_base() {
        let two = rational(&BigRational::from_integer(BigInt::from(2)));
        let policy = PrecisionPolicy::default();
        assert_eq!(tail_sidon_probe(&two, 60, 30, &policy).unwrap(), Some(1));
    }

    #[test]
    fn probe_on_near_two_dyadic_base() {
        // frozen after first run: floor powers of the 64-bit value 1.9
        // show no collision at all through 200
        let x = crate::algnum::from_dyadic(&Dyadic::from_f64(1.9).unwrap());
        let policy = PrecisionPolicy::default();
        assert_eq!(tail_sidon_probe(&x, 200, 100, &policy).unwrap(), Some(1));
    }

    #[test]
    fn probe_reports_none_when_collisions_recur() {
        let x = plastic_constant();
        let policy = PrecisionPolicy::default();
        assert_eq!(tail_sidon_probe(&x, 120, 60, &policy).unwrap(), None);
    }
}
