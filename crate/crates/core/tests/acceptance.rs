//! Acceptance gate: ten end-to-end checks with pinned tolerances and
//! runtime budgets. Each prints one [PASS]/[FAIL] line; failures carry the
//! offending detail in the panic message.

use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use floorsidon::algnum::trig::pi;
use floorsidon::algnum::{conjugate_spectrum, plastic_constant, rational, shift_angle};
use floorsidon::aphit::{density_probe, diagonal_specs, hits_ap, nested_builder, APSpec};
use floorsidon::certreal::{Dyadic, DyadicInterval, PrecisionPolicy};
use floorsidon::floorpow::{floor_pow, sign_sequence, FloorPowerSequence, TraceSequence};
use floorsidon::measure::{
    orbit_visits, plastic_window, scan_bad_measure, slope_certificate, sublevel_vs_bound,
    thresholds, thresholds_for_delta, BadSetConfig,
};
use floorsidon::sidon::{
    chain_transfer, find_collisions, kfib_pattern_scan, plastic_pattern_scan,
};

/// The runtime budgets are per criterion, but the harness runs tests in
/// parallel and the heavy criteria would otherwise steal each other's
/// cores. Long-running criteria serialize through this lane and start
/// their clocks after acquiring it.
static HEAVY_LANE: Mutex<()> = Mutex::new(());

fn heavy_lane() -> MutexGuard<'static, ()> {
    HEAVY_LANE.lock().unwrap_or_else(|e| e.into_inner())
}

fn gate(criterion: u32, detail: &str, ok: bool, started: Instant, limit_s: u64) {
    let elapsed = started.elapsed();
    let within = elapsed <= Duration::from_secs(limit_s);
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!("[{verdict}] criterion {criterion}: {detail} ({elapsed:.2?} of {limit_s}s budget)");
    assert!(ok, "criterion {criterion} failed: {detail}");
    assert!(
        within,
        "criterion {criterion} exceeded its {limit_s}s budget at {elapsed:?}"
    );
}

fn rational_of(d: &Dyadic) -> BigRational {
    if d.exp() >= 0 {
        BigRational::from_integer(d.mant() << d.exp() as u64)
    } else {
        BigRational::new(d.mant().clone(), BigInt::one() << (-d.exp()) as u64)
    }
}

#[test]
fn acceptance_01_dual_route_floor_exactness() {
    let _lane = heavy_lane();
    let started = Instant::now();
    let x = plastic_constant();
    let policy = PrecisionPolicy::default();

    let mut ts = TraceSequence::new(x.min_poly()).unwrap();
    ts.extend_to(322);
    let first_eleven: Vec<BigInt> = (0..=10).map(|n| ts.value(n).unwrap().clone()).collect();
    let want: Vec<BigInt> = [3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17]
        .into_iter()
        .map(BigInt::from)
        .collect();
    assert_eq!(first_eleven, want, "trace recurrence init is wrong");

    let signs = sign_sequence(&x, &ts, 22, 322, &policy).unwrap();
    let seq = FloorPowerSequence::compute(&x, 22, 322, &policy).unwrap();
    let mut mismatches = 0usize;
    for n in 22..=322u64 {
        let direct = seq.value(n).unwrap();
        let via_trace = ts.value(n).unwrap() - BigInt::from(signs.sign(n).unwrap());
        if direct != &via_trace {
            mismatches += 1;
        }
    }
    gate(
        1,
        &format!("dual-route floors agree on [22, 322], {mismatches} mismatches"),
        mismatches == 0,
        started,
        10,
    );
}

#[test]
fn acceptance_02_integer_and_dyadic_bases_are_sidon() {
    let started = Instant::now();
    let policy = PrecisionPolicy::default();
    let bases = [
        BigRational::from_integer(BigInt::from(2)),
        BigRational::new(BigInt::from(17), BigInt::from(8)),
        BigRational::from_integer(BigInt::from(3)),
    ];
    let mut all_clean = true;
    for b in &bases {
        let x = rational(b);
        let seq = FloorPowerSequence::compute(&x, 1, 60, &policy).unwrap();
        let report = find_collisions(&seq, 1, 60).unwrap();
        if !report.collisions().is_empty() || !report.is_sidon_on_range() {
            all_clean = false;
        }
    }
    gate(
        2,
        "no collisions for x in {2, 17/8, 3} up to n = 60",
        all_clean,
        started,
        5,
    );
}

#[test]
fn acceptance_03_plastic_pattern_scan_complete() {
    let _lane = heavy_lane();
    let started = Instant::now();
    let policy = PrecisionPolicy::default();
    let x = plastic_constant();

    let hits = plastic_pattern_scan(500, &policy).unwrap();
    assert!(!hits.is_empty(), "pattern scan found nothing");
    // seeded-free regression constant, frozen from the first complete run
    assert_eq!(hits.len(), 321, "plastic pattern hit count drifted");

    // every hit satisfies the floor identity exactly
    let seq = FloorPowerSequence::compute(&x, 22, 504, &policy).unwrap();
    let v = |n: u64| seq.value(n).unwrap();
    for &m in &hits {
        assert_eq!(
            v(m + 4) + v(m),
            v(m + 3) + v(m + 2),
            "floor identity fails at m = {m}"
        );
    }

    // scan equals the brute-force restriction to the (m, m+2, m+3, m+4) shape
    let report = find_collisions(&seq, 22, 504).unwrap();
    let brute: Vec<u64> = report
        .collisions()
        .iter()
        .filter(|q| q.shape() == (2, 3, 4))
        .map(|q| q.indices().0)
        .filter(|&a| a <= 500)
        .collect();
    assert_eq!(hits, brute, "scan disagrees with brute force");

    // every index whose orbit point is certified inside the angular window
    // must appear among the hits
    let spectrum = conjugate_spectrum(&x, 256).unwrap();
    let omega = spectrum.dominant_pair_argument().unwrap();
    let arc = plastic_window(omega, 8, 192).unwrap();
    let two_pi = pi(320).mul_pow2(1);
    let theta = omega.div(&two_pi);
    let win = (arc.0.div(&two_pi), arc.1.div(&two_pi));
    let orbit = orbit_visits(&theta, &win, 500).unwrap();
    let mut missing = 0usize;
    for &m in orbit.visit_indices() {
        if m >= 22 && hits.binary_search(&m).is_err() {
            missing += 1;
        }
    }
    gate(
        3,
        &format!(
            "321 pattern hits, identity + brute-force + orbit cover ({} orbit visits, {missing} missing)",
            orbit.visit_indices().len()
        ),
        missing == 0,
        started,
        60,
    );
}

#[test]
fn acceptance_04_chain_lemma_transfer() {
    let _lane = heavy_lane();
    let started = Instant::now();
    let policy = PrecisionPolicy::default();
    let x = plastic_constant();

    let seq_rho = FloorPowerSequence::compute(&x, 1, 300, &policy).unwrap();
    let x2 = x.kth_root(2).unwrap();
    let x3 = x.kth_root(3).unwrap();
    let seq2 = FloorPowerSequence::compute(&x2, 1, 600, &policy).unwrap();
    let seq3 = FloorPowerSequence::compute(&x3, 1, 900, &policy).unwrap();
    let mut termwise_ok = true;
    for n in 1..=300u64 {
        if seq2.value(2 * n) != seq_rho.value(n) || seq3.value(3 * n) != seq_rho.value(n) {
            termwise_ok = false;
        }
    }

    let seq_tail = FloorPowerSequence::compute(&x, 22, 504, &policy).unwrap();
    let report = find_collisions(&seq_tail, 22, 504).unwrap();
    let found = report.collisions().len();
    let moved2 = chain_transfer(&x, &report, 2, &policy).unwrap();
    let moved3 = chain_transfer(&x, &report, 3, &policy).unwrap();
    gate(
        4,
        &format!(
            "termwise floors match for k = 2, 3 up to n = 300; {found} collisions transferred at both scales"
        ),
        termwise_ok && moved2.len() == found && moved3.len() == found && found > 0,
        started,
        30,
    );
}

#[test]
fn acceptance_05_kfib_pattern_scan_k13() {
    let _lane = heavy_lane();
    let started = Instant::now();
    // the whole criterion runs at most 4096 working bits
    let policy = PrecisionPolicy::new(64, 4096);
    let k = 13usize;
    let x = floorsidon::algnum::k_fibonacci_root(k).unwrap();

    let hits = kfib_pattern_scan(k, 5000, &policy).unwrap();
    assert!(!hits.is_empty(), "k = 13 scan found nothing");
    // seeded-free regression constant, frozen from the first complete run
    assert_eq!(hits.len(), 3414, "k = 13 hit count drifted");

    // floors above the sign threshold come from the trace route: the direct
    // route would need more bits than the 4096 cap for n near 5014
    let n1 = 184u64;
    let top = 5000 + k as u64 + 1;
    let mut ts = TraceSequence::new(x.min_poly()).unwrap();
    ts.extend_to(top);
    let signs = sign_sequence(&x, &ts, n1, top, &policy).unwrap();
    let floor_at =
        |n: u64| ts.value(n).unwrap() - BigInt::from(signs.sign(n).unwrap());

    let mut identity_checked = 0usize;
    for &n in &hits {
        if n < n1 {
            continue;
        }
        assert_eq!(
            floor_at(n + 14) + floor_at(n),
            BigInt::from(2) * floor_at(n + 13),
            "hit identity fails at n = {n}"
        );
        identity_checked += 1;
    }

    // the sign criterion u_n = u_{n+13} = u_{n+14} is equivalent to the
    // floor identity at every index of the scanned range, because the
    // shifted trace identity T_{n+14} + T_n = 2 T_{n+13} is exact
    let mut equivalence_ok = true;
    for n in n1..=5000 {
        let u0 = signs.sign(n).unwrap();
        let u_same =
            u0 == signs.sign(n + 13).unwrap() && u0 == signs.sign(n + 14).unwrap();
        let identity =
            floor_at(n + 14) + floor_at(n) == BigInt::from(2) * floor_at(n + 13);
        if u_same != identity {
            equivalence_ok = false;
        }
    }

    // certified angular enclosures: omega in (pi/13, 3pi/13), delta in (0, pi/2)
    let spectrum = conjugate_spectrum(&x, 512).unwrap();
    let omega = spectrum.dominant_pair_argument().unwrap();
    let p = pi(576);
    let thirteenth = p.div(&DyadicInterval::from_int(13, 576));
    let three_thirteenths = thirteenth.mul_int(&BigInt::from(3));
    let omega_ok =
        omega.lo() > thirteenth.hi() && omega.hi() < three_thirteenths.lo();
    let delta = shift_angle(k, &spectrum).unwrap();
    let half_pi = p.mul_pow2(-1);
    let delta_ok = delta.lo() > &Dyadic::zero() && delta.hi() < half_pi.lo();

    gate(
        5,
        &format!(
            "3414 hits, {identity_checked} identities verified, equivalence {equivalence_ok}, omega enclosed {omega_ok}, delta enclosed {delta_ok}"
        ),
        equivalence_ok && omega_ok && delta_ok,
        started,
        300,
    );
}

#[test]
fn acceptance_06_threshold_and_sublevel_mechanics() {
    let started = Instant::now();

    // exact thresholds at delta = 1 (beta = 1/2)
    let t1 = thresholds_for_delta(&BigRational::one()).unwrap();
    assert_eq!((t1.d0, t1.v_cut), (3, 3), "delta = 1 thresholds drifted");
    assert_eq!(t1.u_star, 6);

    let config = BadSetConfig::new(
        BigRational::new(BigInt::one(), BigInt::from(2)),
        (1, 60),
        1,
        0,
        60,
    )
    .unwrap();
    let t = thresholds(&config);

    // certified negative slope for sampled u at or above the per-v threshold
    let mut slope_runs = 0usize;
    for v in 1..t.v_cut {
        let u_v = t.u_of(v).unwrap();
        for du in [0u64, 2, 9] {
            let u = u_v + du;
            let mut ws = vec![v, (v + u) / 2, u];
            ws.dedup();
            for w in ws {
                slope_certificate(u, v, w, &config).unwrap();
                slope_runs += 1;
            }
        }
    }

    // exact sublevel measure vs closed-form ceiling across both regimes
    let mut combos = 0usize;
    let mut all_ok = true;
    for d in [6u64, 8, 10, 12, 14] {
        for v in 1..=6u64 {
            let mut us = vec![v, v + 2, v + 5, 14];
            us.sort_unstable();
            us.dedup();
            for u in us {
                let mut ws = vec![v, (v + u) / 2, u];
                ws.sort_unstable();
                ws.dedup();
                for w in ws {
                    let check = sublevel_vs_bound(u, v, w, d, &config).unwrap();
                    if !check.ok() {
                        all_ok = false;
                    }
                    combos += 1;
                }
            }
        }
    }
    gate(
        6,
        &format!("thresholds(1) = (3, 3), {slope_runs} slope certificates, {combos} sublevel-vs-bound combos all ok"),
        all_ok && combos >= 200,
        started,
        60,
    );
}

#[test]
fn acceptance_07_monte_carlo_decay() {
    let _lane = heavy_lane();
    let started = Instant::now();
    let config = BadSetConfig::new(
        BigRational::new(BigInt::one(), BigInt::from(2)),
        (1, 60),
        10_000,
        42,
        60,
    )
    .unwrap();
    let curve = scan_bad_measure(&config);
    let slope = curve.fitted_log_slope();
    let deep = curve.fraction_with_max_at_least(30);
    let shallow = curve.fraction_with_max_at_least(10);

    // frozen seeded regression, pinned from the first complete run at
    // seed 42: no sample has a collision below d = 5, and the curve decays
    // from there
    let head: Vec<u64> = curve.rows().iter().take(5).map(|r| r.hit_count).collect();
    assert_eq!(head, vec![0, 0, 0, 0, 333], "seed-42 curve head drifted");
    assert!(
        (slope - (-0.302655139794)).abs() < 1e-9,
        "seed-42 fitted slope drifted: {slope}"
    );
    assert_eq!(curve.excluded_samples(), 0, "seed-42 exclusion count drifted");
    assert!((deep - 0.0001).abs() < 1e-12 && (shallow - 0.1922).abs() < 1e-12);

    gate(
        7,
        &format!("fitted log slope {slope:.4} < 0, tail fractions {deep:.4} < {shallow:.4}"),
        slope < 0.0 && deep < shallow,
        started,
        600,
    );
}

#[test]
fn acceptance_08_orbit_equidistribution_shadow() {
    let started = Instant::now();
    let x = plastic_constant();
    let spectrum = conjugate_spectrum(&x, 256).unwrap();
    let omega = spectrum.dominant_pair_argument().unwrap();
    let theta = omega.div(&pi(320).mul_pow2(1));
    let win = (
        DyadicInterval::point(Dyadic::from_f64(0.25).unwrap(), 64),
        DyadicInterval::point(Dyadic::from_f64(0.5).unwrap(), 64),
    );
    let orbit = orbit_visits(&theta, &win, 100_000).unwrap();
    let disc = orbit.discrepancy();
    let frozen = 1.4658752e-4;
    gate(
        8,
        &format!(
            "star discrepancy {disc:.8e} over 10^5 rotation steps, {} undecided",
            orbit.undecided_indices().len()
        ),
        disc < 0.01 && (disc - frozen).abs() < 1e-9 && orbit.undecided_indices().is_empty(),
        started,
        30,
    );
}

#[test]
fn acceptance_09_nested_builder_and_density() {
    let _lane = heavy_lane();
    let started = Instant::now();
    let policy = PrecisionPolicy::default();

    // 20 diagonal classes from [2 + 2^-4, 2 + 2^-3]
    let specs = diagonal_specs(20);
    let start = DyadicInterval::new(
        Dyadic::from_f64(2.0625).unwrap(),
        Dyadic::from_f64(2.125).unwrap(),
        64,
    );
    let state = nested_builder(&specs, &start, 10_000).unwrap();
    assert_eq!(state.witnesses().len(), 20);
    let positive_length = state.lo() < state.hi();

    // every witness verifies at the midpoint through certified floors
    let mid = rational(&rational_of(&state.midpoint()));
    let mut witnesses_ok = true;
    for w in state.witnesses() {
        let (floor, _) = floor_pow(&mid, w.exponent(), &policy).unwrap();
        if &floor != w.floor_value() {
            witnesses_ok = false;
        }
        match hits_ap(&mid, w.spec(), w.exponent(), &policy).unwrap() {
            Some(n) if n <= w.exponent() => {}
            _ => witnesses_ok = false,
        }
    }

    // 100 random density-probe instances must all succeed
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut probes_ok = true;
    for _ in 0..100 {
        let d = rng.gen_range(1..=10u64);
        let r = rng.gen_range(0..d);
        let n_min = rng.gen_range(1..=100u64);
        let u1 = (rng.gen::<u64>() >> 11) as f64 / (1u64 << 53) as f64;
        let u2 = (rng.gen::<u64>() >> 11) as f64 / (1u64 << 53) as f64;
        let lo = 1.001 + 0.96 * u1;
        let len = f64::exp2(-10.0) + 0.03 * u2;
        let window = DyadicInterval::new(
            Dyadic::from_f64(lo).unwrap(),
            Dyadic::from_f64(lo + len).unwrap(),
            64,
        );
        let spec = APSpec::new(d, r).unwrap();
        match density_probe(&spec, n_min, &window, 64) {
            Ok(wit) => {
                if wit.exponent() < n_min || !spec.matches(wit.floor_value()) {
                    probes_ok = false;
                }
            }
            Err(_) => probes_ok = false,
        }
    }
    gate(
        9,
        "20 nested witnesses verified at midpoint, 100 density probes succeeded",
        positive_length && witnesses_ok && probes_ok,
        started,
        60,
    );
}

#[test]
fn acceptance_10_enclosure_containment_soundness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0usize;
    for _ in 0..10_000 {
        let mant = (rng.gen::<u64>() >> 11).max(1);
        let x = Dyadic::one().add(&Dyadic::new(BigInt::from(mant), -53));
        let n = rng.gen_range(1..=200u64);
        let coarse = DyadicInterval::point(x.clone(), 64).pow(n, 64);
        let fine = DyadicInterval::point(x, 256).pow(n, 256);
        if !coarse.contains_interval(&fine) {
            failures += 1;
        }
    }
    gate(
        10,
        &format!("10^4 containment checks, {failures} failures"),
        failures == 0,
        started,
        30,
    );
}
