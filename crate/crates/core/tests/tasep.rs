use std::io::Cursor;

use proptest::prelude::*;
use slowbond::hydro::MacroProfile;
use slowbond::lpp::{passage_time_wedge, sample_wedge, Site};
use slowbond::stats::SampleStats;
use slowbond::tasep::*;

fn closed(l: i64) -> Window {
    Window::closed(l).unwrap()
}

#[test]
fn empty_system_stays_empty() {
    let (occ, j) = evolve(
        Occupancies::empty(closed(20)),
        &BondClocks::slow_bond(0.5, 1).unwrap(),
        50.0,
    );
    assert_eq!(occ.particle_count(), 0);
    assert!(j.iter().all(|c| *c == 0));
}

#[test]
fn conservation_and_reproducibility() {
    let w = closed(100);
    let occ = init_bernoulli(0.4, w, 3).unwrap();
    let n = occ.particle_count();
    let clocks = BondClocks::slow_bond(0.3, 9).unwrap();
    let a = evolve(occ.clone(), &clocks, 40.0);
    let b = evolve(occ.clone(), &clocks, 40.0);
    assert_eq!(a, b);
    assert_eq!(a.0.particle_count(), n);
    let c = evolve(occ, &BondClocks::slow_bond(0.3, 10).unwrap(), 40.0);
    assert_ne!(a, c);

    let p = Window::periodic(50).unwrap();
    let occ = init_bernoulli(0.5, p, 4).unwrap();
    let n = occ.particle_count();
    let (after, j) = evolve(occ, &clocks, 30.0);
    assert_eq!(after.particle_count(), n);
    assert_eq!(j.len(), 101);
}

#[test]
fn current_equals_height_drop() {
    let w = closed(60);
    let occ = init_bernoulli(0.5, w, 5).unwrap();
    let clocks = BondClocks::slow_bond(0.4, 6).unwrap();
    let mut ex = ExclusionProcess::new(occ.clone());
    let mut z = HeightProcess::new(heights_from_occ(&occ).unwrap());
    let mut q = ClockQueue::new(&clocks, w.bonds());
    for step in 1..=20 {
        q.drive(step as f64, &mut [&mut ex, &mut z]);
        assert_eq!(occ_from_heights(z.heights()), *ex.occupancies());
        for b in w.bonds() {
            assert_eq!(ex.current(b) as i64, z.current_through(b), "bond {b}");
        }
        assert!(z
            .heights()
            .heights()
            .windows(2)
            .all(|p| (0..=1).contains(&(p[1] - p[0]))));
    }
    // evolve_heights is the same dynamics
    let direct = evolve_heights(heights_from_occ(&occ).unwrap(), &clocks, 20.0);
    assert_eq!(direct.heights(), z.heights());
}

#[test]
fn height_order_is_preserved() {
    let w = closed(40);
    let clocks = BondClocks::slow_bond(0.5, 12).unwrap();
    for seed in 0..10 {
        let a = init_bernoulli(0.6, w, seed).unwrap();
        // b has extra particles, so with equal heights at the left end z_b >= z_a
        let mut b = a.clone();
        for s in -20..0 {
            b.set(s, true);
        }
        let za = heights_from_occ(&a).unwrap();
        let zb = heights_from_occ(&b).unwrap();
        let shift = za.heights()[0] - zb.heights()[0];
        let zb = HeightConfig::new(w, zb.heights().iter().map(|h| h + shift).collect()).unwrap();
        let mut pa = HeightProcess::new(za);
        let mut pb = HeightProcess::new(zb);
        let (lo, hi) = (pa.heights().first_index(), pa.heights().last_index());
        assert!((lo..=hi).all(|i| pa.heights().get(i) <= pb.heights().get(i)));
        let mut q = ClockQueue::new(&clocks, w.bonds());
        for t in 1..=30 {
            q.drive(t as f64, &mut [&mut pa, &mut pb]);
            assert!(
                (lo..=hi).all(|i| pa.heights().get(i) <= pb.heights().get(i)),
                "seed {seed} t {t}"
            );
        }
    }
}

#[test]
fn slow_bond_first_jump_is_exponential() {
    let r = 0.4;
    let w = closed(3);
    let times: Vec<f64> = (0..10_000u64)
        .map(|s| first_jump_time(w, 0, &BondClocks::slow_bond(r, s).unwrap(), 1e6).unwrap())
        .collect();
    let st = SampleStats::from_values(&times);
    assert!((st.mean - 1.0 / r).abs() < 3.0 * st.stderr, "{st:?}");
    assert!(first_jump_time(w, 3, &BondClocks::uniform(0), 10.0).is_none());
}

#[test]
fn init_and_density_measurement() {
    let w = closed(50_000);
    assert_eq!(init_bernoulli(0.0, w, 1).unwrap().particle_count(), 0);
    assert_eq!(init_bernoulli(1.0, w, 1).unwrap().particle_count(), w.len());
    let occ = init_bernoulli(0.5, w, 2).unwrap();
    assert!((occ.particle_count() as f64 / w.len() as f64 - 0.5).abs() < 0.01);
    assert!(init_bernoulli(1.5, w, 1).is_err());

    let full = init_bernoulli(1.0, w, 1).unwrap();
    assert!((measure_density(&full, -0.5, 1.0, 1000.0).unwrap() - 1.5).abs() <= 1e-3);
    assert_eq!(measure_density(&Occupancies::empty(w), -1.0, 1.0, 1000.0).unwrap(), 0.0);
    assert!(measure_density(&full, -60.0, 0.0, 1000.0).is_err());

    let n = 1000.0;
    let flat = MacroProfile::constant(0.3).unwrap();
    let occ = init_from_profile(&flat, n, closed(5000), (-5.0, 5.0), 7).unwrap();
    for a in -5..5 {
        let d = measure_density(&occ, a as f64, a as f64 + 1.0, n).unwrap();
        assert!((d - 0.3).abs() < 0.02 + 0.02, "block {a}: {d}");
    }
    assert!(init_from_profile(&flat, n, closed(100), (-5.0, 5.0), 7).is_err());
    let step = MacroProfile::step(0.8, 0.0, 0.2).unwrap();
    let occ = init_from_profile(&step, n, closed(5000), (-5.0, 5.0), 8).unwrap();
    assert!((measure_density(&occ, -5.0, 0.0, n).unwrap() / 5.0 - 0.8).abs() < 0.02);
    assert!((measure_density(&occ, 0.0, 5.0, n).unwrap() / 5.0 - 0.2).abs() < 0.02);
}

#[test]
fn snapshot_round_trip() {
    for w in [closed(13), Window::periodic(4).unwrap()] {
        let snap = Snapshot {
            occ: init_bernoulli(0.5, w, 1).unwrap(),
            time: 2.5,
            seed: 99,
        };
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &snap).unwrap();
        assert_eq!(buf.len(), 30 + w.len().div_ceil(8));
        assert_eq!(read_snapshot(Cursor::new(&buf)).unwrap(), snap);
        buf[0] = b'X';
        assert!(read_snapshot(Cursor::new(&buf)).is_err());
    }
}

#[test]
fn xi_starts_at_the_wedge_boundary_and_keeps_its_constraints() {
    let clocks = BondClocks::slow_bond(0.5, 21).unwrap();
    let states = simulate_xi(3, &clocks, 30, &[0.0, 1.0, 2.0, 4.0]).unwrap();
    let s0 = &states[0];
    assert!((-30..=30).all(|m| s0.values[(m + 30) as usize] == xi_initial(m)));
    let mut xi = XiProcess::new(-2, 25).unwrap();
    let mut q = ClockQueue::new(&clocks, xi.bonds());
    q.advance_to(6.0, |b, t| {
        xi.on_epoch(b, t);
        assert!(xi.satisfies_constraints());
    });
    assert!(simulate_xi(0, &clocks, 3, &[50.0]).is_err());
}

/// Level-crossing times of `ξ^k` against wedge passage times with the slow
/// column at `−k`: equal in law, so compare means and variances.
#[test]
fn xi_crossings_match_wedge_passage_in_law() {
    let r = 0.5;
    let k = -1;
    let targets = [(1i64, 4i64), (-2, 5), (3, 3)];
    let reps = 500u64;
    let mut xi_times = vec![Vec::new(); targets.len()];
    let mut lpp_times = vec![Vec::new(); targets.len()];
    for s in 0..reps {
        let c = BondClocks::slow_bond(r, 1000 + s).unwrap();
        let t = level_crossings(k, &c, 80, &targets, 1e4).unwrap();
        let g = sample_wedge(4, 6, -k, r, 5000 + s).unwrap();
        let table = passage_time_wedge(&g);
        for (n, &(i, j)) in targets.iter().enumerate() {
            xi_times[n].push(t[n]);
            lpp_times[n].push(table.get(Site::new(i, j)).unwrap());
        }
    }
    for n in 0..targets.len() {
        let a = SampleStats::from_values(&xi_times[n]);
        let b = SampleStats::from_values(&lpp_times[n]);
        let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.mean - b.mean).abs() < 3.0 * se, "{:?}: {a:?} vs {b:?}", targets[n]);
        // variance of the sample variance, rough normal-theory bound with kurtosis slack
        let (va, vb) = (a.variance(), b.variance());
        let sv = ((2.0 * va * va + 2.0 * vb * vb) * 3.0 / reps as f64).sqrt();
        assert!((va - vb).abs() < 3.0 * sv, "{:?}: var {va} vs {vb}", targets[n]);
    }
}

fn random_config(l: i64, seed: u64) -> HeightConfig {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let count = rng.random_range(1..=40);
    let mut sites: Vec<i64> = (-30..=30).collect();
    for i in 0..count {
        let j = rng.random_range(i..sites.len());
        sites.swap(i, j);
    }
    let occ = Occupancies::from_sites(closed(l), &sites[..count]).unwrap();
    heights_from_occ(&occ).unwrap()
}

#[test]
fn variational_coupling_is_exact() {
    let times: Vec<f64> = (0..=10).map(f64::from).collect();
    for seed in 0..50 {
        let z0 = random_config(60, seed);
        let clocks = BondClocks::slow_bond(0.5, 700 + seed).unwrap();
        let rep = coupling_check(&z0, &clocks, &times, 40).unwrap();
        assert!(
            rep.exact(),
            "seed {seed}: {:?}",
            &rep.mismatches[..rep.mismatches.len().min(5)]
        );
        assert_eq!(rep.comparisons, 11 * 122);
    }
}

#[test]
fn coupling_single_particle() {
    let occ = Occupancies::from_sites(closed(10), &[0]).unwrap();
    let z0 = heights_from_occ(&occ).unwrap();
    let rep = coupling_check(&z0, &BondClocks::slow_bond(0.2, 3).unwrap(), &[0.0, 0.5, 1.0, 2.0], 12).unwrap();
    assert!(rep.exact());
}

#[test]
fn coupling_refuses_narrow_windows() {
    let z0 = random_config(32, 1);
    let r = coupling_check(&z0, &BondClocks::uniform(4), &[0.0, 60.0], 40);
    assert!(matches!(r, Err(slowbond::Error::MarginViolated(_))));
}

#[test]
fn pair_correlation_off_and_at_the_defect() {
    let ring = Window::periodic(500).unwrap();
    let pc = stationary_pair_correlation(0.3, 1.0, ring, 500.0, 10_000.0, 1, None).unwrap();
    assert!(pc.estimates.iter().all(|p| (p - 0.21).abs() < 0.02));
    let pc = stationary_pair_correlation(0.1, 0.5, ring, 500.0, 10_000.0, 2, Some(0.25)).unwrap();
    assert!(pc.precondition_ok);
    assert!((pc.at(0).unwrap() - 0.18).abs() < 0.02, "{:?}", pc.at(0));
    assert!((pc.at(5).unwrap() - 0.09).abs() < 0.02);
    assert!((pc.at(-5).unwrap() - 0.09).abs() < 0.02);
    let pc = stationary_pair_correlation(0.0, 0.5, ring, 1.0, 10.0, 3, None).unwrap();
    assert!(pc.estimates.iter().all(|p| *p == 0.0));
    let flagged =
        stationary_pair_correlation(0.5, 0.5, Window::periodic(20).unwrap(), 1.0, 1.0, 3, Some(0.25)).unwrap();
    assert!(!flagged.precondition_ok);
}

proptest! {
    #[test]
    fn heights_round_trip(bits in prop::collection::vec(any::<bool>(), 41)) {
        let occ = Occupancies::from_bits(closed(20), bits).unwrap();
        let z = heights_from_occ(&occ).unwrap();
        prop_assert_eq!(z.get(0), 0);
        prop_assert_eq!(occ_from_heights(&z), occ);
    }

    #[test]
    fn bad_increments_rejected(k in 0usize..42, d in prop_oneof![Just(-1i64), Just(2i64)]) {
        let mut h = vec![0i64; 42];
        for v in h.iter_mut().skip(k + 1) {
            *v = d;
        }
        if k + 1 < 42 {
            prop_assert!(HeightConfig::new(closed(20), h).is_err());
        }
    }
}
