use std::collections::BTreeMap;
use std::time::Instant;

use nnsft_core::admissibility::{LineExact, LocalSuffices, PeriodicExtension};
use nnsft_core::{Letter, Pattern, PeriodicPoint, Shape, Site};
use nnsft_gibbs::{model, Interaction};
use nnsft_ssm::*;

fn phi(name: &str, kv: &[(&str, f64)]) -> Interaction {
    let p: BTreeMap<String, f64> = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    model(name, &p).unwrap()
}

fn local(phi: &Interaction) -> LocalSuffices {
    LocalSuffices::assume_ssf(phi.underlying_sft().clone())
}

/// Largest change of `μ(x(0) = 1)` on `[-n, n]` between end letters, by
/// enumerating every word. With `vary_left`, both ends may change; else
/// only the right end does.
fn hard_core_line_oracle(lambda: f64, n: i64, vary_left: bool) -> f64 {
    let len = (2 * n + 1) as u32;
    let prob = |left: u32, right: u32| -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for w in 0u32..(1 << len) {
            let word = (left) | (w << 1) | (right << (len + 1));
            if word & (word >> 1) != 0 {
                continue;
            }
            let weight = lambda.powi(w.count_ones() as i32);
            den += weight;
            if w >> n & 1 == 1 {
                num += weight;
            }
        }
        num / den
    };
    let mut best: f64 = 0.0;
    for l1 in 0..2 {
        for r1 in 0..2 {
            for l2 in 0..2 {
                for r2 in 0..2 {
                    if !vary_left && l1 != l2 {
                        continue;
                    }
                    best = best.max((prob(l1, r1) - prob(l2, r2)).abs());
                }
            }
        }
    }
    best
}

#[test]
fn full_shift_has_no_discrepancy() {
    for d in 1..=2 {
        let f = phi("potts", &[("q", 2.0), ("J", 0.0), ("d", d as f64)]);
        let adm = local(&f);
        let s = ssm_profile(&f, &BoundaryFamily::Rhomboids, 0..=2, &adm, ProfileBudget::default()).unwrap();
        let w = wsm_profile(&f, &BoundaryFamily::Rhomboids, 0..=2, &adm, ProfileBudget::default()).unwrap();
        assert!(s.max_discrepancy().iter().chain(w.max_discrepancy().iter()).all(|&v| v.abs() < 1e-15));
        assert!(s.fit.is_none() && w.fit.is_none());
        assert_eq!(s.distances(), vec![1, 2, 3]);
    }
}

#[test]
fn hard_core_line_matches_enumeration() {
    for lambda in [1.0, 0.5, 2.0] {
        let hc = phi("hard_core", &[("lambda", lambda), ("d", 1.0)]);
        let adm = LineExact::new(hc.underlying_sft().clone()).unwrap();
        let s = ssm_profile(&hc, &BoundaryFamily::Rhomboids, 0..=8, &adm, ProfileBudget::default()).unwrap();
        let w = wsm_profile(&hc, &BoundaryFamily::Rhomboids, 0..=8, &adm, ProfileBudget::default()).unwrap();
        for (i, n) in (0..=8i64).enumerate() {
            assert!((s.points[i].max_discrepancy - hard_core_line_oracle(lambda, n, false)).abs() < 1e-12);
            assert!((w.points[i].max_discrepancy - hard_core_line_oracle(lambda, n, true)).abs() < 1e-12);
            assert!(w.points[i].max_discrepancy >= s.points[i].max_discrepancy);
            let wit = s.points[i].witness.as_ref().unwrap();
            assert!(((wit.p1 - wit.p2).abs() - s.points[i].max_discrepancy).abs() < 1e-15);
        }
        let fit = s.fit.unwrap();
        assert!(fit.alpha > 0.0);
        if lambda == 1.0 {
            // the second eigenvalue ratio of the golden-mean matrix gives rate 2 log φ per step
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            assert!((fit.alpha - 2.0 * golden.ln()).abs() < 0.05, "{}", fit.alpha);
        }
    }
}

#[test]
fn smaller_activity_decays_faster() {
    let rate = |lambda: f64| {
        let hc = phi("hard_core", &[("lambda", lambda), ("d", 1.0)]);
        let adm = LineExact::new(hc.underlying_sft().clone()).unwrap();
        ssm_profile(&hc, &BoundaryFamily::Rhomboids, 0..=6, &adm, ProfileBudget::default()).unwrap().fit.unwrap().alpha
    };
    let rates: Vec<f64> = [2.0, 1.0, 0.5, 0.1].into_iter().map(rate).collect();
    for w in rates.windows(2) {
        assert!(w[1] > w[0], "{rates:?}");
    }
}

#[test]
fn hard_square_profiles() {
    let hc = phi("hard_core", &[("lambda", 1.0), ("d", 2.0)]);
    let adm = local(&hc);
    let s = ssm_profile(&hc, &BoundaryFamily::Rhomboids, 0..=2, &adm, ProfileBudget::default()).unwrap();
    let w = wsm_profile(&hc, &BoundaryFamily::Rhomboids, 0..=2, &adm, ProfileBudget::default()).unwrap();
    for (a, b) in s.points.iter().zip(&w.points) {
        assert!(a.max_discrepancy <= b.max_discrepancy + 1e-15);
        assert!(a.max_discrepancy > 0.0 && b.max_discrepancy < 1.0);
    }
    for p in s.points.windows(2) {
        assert!(p[1].max_discrepancy < p[0].max_discrepancy);
    }
    let csv = s.to_csv();
    assert!(csv.starts_with("n,distance,max_discrepancy\n1,") || csv.starts_with("n,distance,max_discrepancy\n0,1,"));
    assert_eq!(csv.lines().count(), 4);
    let budget = ProfileBudget { max_boundaries: 10 };
    assert!(matches!(ssm_profile(&hc, &BoundaryFamily::Rhomboids, 1..=1, &adm, budget), Err(SsmError::Budget(_))));
}

#[test]
fn lipschitz_rate_is_at_least_the_guaranteed_rate() {
    let lambda = 1e4;
    let lip = phi("lipschitz", &[("g", 2.0), ("lambda", lambda), ("d", 2.0)]);
    let adm = local(&lip);
    let s = ssm_profile(&lip, &BoundaryFamily::Rhomboids, 0..=2, &adm, ProfileBudget::default()).unwrap();
    let cert = andes_rate(2, 2, lambda).unwrap();
    assert!(!cert.guaranteed);
    let fit = s.fit.as_ref().expect("at least two positive points");
    println!("fitted α̂ = {:.4}, formula α = {:.4}, points {:?}", fit.alpha, cert.alpha, s.max_discrepancy());
    assert!(fit.alpha >= cert.alpha);
}

#[test]
fn profiles_are_symmetric_under_reflection() {
    // reflecting the geometry through the vertical axis gives the same value
    let hc = phi("hard_core", &[("lambda", 1.5), ("d", 2.0)]);
    let adm = local(&hc);
    let mut mirrored = Vec::new();
    for n in 0..=2u32 {
        let g = BoundaryFamily::Rhomboids.geometry(n, 2).unwrap();
        let flip = |s: &Site| Site::new(&[-(s.coord(0) as i64), s.coord(1) as i64]).unwrap();
        mirrored.push(ProfileGeometry {
            region: Shape::from_sites(2, g.region.iter().map(flip)).unwrap(),
            target: flip(&g.target),
            locus: Shape::from_sites(2, g.locus.iter().map(flip)).unwrap(),
            context: Pattern::empty(2),
        });
    }
    let a = ssm_profile(&hc, &BoundaryFamily::Rhomboids, 0..=2, &adm, ProfileBudget::default()).unwrap();
    let b = ssm_profile(&hc, &BoundaryFamily::Custom { geometries: mirrored }, 0..=2, &adm, ProfileBudget::default()).unwrap();
    for (x, y) in a.points.iter().zip(&b.points) {
        assert!((x.max_discrepancy - y.max_discrepancy).abs() < 1e-14);
    }
}

/// The four-colouring stripe: the pinned rows force the middle row to two
/// colours, so the colour at the centre is decided by the ends.
#[test]
fn four_colourings_stripe_discrepancy_is_one() {
    let start = Instant::now();
    let c4 = phi("checkerboard", &[("k", 4.0), ("d", 2.0)]);
    let x = c4.underlying_sft().clone();
    let cell = Pattern::from_pairs(2, [(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0)].map(|(a, b, l)| (Site::new(&[a, b]).unwrap(), l as Letter)))
        .unwrap();
    let z = PeriodicPoint::new(&x, vec![2, 2], cell).unwrap();
    let adm = PeriodicExtension::new(x.clone(), 6, z).unwrap();
    let family = BoundaryFamily::Stripe { a: 0, b: 1 };
    let s = ssm_profile(&c4, &family, 2..=2, &adm, ProfileBudget::default()).unwrap();
    let p = &s.points[0];
    assert_eq!(p.distance, 4);
    assert_eq!(p.max_discrepancy, 1.0);
    let wit = p.witness.as_ref().unwrap();
    assert!(wit.letter == 2 || wit.letter == 3);
    assert_eq!((wit.p1, wit.p2), (1.0, 0.0));
    let ends = Shape::from_coords(2, &[&[-4, 0], &[4, 0]]).unwrap();
    assert_ne!(wit.delta1.restrict(&ends), wit.delta2.restrict(&ends));
    // the pair with both ends coloured 3, against both ends coloured 4
    let geo = family.geometry(2, 2).unwrap();
    let centre = Pattern::single(Site::origin(2), 2);
    for (end, want) in [(2, 1.0), (3, 0.0)] {
        let delta = geo.context.union(&Pattern::constant(ends.clone(), end)).unwrap();
        assert!(nnsft_core::Admissibility::is_admissible(&adm, &delta));
        assert_eq!(nnsft_gibbs::transfer_conditional(&c4, &geo.region, &delta, &centre).unwrap(), want);
    }
    let s13 = ssm_profile(&c4, &family, 1..=3, &adm, ProfileBudget::default()).unwrap();
    assert!(s13.max_discrepancy().iter().all(|&v| v == 1.0));
    assert!(start.elapsed().as_secs() < 60);
}
