use std::collections::BTreeMap;

use nnsft_core::admissibility::random_fill;
use nnsft_core::lattice::{cuboid, half_rhomboid, rhomboid};
use nnsft_core::{Letter, Nnsft, Pattern, Shape, Site};
use nnsft_gibbs::{
    model, partition_function, specification_prob, transfer_conditional, transfer_conditional_with, Energy, GibbsError,
    Interaction, Model, SpecQuery,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn site(c: &[i64]) -> Site {
    Site::new(c).unwrap()
}

fn pat(d: usize, entries: &[(&[i64], u8)]) -> Pattern {
    Pattern::from_pairs(d, entries.iter().map(|(c, a)| (site(c), *a))).unwrap()
}

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn hard_core(lambda: f64, d: usize) -> Interaction {
    Model::HardCore { lambda, d }.build().unwrap()
}

/// Brute-force oracle: every assignment of the region, weights from the
/// per-letter and per-pair energies, boundary-internal edges ignored.
fn oracle(phi: &Interaction, region: &Shape, boundary: &Pattern, target: &Pattern) -> Option<f64> {
    let k = phi.alphabet_size();
    let n = region.len() as u32;
    let sites = region.sites();
    let mut z = 0.0;
    let mut hit = 0.0;
    for code in 0..(k as u64).pow(n) {
        let mut c = code;
        let vals: Vec<Letter> = (0..n)
            .map(|_| {
                let v = (c % k as u64) as Letter;
                c /= k as u64;
                v
            })
            .collect();
        let letter = |s: &Site| sites.binary_search(s).ok().map(|i| vals[i]).or_else(|| boundary.get(s));
        let mut u = 0.0;
        let mut ok = true;
        for (i, s) in sites.iter().enumerate() {
            u += phi.vertex(vals[i]);
            for axis in 0..phi.dim() {
                for sign in [1, -1] {
                    let q = s.step(axis, sign).unwrap();
                    // count each edge once: forward edges always, backward only into the boundary
                    if sign < 0 && region.contains(&q) {
                        continue;
                    }
                    let Some(b) = letter(&q) else { continue };
                    let e = if sign > 0 { phi.edge(axis, vals[i], b) } else { phi.edge(axis, b, vals[i]) };
                    match e {
                        Energy::Finite(v) => u += v,
                        Energy::Infinite => ok = false,
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let w = (-u).exp();
        z += w;
        if target.iter().all(|(s, a)| letter(s) == Some(a)) {
            hit += w;
        }
    }
    (z > 0.0).then(|| hit / z)
}

#[test]
fn underlying_shifts() {
    let h = hard_core(2.0, 2);
    let hs = Nnsft::from_fn(nnsft_core::Alphabet::numbered(2).unwrap(), 2, |_, a, b| !(a == 1 && b == 1)).unwrap();
    assert_eq!(h.underlying_sft(), &hs);
    let potts = Model::Potts { q: 3, coupling: 0.7, d: 2 }.build().unwrap();
    assert_eq!(potts.underlying_sft().relation(0), Nnsft::full_shift(3, 2).unwrap().relation(0));
    let lip = Model::Lipschitz { g: 3, lambda: 5.0, d: 2 }.build().unwrap();
    for a in 0..4u8 {
        for b in 0..4u8 {
            assert_eq!(lip.underlying_sft().allows(1, a, b), a.abs_diff(b) <= 1);
        }
    }
}

#[test]
fn energies() {
    let lambda = 3.5f64;
    let h = hard_core(lambda, 2);
    assert_eq!(h.energy(&pat(2, &[(&[0, 0], 1)])), Energy::Finite(-lambda.ln()));
    assert_eq!(h.energy(&pat(2, &[(&[0, 0], 1), (&[0, 1], 1)])), Energy::Infinite);
    let lip = Model::Lipschitz { g: 4, lambda, d: 2 }.build().unwrap();
    let Energy::Finite(u) = lip.energy(&pat(2, &[(&[3, 3], 3)])) else { panic!() };
    assert!((u + 3.0 * lambda.ln()).abs() < 1e-15);
    assert_eq!(h.energy(&Pattern::empty(2)), Energy::Finite(0.0));
}

#[test]
fn partition_function_examples() {
    let lambda = 2.25;
    let h = hard_core(lambda, 2);
    let o = Shape::singleton(Site::origin(2));
    let z = partition_function(&h, &o, None).unwrap();
    assert!((z.value() - (1.0 + lambda)).abs() < 1e-12);
    let domino = Shape::from_coords(2, &[&[0, 0], &[1, 0]]).unwrap();
    assert!((partition_function(&h, &domino, None).unwrap().value() - (1.0 + 2.0 * lambda)).abs() < 1e-12);
    let h1 = hard_core(1.0, 2);
    let z = partition_function(&h1, &o, Some(&pat(2, &[(&[1, 0], 1)]))).unwrap();
    assert!((z.value() - 1.0).abs() < 1e-15 && !z.zero);
    // a boundary that no fill can meet
    let c2 = Model::Checkerboard { k: 2, d: 2 }.build().unwrap();
    let z = partition_function(&c2, &o, Some(&pat(2, &[(&[1, 0], 0), (&[-1, 0], 1)]))).unwrap();
    assert!(z.zero);
    assert_eq!(z.value(), 0.0);
    // large regions go through the sweep and agree with the transfer-free count
    let big = cuboid(&[0, 0], &[4, 5]).unwrap();
    let z = partition_function(&h1, &big, None).unwrap();
    let count = nnsft_core::solver::count_extensions(h1.underlying_sft(), &Pattern::empty(2), &big).unwrap();
    assert!((z.log - nnsft_core::counting::ln_biguint(&count)).abs() < 1e-12);
}

#[test]
fn specification_examples() {
    let lambda = 0.8;
    let h = hard_core(lambda, 2);
    let o = Shape::singleton(Site::origin(2));
    let ring = o.boundary().unwrap();
    let q = SpecQuery::new(o.clone(), Pattern::constant(ring.clone(), 0), Pattern::single(Site::origin(2), 1)).unwrap();
    assert!((specification_prob(&h, &q).unwrap() - lambda / (1.0 + lambda)).abs() < 1e-15);
    let q = SpecQuery::new(o.clone(), Pattern::constant(ring.clone(), 0), Pattern::empty(2)).unwrap();
    assert_eq!(specification_prob(&h, &q).unwrap(), 1.0);

    let c4 = Model::Checkerboard { k: 4, d: 2 }.build().unwrap();
    // ring order is (-1,0), (0,-1), (0,1), (1,0); colours 1,2,3,1 leave only colour 4
    let delta = Pattern::new(ring.clone(), vec![0, 1, 2, 0]).unwrap();
    let q = SpecQuery::new(o.clone(), delta.clone(), Pattern::single(Site::origin(2), 3)).unwrap();
    assert_eq!(specification_prob(&c4, &q).unwrap(), 1.0);
    assert_eq!(transfer_conditional(&c4, &o, &delta, &Pattern::single(Site::origin(2), 3)).unwrap(), 1.0);

    let eta = Pattern::new(ring.clone(), vec![2, 3, 1, 0]).unwrap();
    let q = SpecQuery::new(o.clone(), eta, Pattern::empty(2)).unwrap();
    assert!(matches!(specification_prob(&c4, &q), Err(GibbsError::NonAdmissibleBoundary)));
    assert!(matches!(
        SpecQuery::new(o.clone(), Pattern::empty(2), Pattern::empty(2)),
        Err(GibbsError::BoundaryShape)
    ));
    assert!(matches!(
        SpecQuery::new(o, Pattern::constant(ring, 0), pat(2, &[(&[5, 5], 0)])),
        Err(GibbsError::TargetOutsideRegion)
    ));
}

#[test]
fn registry_values() {
    let h = model("hard_core", &params(&[("lambda", 1.0), ("d", 2.0)])).unwrap();
    assert_eq!(h.vertex(1), 0.0);
    let j = 0.37;
    let ising = model("ising", &params(&[("E", 0.0), ("J", j)])).unwrap();
    let plus = ising.alphabet().index_of("+1").unwrap();
    let minus = ising.alphabet().index_of("-1").unwrap();
    assert_eq!(ising.edge(0, plus, minus), Energy::Finite(j));
    assert_eq!(ising.edge(1, plus, plus), Energy::Finite(-j));
    let field = model("ising", &params(&[("E", 0.5), ("J", 0.0)])).unwrap();
    assert_eq!(field.vertex(plus), -0.5);
    let cb = model("checkerboard", &params(&[("k", 4.0), ("d", 2.0)])).unwrap();
    for a in 0..4 {
        assert_eq!(cb.edge(0, a, a), Energy::Infinite);
        assert_eq!(cb.edge(1, a, (a + 1) % 4), Energy::Finite(0.0));
    }
    let potts = model("potts", &params(&[("q", 3.0), ("J", 2.0)])).unwrap();
    assert_eq!(potts.edge(0, 1, 1), Energy::Finite(-2.0));
    let ice = model("iceberg", &params(&[("M", 2.0)])).unwrap();
    assert_eq!(ice.alphabet().labels(), ["-2", "-1", "+1", "+2"]);
    let lip = model("lipschitz", &params(&[("g", 2.0), ("lambda", 10.0)])).unwrap();
    assert_eq!(lip.alphabet_size(), 3);

    for (name, bad) in [
        ("hard_core", params(&[("lambda", 0.0)])),
        ("potts", params(&[("q", 1.0)])),
        ("checkerboard", params(&[("k", 1.0)])),
        ("iceberg", params(&[("M", 1.0)])),
        ("lipschitz", params(&[("g", 2.0), ("lambda", -1.0)])),
        ("checkerboard", params(&[("k", 2.5)])),
        ("hard_core", params(&[("d", 0.0)])),
    ] {
        assert!(matches!(model(name, &bad), Err(GibbsError::InvalidParameter(_))), "{name}");
    }
    assert!(matches!(model("percolation", &params(&[])), Err(GibbsError::UnknownModel(_))));
    assert!(Interaction::new(nnsft_core::Alphabet::numbered(2).unwrap(), 1, vec![0.0, f64::INFINITY], vec![vec![Energy::Finite(0.0); 4]]).is_err());
}

fn suite_models() -> Vec<Interaction> {
    vec![
        Model::HardCore { lambda: 1.0, d: 2 }.build().unwrap(),
        Model::HardCore { lambda: 3.7, d: 2 }.build().unwrap(),
        Model::Ising { field: 0.3, coupling: -0.6, d: 2 }.build().unwrap(),
        Model::Potts { q: 3, coupling: 0.9, d: 2 }.build().unwrap(),
        Model::Checkerboard { k: 3, d: 2 }.build().unwrap(),
        Model::Checkerboard { k: 4, d: 2 }.build().unwrap(),
        Model::Iceberg { m: 2, d: 2 }.build().unwrap(),
        Model::Lipschitz { g: 2, lambda: 4.0, d: 2 }.build().unwrap(),
    ]
}

fn suite_regions() -> Vec<Shape> {
    vec![
        Shape::singleton(Site::origin(2)),
        Shape::from_coords(2, &[&[0, 0], &[1, 0]]).unwrap(),
        Shape::from_coords(2, &[&[0, 0], &[1, 0], &[1, 1]]).unwrap(),
        cuboid(&[0, 0], &[1, 1]).unwrap(),
        cuboid(&[0, 0], &[1, 2]).unwrap(),
        rhomboid(1, 2).unwrap(),
        half_rhomboid(2, 2).unwrap().w,
        cuboid(&[0, 0], &[2, 2]).unwrap(),
        Shape::from_coords(2, &[&[0, 0], &[2, 0], &[0, 2]]).unwrap(),
    ]
}

fn random_boundary(phi: &Interaction, region: &Shape, rng: &mut ChaCha8Rng) -> Pattern {
    let ring = region.boundary().unwrap();
    let k = phi.alphabet_size() as u8;
    let vals = (0..ring.len()).map(|_| rng.gen_range(0..k)).collect();
    Pattern::new(ring, vals).unwrap()
}

#[test]
fn transfer_matches_enumeration_and_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut compared = 0;
    for phi in suite_models() {
        let k = phi.alphabet_size();
        for region in suite_regions() {
            let mut tried = 0;
            while tried < 4 {
                let delta = random_boundary(&phi, &region, &mut rng);
                let probe = SpecQuery::new(region.clone(), delta.clone(), Pattern::empty(2)).unwrap();
                if specification_prob(&phi, &probe).is_err() {
                    continue;
                }
                tried += 1;
                let small = (k as f64).powi(region.len() as i32) <= 70_000.0;
                for s in [region.sites()[0].clone(), region.sites()[region.len() / 2].clone()] {
                    let mut total = 0.0;
                    for a in 0..k as u8 {
                        let t = Pattern::single(s.clone(), a);
                        let q = SpecQuery::new(region.clone(), delta.clone(), t.clone()).unwrap();
                        let exact = specification_prob(&phi, &q).unwrap();
                        let swept = transfer_conditional(&phi, &region, &delta, &t).unwrap();
                        assert!((exact - swept).abs() <= 1e-12, "{exact} vs {swept}");
                        if small {
                            let o = oracle(&phi, &region, &delta, &t).unwrap();
                            assert!((exact - o).abs() <= 1e-12, "{exact} vs oracle {o}");
                        }
                        total += exact;
                        compared += 1;
                    }
                    assert!((total - 1.0).abs() <= 1e-10);
                }
                // a two-site target
                if region.len() >= 2 {
                    let t = Pattern::from_pairs(2, [(region.sites()[0].clone(), 0), (region.sites()[1].clone(), (k - 1) as u8)]).unwrap();
                    let q = SpecQuery::new(region.clone(), delta.clone(), t.clone()).unwrap();
                    let exact = specification_prob(&phi, &q).unwrap();
                    assert!((exact - transfer_conditional(&phi, &region, &delta, &t).unwrap()).abs() <= 1e-12);
                }
            }
        }
    }
    assert!(compared > 500);
}

#[test]
fn markov_consistency_on_nested_regions() {
    let outer = cuboid(&[0, 0], &[2, 2]).unwrap();
    let inner = Shape::singleton(site(&[1, 1]));
    let between = outer.difference(&inner).unwrap();
    for phi in suite_models() {
        let k = phi.alphabet_size() as u8;
        let closed = outer.union(&outer.boundary().unwrap()).unwrap();
        for seed in 0..3u64 {
            // a random locally admissible fill of the closed block supplies δ and w
            let fill = random_fill(phi.underlying_sft(), &Pattern::empty(2), &closed, seed + 100 * k as u64).unwrap().unwrap();
            let delta = fill.restrict(&outer.boundary().unwrap());
            let w = fill.restrict(&between);
            let q_w = SpecQuery::new(outer.clone(), delta.clone(), w.clone()).unwrap();
            let pw = specification_prob(&phi, &q_w).unwrap();
            assert!(pw > 0.0);
            let inner_boundary = w.restrict(&inner.boundary().unwrap());
            for a in 0..k {
                let u = Pattern::single(site(&[1, 1]), a);
                let joint = SpecQuery::new(outer.clone(), delta.clone(), w.union(&u).unwrap()).unwrap();
                let lhs = specification_prob(&phi, &joint).unwrap() / pw;
                let small = SpecQuery::new(inner.clone(), inner_boundary.clone(), u).unwrap();
                let rhs = specification_prob(&phi, &small).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10, "{lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn finite_interactions_have_positive_partition_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let region = cuboid(&[0, 0], &[1, 2]).unwrap();
    for phi in [
        Model::Ising { field: -1.0, coupling: 2.0, d: 2 }.build().unwrap(),
        Model::Potts { q: 4, coupling: -3.0, d: 2 }.build().unwrap(),
    ] {
        for _ in 0..30 {
            let delta = random_boundary(&phi, &region, &mut rng);
            let z = partition_function(&phi, &region, Some(&delta)).unwrap();
            assert!(!z.zero && z.value() > 0.0);
        }
    }
}

#[test]
fn transfer_special_cases() {
    let h = hard_core(1.0, 2);
    let hr = half_rhomboid(2, 2).unwrap();
    let boundary = Pattern::constant(hr.w.boundary().unwrap(), 0);
    let t = Pattern::single(Site::origin(2), 0);
    let swept = transfer_conditional(&h, &hr.w, &boundary, &t).unwrap();
    let o = oracle(&h, &hr.w, &boundary, &t).unwrap();
    assert!((swept - o).abs() < 1e-13);

    let full = Interaction::uniform(&Nnsft::full_shift(3, 2).unwrap());
    let region = cuboid(&[0, 0], &[2, 3]).unwrap();
    let delta = Pattern::constant(region.boundary().unwrap(), 1);
    let t = pat(2, &[(&[0, 0], 2), (&[1, 2], 0)]);
    assert!((transfer_conditional(&full, &region, &delta, &t).unwrap() - 1.0 / 9.0).abs() < 1e-14);

    let tall = cuboid(&[0, 0], &[0, 14]).unwrap();
    let delta = Pattern::constant(tall.boundary().unwrap(), 0);
    assert!(matches!(
        transfer_conditional(&h, &tall, &delta, &Pattern::empty(2)),
        Err(GibbsError::ColumnTooTall { height: 15, max: 14 })
    ));
    assert!(transfer_conditional_with(&h, &tall, &delta, &Pattern::empty(2), 15).is_ok());

    // one dimension: the hard-core chain against the oracle
    let h1 = hard_core(0.5, 1);
    let line = cuboid(&[0], &[6]).unwrap();
    let delta = pat(1, &[(&[-1], 1), (&[7], 0)]);
    for a in 0..2 {
        let t = Pattern::single(site(&[3]), a);
        let o = oracle(&h1, &line, &delta, &t).unwrap();
        assert!((transfer_conditional(&h1, &line, &delta, &t).unwrap() - o).abs() < 1e-13);
    }
}

proptest! {
    #[test]
    fn energy_is_additive_over_separated_parts(
        left in prop::collection::vec(0u8..3, 4),
        right in prop::collection::vec(0u8..3, 4),
        gap in 2i64..5,
    ) {
        let phi = Model::Lipschitz { g: 2, lambda: 2.5, d: 2 }.build().unwrap();
        let a = Pattern::new(cuboid(&[0, 0], &[1, 1]).unwrap(), left).unwrap();
        let b = Pattern::new(cuboid(&[1 + gap, 0], &[2 + gap, 1]).unwrap(), right).unwrap();
        let whole = a.union(&b).unwrap();
        let (Energy::Finite(u), Energy::Finite(v), Energy::Finite(uv)) = (phi.energy(&a), phi.energy(&b), phi.energy(&whole)) else {
            prop_assert!(phi.energy(&whole) == Energy::Infinite);
            prop_assert!(!phi.energy(&a).is_finite() || !phi.energy(&b).is_finite());
            return Ok(());
        };
        // equal up to summation order
        prop_assert!((uv - (u + v)).abs() <= 1e-12 * (1.0 + uv.abs()));
    }

    #[test]
    fn marginals_sum_to_one(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = Model::Iceberg { m: 2, d: 2 }.build().unwrap();
        let region = cuboid(&[0, 0], &[1, 1]).unwrap();
        let delta = random_boundary(&phi, &region, &mut rng);
        let total: Result<f64, _> = (0..4u8)
            .map(|a| transfer_conditional(&phi, &region, &delta, &Pattern::single(Site::origin(2), a)))
            .sum();
        if let Ok(t) = total {
            prop_assert!((t - 1.0).abs() < 1e-10);
        }
    }
}
