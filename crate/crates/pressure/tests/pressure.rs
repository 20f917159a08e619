use std::collections::BTreeMap;
use std::time::Instant;

use nnsft_core::admissibility::{random_admissible, LineExact, LocalSuffices};
use nnsft_core::lattice::{block, half_rhomboid, rhomboid};
use nnsft_core::{Admissibility, Letter, Pattern, PeriodicPoint, Shape, Site};
use nnsft_gibbs::{model, Interaction};
use nnsft_mixing::{certificate_chain, MixingCertificate, Property};
use nnsft_pressure::*;
use proptest::prelude::*;

/// Frozen hard-square entropy (see the oracle test).
const HARD_SQUARE_ENTROPY: f64 = 0.4074951;

fn phi(name: &str, kv: &[(&str, f64)]) -> Interaction {
    let p: BTreeMap<String, f64> = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    model(name, &p).unwrap()
}

fn hard_core(lambda: f64, d: usize) -> Interaction {
    phi("hard_core", &[("lambda", lambda), ("d", d as f64)])
}

fn full_shift(d: usize) -> Interaction {
    phi("potts", &[("q", 2.0), ("J", 0.0), ("d", d as f64)])
}

fn job(phi: Interaction, letter: Letter) -> PressureJob {
    let x = phi.underlying_sft().clone();
    let z = PeriodicPoint::constant(&x, letter).unwrap();
    let certs = certificate_chain(&x).unwrap();
    PressureJob::new(phi, z, &certs).unwrap()
}

fn decode(mut code: u64, k: u64, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| {
            let a = (code % k) as Letter;
            code /= k;
            a
        })
        .collect()
}

/// Log-weight of a fill `w` of a region next to `boundary`: vertex terms on
/// the region and every edge with an endpoint in the region, or `None` when
/// an edge is forbidden.
fn log_weight(phi: &Interaction, w: &Pattern, boundary: &Pattern) -> Option<f64> {
    let mut total = 0.0;
    for (s, a) in w.iter() {
        total -= phi.vertex(a);
        for axis in 0..phi.dim() {
            for sign in [1, -1] {
                let q = s.step(axis, sign).unwrap();
                if sign < 0 && w.get(&q).is_some() {
                    continue;
                }
                let Some(b) = w.get(&q).or_else(|| boundary.get(&q)) else { continue };
                let e = if sign > 0 { phi.edge(axis, a, b) } else { phi.edge(axis, b, a) };
                total -= e.finite()?;
            }
        }
    }
    Some(total)
}

/// Brute-force extremes of the conditional at the origin of `σ_p z`.
fn brute_bounds(phi: &Interaction, z: &PeriodicPoint, p: &Site, n: u32, adm: &dyn Admissibility) -> (f64, f64, usize) {
    let x = z.shifted(p);
    let hr = half_rhomboid(n, phi.dim()).unwrap();
    let past = x.restrict(&hr.s);
    let origin = Site::origin(phi.dim());
    let target = x.letter_at(&origin);
    let k = phi.alphabet_size() as u64;
    let (mut lo, mut hi, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for dcode in 0..k.pow(hr.v.len() as u32) {
        let delta = Pattern::new(hr.v.clone(), decode(dcode, k, hr.v.len())).unwrap();
        let boundary = past.union(&delta).unwrap();
        if !adm.is_admissible(&boundary) {
            continue;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for wcode in 0..k.pow(hr.w.len() as u32) {
            let w = Pattern::new(hr.w.clone(), decode(wcode, k, hr.w.len())).unwrap();
            if let Some(lw) = log_weight(phi, &w, &boundary) {
                den += lw.exp();
                if w.get(&origin) == Some(target) {
                    num += lw.exp();
                }
            }
        }
        let c = num / den;
        lo = lo.min(c);
        hi = hi.max(c);
        count += 1;
    }
    (lo, hi, count)
}

#[test]
fn friedland_terms() {
    let x = hard_core(1.0, 2).underlying_sft().clone();
    let terms = friedland_upper_bounds(&x, 4).unwrap();
    assert!((terms[0] - 63f64.ln() / 9.0).abs() < 1e-12);
    for w in terms.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    let x1 = hard_core(1.0, 1).underlying_sft().clone();
    // 3-letter words of the golden mean shift: 5
    assert!((friedland_upper_bounds(&x1, 1).unwrap()[0] - 5f64.ln() / 3.0).abs() < 1e-12);
    for k in 2..=3 {
        let f = phi("potts", &[("q", k as f64), ("J", 0.0), ("d", 2.0)]);
        for t in friedland_upper_bounds(f.underlying_sft(), 2).unwrap() {
            assert!((t - (k as f64).ln()).abs() < 1e-12);
        }
    }
}

#[test]
fn one_dimensional_pressure() {
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((pressure_1d(&hard_core(1.0, 1)).unwrap() - golden).abs() < 1e-12);
    let lambda: f64 = 0.5;
    let closed = ((1.0 + (1.0 + 4.0 * lambda).sqrt()) / 2.0).ln();
    assert!((pressure_1d(&hard_core(lambda, 1)).unwrap() - closed).abs() < 1e-12);
    assert!(pressure_1d(&hard_core(1.0, 2)).is_err());

    let job = job(hard_core(1.0, 1), 0).with_schedule((2..=16).collect()).with_epsilon(1e-6);
    assert_eq!(job.decider, Decider::Local);
    let est = pressure_estimate(&job).unwrap();
    assert!(est.lower <= golden && golden <= est.upper, "{est:?}");
    assert!(est.width <= 1e-6);
}

#[test]
fn a_phi_examples() {
    let hc = hard_core(2.0, 2);
    let x = hc.underlying_sft().clone();
    let zero = PeriodicPoint::constant(&x, 0).unwrap();
    assert_eq!(a_phi_at(&hc, &zero, &Site::origin(2)).unwrap(), 0.0);
    let cell = Pattern::from_pairs(
        2,
        [(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 1)].map(|(a, b, l)| (Site::new(&[a, b]).unwrap(), l as Letter)),
    )
    .unwrap();
    let cb = PeriodicPoint::new(&x, vec![2, 2], cell).unwrap();
    let at = |c: &[i64]| a_phi_at(&hc, &cb, &Site::new(c).unwrap()).unwrap();
    assert!((at(&[0, 0]) - 2f64.ln()).abs() < 1e-15);
    assert_eq!(at(&[1, 0]), 0.0);
    let ising = phi("ising", &[("E", 0.3), ("J", 0.7), ("d", 1.0)]);
    let plus = PeriodicPoint::constant(ising.underlying_sft(), 1).unwrap();
    assert!((a_phi_at(&ising, &plus, &Site::origin(1)).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn conditional_bounds_match_brute_force() {
    let cases: Vec<(Interaction, u32)> = vec![
        (hard_core(1.0, 1), 2),
        (hard_core(2.5, 1), 4),
        (phi("ising", &[("E", 0.2), ("J", 0.5), ("d", 1.0)]), 3),
        (hard_core(1.0, 2), 2),
        (hard_core(1.7, 2), 3),
        (phi("ising", &[("E", 0.1), ("J", -0.4), ("d", 2.0)]), 2),
    ];
    for (phi, n) in cases {
        let x = phi.underlying_sft().clone();
        let adm = LocalSuffices::assume_ssf(x.clone());
        for letter in 0..2 {
            let Ok(z) = PeriodicPoint::constant(&x, letter) else { continue };
            let p = Site::origin(phi.dim());
            let got = conditional_bounds_at(&phi, &z, &p, n, &adm).unwrap();
            let (lo, hi, count) = brute_bounds(&phi, &z, &p, n, &adm);
            assert!((got.min - lo).abs() < 1e-12 && (got.max - hi).abs() < 1e-12, "{got:?} vs {lo} {hi}");
            assert_eq!(got.boundaries, count);
        }
    }
}

#[test]
fn conditional_bounds_on_a_nonconstant_orbit() {
    let hc = hard_core(1.3, 2);
    let x = hc.underlying_sft().clone();
    let cell = Pattern::from_pairs(2, [(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 0)].map(|(a, b, l)| (Site::new(&[a, b]).unwrap(), l as Letter)))
        .unwrap();
    let z = PeriodicPoint::new(&x, vec![2, 2], cell).unwrap();
    let adm = LocalSuffices::assume_ssf(x);
    for c in [[0, 0], [1, 0], [0, 1], [1, 1]] {
        let p = Site::new(&c).unwrap();
        let got = conditional_bounds_at(&hc, &z, &p, 2, &adm).unwrap();
        let (lo, hi, _) = brute_bounds(&hc, &z, &p, 2, &adm);
        assert!((got.min - lo).abs() < 1e-12 && (got.max - hi).abs() < 1e-12);
    }
}

#[test]
fn full_shift_is_exact() {
    for d in 1..=2 {
        let j = job(full_shift(d), 0);
        for n in 1..=3 {
            let b = pressure_bounds(&j, n).unwrap();
            assert!((b.per_site[0].min - 0.5).abs() < 1e-15 && (b.per_site[0].max - 0.5).abs() < 1e-15);
            assert!(b.contains(2f64.ln()));
            assert!(b.width() < 1e-14);
        }
    }
}

#[test]
fn hard_square_brackets() {
    let j = job(hard_core(1.0, 2), 0);
    let start = Instant::now();
    let brackets: Vec<BoundPair> = (3..=8).map(|n| pressure_bounds(&j, n).unwrap()).collect();
    let seconds = start.elapsed().as_secs_f64();
    for b in &brackets {
        assert!(b.contains(HARD_SQUARE_ENTROPY), "n={} [{}, {}]", b.n, b.lower, b.upper);
        assert_eq!(b.clamped, 0);
    }
    for w in brackets.windows(2) {
        assert!(w[1].width() <= w[0].width() + 1e-12);
    }
    let last = brackets.last().unwrap();
    assert!(last.width() <= 0.02, "{}", last.width());
    assert!(seconds < 600.0);
    // every locally admissible count bounds the entropy from above
    for t in friedland_upper_bounds(j.phi.underlying_sft(), 4).unwrap() {
        assert!(t >= last.upper, "{t} < {}", last.upper);
    }
}

#[test]
fn estimate_schedule_and_errors() {
    let j = job(hard_core(1.0, 2), 0).with_schedule(vec![2, 3, 4]).with_epsilon(1e-9);
    match pressure_estimate(&j) {
        Err(PressureError::NotConverged(est)) => {
            assert_eq!(est.n_used, 4);
            assert_eq!(est.trace.len(), 3);
            assert!(est.lower <= HARD_SQUARE_ENTROPY && HARD_SQUARE_ENTROPY <= est.upper);
            let best_lower = est.trace.iter().map(|b| b.lower).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(est.lower, best_lower);
        }
        other => panic!("expected NotConverged, got {other:?}"),
    }
    let j = job(hard_core(1.0, 2), 0).with_schedule(vec![2, 3, 4, 5, 6]).with_epsilon(0.05);
    let est = pressure_estimate(&j).unwrap();
    assert!(est.width <= 0.05 && est.n_used <= 6);

    let x = hard_core(1.0, 2).underlying_sft().clone();
    let z = PeriodicPoint::constant(&x, 0).unwrap();
    assert!(matches!(PressureJob::new(hard_core(1.0, 2), z.clone(), &[]), Err(PressureError::MissingCertificate)));
    let only_ssf = [MixingCertificate::checked(Property::Ssf)];
    assert!(matches!(PressureJob::new(hard_core(1.0, 2), z, &only_ssf), Err(PressureError::MissingCertificate)));
    assert!(matches!(pressure_bounds(&job(hard_core(1.0, 2), 0), 0), Err(PressureError::Invalid(_))));
}

#[test]
fn job_assumptions_and_deciders() {
    let j = job(hard_core(1.0, 2), 0);
    assert_eq!(j.tssm_gap, 2);
    assert!(j.assumptions.iter().any(|a| a.starts_with("TSSM gap 2 via")));
    assert!(j.assumptions.iter().any(|a| a.contains("full support via D-condition")));

    // no SSF certificate in the plane: the band decider
    let ice = phi("iceberg", &[("M", 2.0), ("d", 2.0)]);
    let x = ice.underlying_sft().clone();
    let plus = x.alphabet().index_of("+1").unwrap();
    let z = PeriodicPoint::constant(&x, plus).unwrap();
    let certs = [MixingCertificate::asserted(Property::Tssm { gap: 3 }), MixingCertificate::asserted(Property::StrongIrreducible { gap: 3 })];
    let j = PressureJob::new(ice, z, &certs).unwrap();
    assert_eq!(j.decider, Decider::Band { gap: 3 });
    assert!(j.assumptions[0].contains("user asserted"));
    let b2 = pressure_bounds(&j, 2).unwrap();
    let b3 = pressure_bounds(&j, 3).unwrap();
    assert!(b2.lower.max(b3.lower) <= b2.upper.min(b3.upper));
    for t in friedland_upper_bounds(j.phi.underlying_sft(), 2).unwrap() {
        assert!(b2.lower <= t && b3.lower <= t);
    }
    assert!(b3.lower > 0.0);

    // a one-dimensional shift without a safe symbol: exact line decider
    let c3 = phi("checkerboard", &[("k", 3.0), ("d", 1.0)]);
    let x = c3.underlying_sft().clone();
    let cell = Pattern::from_pairs(1, [(0, 0), (1, 1)].map(|(a, l)| (Site::new(&[a]).unwrap(), l as Letter))).unwrap();
    let z = PeriodicPoint::new(&x, vec![2], cell).unwrap();
    let certs = certificate_chain(&x).unwrap();
    let j = PressureJob::new(c3.clone(), z, &certs).unwrap();
    let exact = pressure_1d(&c3).unwrap();
    assert!((exact - 2f64.ln()).abs() < 1e-12);
    if j.decider == Decider::Line {
        let b = pressure_bounds(&j, 3).unwrap();
        assert!(b.contains(exact));
    } else {
        assert_eq!(j.decider, Decider::Local);
    }
}

#[test]
fn single_site_path_agrees_with_the_sweep() {
    for lambda in [1.0, 2.0, 0.4] {
        let hc = hard_core(lambda, 2);
        let j = job(hc.clone(), 0);
        let adm = LocalSuffices::assume_ssf(hc.underlying_sft().clone());
        for n in 1..=4 {
            let (lo, hi) = gamarnik_katz_bounds(&hc, 0, n, &adm).unwrap();
            let b = pressure_bounds(&j, n).unwrap();
            assert!((lo - b.lower).abs() < 1e-12 && (hi - b.upper).abs() < 1e-12, "λ={lambda} n={n}");
        }
    }
    let hc = hard_core(1.0, 1);
    let line = LineExact::new(hc.underlying_sft().clone()).unwrap();
    let (lo, hi) = gamarnik_katz_bounds(&hc, 0, 6, &line).unwrap();
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!(lo <= golden && golden <= hi);
}

#[test]
fn extreme_boundaries_reproduce_exactly() {
    let hc = hard_core(1.4, 2);
    let x = hc.underlying_sft().clone();
    let adm = LocalSuffices::assume_ssf(x.clone());
    let z = PeriodicPoint::constant(&x, 0).unwrap();
    let p = Site::origin(2);
    for n in 2..=5 {
        let cb = conditional_bounds_at(&hc, &z, &p, n, &adm).unwrap();
        assert_eq!(conditional_at_boundary(&hc, &z, &p, n, &cb.argmin).unwrap().to_bits(), cb.min.to_bits());
        assert_eq!(conditional_at_boundary(&hc, &z, &p, n, &cb.argmax).unwrap().to_bits(), cb.max.to_bits());
    }
    let wrong = Pattern::single(Site::new(&[9, 9]).unwrap(), 0);
    assert!(conditional_at_boundary(&hc, &z, &p, 2, &wrong).is_err());
}

/// Smallest `Λ^δ_W(w)` over every nonempty `W ⊆ T`, every boundary on
/// `∂W` accepted by `adm`, and every fill of positive weight.
fn brute_dmu(phi: &Interaction, t: &Shape, adm: &dyn Admissibility) -> f64 {
    let k = phi.alphabet_size() as u64;
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << t.len()) {
        let w_shape = Shape::from_sites(phi.dim(), t.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone())).unwrap();
        let bd = w_shape.boundary().unwrap();
        for dcode in 0..k.pow(bd.len() as u32) {
            let delta = Pattern::new(bd.clone(), decode(dcode, k, bd.len())).unwrap();
            if !adm.is_admissible(&delta) {
                continue;
            }
            let weights: Vec<f64> = (0..k.pow(w_shape.len() as u32))
                .filter_map(|c| log_weight(phi, &Pattern::new(w_shape.clone(), decode(c, k, w_shape.len())).unwrap(), &delta))
                .map(f64::exp)
                .collect();
            let z: f64 = weights.iter().sum();
            for w in weights {
                best = best.min(w / z);
            }
        }
    }
    best
}

#[test]
fn dmu_examples_and_oracle() {
    let origin = Shape::singleton(Site::origin(2));
    let full = full_shift(2);
    let d = dmu_min(&full, &origin, &LocalSuffices::assume_ssf(full.underlying_sft().clone())).unwrap();
    assert!((d.value - 0.5).abs() < 1e-15);
    let hc = hard_core(1.0, 2);
    let adm = LocalSuffices::assume_ssf(hc.underlying_sft().clone());
    let d = dmu_min(&hc, &origin, &adm).unwrap();
    assert!((d.value - 0.5).abs() < 1e-15);
    assert!(d.boundary.values().iter().all(|&a| a == 0));

    let two = Shape::from_coords(2, &[&[0, 0], &[1, 0]]).unwrap();
    let ell = Shape::from_coords(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
    for lambda in [0.5, 1.0, 3.0] {
        let hc = hard_core(lambda, 2);
        let adm = LocalSuffices::assume_ssf(hc.underlying_sft().clone());
        for t in [&origin, &two, &ell] {
            let got = dmu_min(&hc, t, &adm).unwrap().value;
            let want = brute_dmu(&hc, t, &adm);
            assert!((got - want).abs() < 1e-13 * want, "λ={lambda} |T|={}: {got} vs {want}", t.len());
        }
        let single = dmu_min(&hc, &origin, &adm).unwrap().value;
        assert!((single - lambda.min(1.0) / (1.0 + lambda)).abs() < 1e-15);
    }
    let ising = phi("ising", &[("E", 0.3), ("J", 0.4), ("d", 2.0)]);
    let adm = LocalSuffices::assume_ssf(ising.underlying_sft().clone());
    for t in [&origin, &two] {
        let got = dmu_min(&ising, t, &adm).unwrap().value;
        assert!((got - brute_dmu(&ising, t, &adm)).abs() < 1e-13);
    }
    assert!(dmu_min(&hc, &Shape::empty(2), &adm).is_err());
    assert!(dmu_min(&hc, &block(3, 2).unwrap(), &adm).is_err());
}

#[test]
fn cmu_bounds_sampled_conditionals() {
    for lambda in [0.5, 1.0, 3.0] {
        let hc = hard_core(lambda, 2);
        let x = hc.underlying_sft().clone();
        let adm = LocalSuffices::assume_ssf(x.clone());
        let rh = cmu_lower_bound(&hc, 2, CmuForm::Rhomboid, &adm).unwrap();
        let bl = cmu_lower_bound(&hc, 1, CmuForm::Block, &adm).unwrap();
        assert!((rh.log_value - (rh.dmu.log_value - 8.0 * 2f64.ln())).abs() < 1e-12);
        assert!((bl.log_value - (bl.dmu.log_value - 12.0 * 2f64.ln())).abs() < 1e-12);
        assert_eq!(rh.dmu.boundary.shape(), &rhomboid(2, 2).unwrap().boundary().unwrap());
        let z = PeriodicPoint::constant(&x, 0).unwrap();
        // 100 conditionals given random past-like patterns
        let mut seen = 0;
        for seed in 0..100u64 {
            let n = 1 + (seed % 4) as u32;
            let hr = half_rhomboid(n, 2).unwrap();
            let past = random_admissible(&x, &hr.s, &z, 2, seed).unwrap().unwrap();
            let region = hr.w.union(&hr.v).unwrap();
            let fill = random_admissible(&x, &region, &z, 2, seed ^ 0xfeed).unwrap().unwrap();
            let delta = fill.restrict(&hr.v);
            let boundary = past.union(&delta).unwrap();
            if !adm.is_admissible(&boundary) {
                continue;
            }
            for a in 0..2 {
                let target = Pattern::single(Site::origin(2), a);
                if !adm.is_admissible(&boundary.union(&target).unwrap()) {
                    continue;
                }
                let c = nnsft_gibbs::transfer_conditional(&hc, &hr.w, &boundary, &target).unwrap();
                assert!(c >= rh.value && c >= bl.value, "λ={lambda} seed={seed}");
                seen += 1;
            }
        }
        assert!(seen >= 100);
        assert!(cmu_lower_bound(&hard_core(1.0, 1), 1, CmuForm::Rhomboid, &LineExact::new(hard_core(1.0, 1).underlying_sft().clone()).unwrap()).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Brackets at every truncation contain the exact one-dimensional pressure.
    #[test]
    fn brackets_contain_exact_1d_pressure(lambda in 0.2f64..5.0, n in 1u32..7) {
        let hc = hard_core(lambda, 1);
        let exact = pressure_1d(&hc).unwrap();
        let b = pressure_bounds(&job(hc, 0), n).unwrap();
        prop_assert!(b.contains(exact), "[{}, {}] vs {}", b.lower, b.upper, exact);
    }

    #[test]
    fn ising_brackets_contain_exact_1d_pressure(e in -1.0f64..1.0, j in -1.0f64..1.0, n in 1u32..6) {
        let ising = phi("ising", &[("E", e), ("J", j), ("d", 1.0)]);
        let exact = pressure_1d(&ising).unwrap();
        let b = pressure_bounds(&job(ising, 1), n).unwrap();
        prop_assert!(b.contains(exact));
    }
}
