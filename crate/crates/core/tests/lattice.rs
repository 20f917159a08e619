use nnsft_core::lattice::{block, cuboid, dist, half_rhomboid, in_past, lex_past, rhomboid, Distance, Shape, Site, COORD_LIMIT};
use nnsft_core::LatticeError;
use proptest::prelude::*;

fn site(c: &[i64]) -> Site {
    Site::new(c).unwrap()
}

fn shape(d: usize, cs: &[&[i64]]) -> Shape {
    Shape::from_coords(d, cs).unwrap()
}

#[test]
fn distance_examples() {
    let a = shape(2, &[&[0, 0]]);
    assert_eq!(dist(&a, &shape(2, &[&[2, 3]])).unwrap(), Distance::Finite(5));
    assert_eq!(dist(&a, &Shape::empty(2)).unwrap(), Distance::Infinite);
    assert_eq!(dist(&Shape::empty(2), &a).unwrap(), Distance::Infinite);
    let b = shape(2, &[&[0, 0], &[5, 5]]);
    assert_eq!(dist(&b, &shape(2, &[&[1, 0]])).unwrap(), Distance::Finite(1));
    assert!(matches!(dist(&a, &shape(1, &[&[0]])), Err(LatticeError::DimensionMismatch(2, 1))));
}

#[test]
fn neighbourhoods() {
    let o = Shape::singleton(Site::origin(2));
    let b = o.boundary().unwrap();
    assert_eq!(b, shape(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
    assert_eq!(o.n_neighbourhood(0).unwrap(), o);
    // |∂R_{n-1}| = 4n in the plane
    for n in 1..6u32 {
        assert_eq!(rhomboid(n - 1, 2).unwrap().boundary().unwrap().len(), 4 * n as usize);
    }
    assert_eq!(rhomboid(2, 2).unwrap().boundary().unwrap().len(), 12);
}

#[test]
fn blocks_and_rhomboids() {
    assert_eq!(block(1, 2).unwrap().len(), 9);
    assert_eq!(rhomboid(2, 2).unwrap().len(), 13);
    assert_eq!(rhomboid(0, 3).unwrap(), Shape::singleton(Site::origin(3)));
    for n in 0..=20u32 {
        let direct = (-(n as i64)..=n as i64)
            .flat_map(|x| (-(n as i64)..=n as i64).map(move |y| (x, y)))
            .filter(|(x, y)| x.abs() + y.abs() <= n as i64)
            .count();
        let r = rhomboid(n, 2).unwrap();
        assert_eq!(r.len(), direct);
        assert_eq!(r.len() as u64, 2 * (n as u64).pow(2) + 2 * n as u64 + 1);
    }
    for d in 1..=3 {
        for n in 0..3u32 {
            assert_eq!(block(n, d).unwrap().len(), (2 * n as usize + 1).pow(d as u32));
        }
    }
}

#[test]
fn lexicographic_past() {
    assert_eq!(lex_past(1, 1).unwrap(), shape(1, &[&[-1]]));
    assert_eq!(lex_past(1, 2).unwrap(), shape(2, &[&[-1, -1], &[-1, 0], &[-1, 1], &[0, -1]]));
    for d in 1..=3 {
        for n in 0..4u32 {
            let p = lex_past(n, d).unwrap();
            assert!(!p.contains(&Site::origin(d)));
            // trichotomy: P ∪ {0} ∪ -P = B_n, disjointly
            let neg = Shape::from_sites(d, p.iter().map(|s| s.negate())).unwrap();
            assert!(p.is_disjoint(&neg));
            let all = p.union(&neg).unwrap().union(&Shape::singleton(Site::origin(d))).unwrap();
            assert_eq!(all, block(n, d).unwrap());
        }
    }
}

#[test]
fn half_rhomboid_examples() {
    let h = half_rhomboid(2, 1).unwrap();
    assert_eq!(h.w, shape(1, &[&[0], &[1], &[2]]));
    assert_eq!(h.s, shape(1, &[&[-1]]));
    assert_eq!(h.v, shape(1, &[&[3]]));
    for n in 1..=8u32 {
        let h = half_rhomboid(n, 2).unwrap();
        assert!(h.w.contains(&Site::origin(2)));
        let bd = h.w.boundary().unwrap();
        assert!(h.s.is_disjoint(&h.v));
        assert_eq!(h.s.union(&h.v).unwrap(), bd);
        assert!(h.s.iter().all(in_past));
        assert!(h.v.iter().all(|p| !in_past(p)));
        assert_eq!(h.v.len(), 2 * n as usize + 2);
        assert!(h.v.iter().all(|p| p.norm() == n as u64 + 1));
    }
    assert!(matches!(half_rhomboid(2, 3), Err(LatticeError::UnsupportedDimension(3))));
}

#[test]
fn overflow_is_rejected() {
    assert!(Site::new(&[COORD_LIMIT + 1]).is_err());
    let edge = site(&[COORD_LIMIT, 0]);
    assert!(matches!(edge.step(0, 1), Err(LatticeError::Overflow(_))));
    assert!(Shape::singleton(edge).n_neighbourhood(1).is_err());
}

#[test]
fn cuboid_counts() {
    assert_eq!(cuboid(&[1, 1], &[2, 3]).unwrap().len(), 6);
    assert!(cuboid(&[1], &[0]).unwrap().is_empty());
}

fn small_shape() -> impl Strategy<Value = Shape> {
    prop::collection::vec((-4i64..=4, -4i64..=4), 0..8)
        .prop_map(|v| Shape::from_sites(2, v.into_iter().map(|(x, y)| site(&[x, y]))).unwrap())
}

proptest! {
    #[test]
    fn boundary_is_disjoint_and_completes(s in small_shape(), n in 0u32..4) {
        let nb = s.n_neighbourhood(n).unwrap();
        let bd = s.n_boundary(n).unwrap();
        prop_assert!(bd.is_disjoint(&s));
        prop_assert_eq!(s.union(&bd).unwrap(), nb.clone());
        for p in nb.iter() {
            let d = dist(&Shape::singleton(p.clone()), &s).unwrap();
            prop_assert!(d <= Distance::Finite(n as u64));
        }
    }

    #[test]
    fn distance_symmetry(a in small_shape(), b in small_shape()) {
        let ab = dist(&a, &b).unwrap();
        prop_assert_eq!(ab, dist(&b, &a).unwrap());
        if !a.is_empty() && !b.is_empty() {
            prop_assert_eq!(ab == Distance::Finite(0), !a.is_disjoint(&b));
        }
    }

    #[test]
    fn set_operations_are_exact(a in small_shape(), b in small_shape()) {
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        let d = a.difference(&b).unwrap();
        prop_assert_eq!(u.len(), a.len() + b.len() - i.len());
        prop_assert_eq!(d.len() + i.len(), a.len());
        prop_assert!(d.is_disjoint(&b));
    }
}
