#![allow(dead_code)]

use std::collections::BTreeMap;

use nnsft_core::{Letter, Nnsft, Pattern, Site};
use nnsft_gibbs::model;

pub fn sft(name: &str, params: &[(&str, f64)]) -> Nnsft {
    let p: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    model(name, &p).unwrap().underlying_sft().clone()
}

pub fn hard_core(d: usize) -> Nnsft {
    sft("hard_core", &[("lambda", 1.0), ("d", d as f64)])
}

pub fn colourings(k: usize, d: usize) -> Nnsft {
    sft("checkerboard", &[("k", k as f64), ("d", d as f64)])
}

pub fn iceberg(m: usize, d: usize) -> Nnsft {
    sft("iceberg", &[("M", m as f64), ("d", d as f64)])
}

pub fn lipschitz(g: usize, d: usize) -> Nnsft {
    sft("lipschitz", &[("g", g as f64), ("d", d as f64)])
}

pub fn site(c: &[i64]) -> Site {
    Site::new(c).unwrap()
}

pub fn pat(d: usize, entries: &[(&[i64], Letter)]) -> Pattern {
    Pattern::from_pairs(d, entries.iter().map(|(c, a)| (site(c), *a))).unwrap()
}

pub fn label(x: &Nnsft, a: Letter) -> &str {
    x.alphabet().label(a)
}

/// Walks every lettering of the `2d` neighbours of the origin and lists,
/// for each, the centre letters that fit. Independent of the sweep over
/// masks used by the library.
pub fn brute_centre_options(x: &Nnsft) -> Vec<Vec<Letter>> {
    let d = x.dim();
    let k = x.alphabet_size() as u64;
    let nbrs: Vec<(usize, i32)> = (0..d).flat_map(|a| [(a, 1), (a, -1)]).collect();
    let mut out = Vec::new();
    for code in 0..k.pow(nbrs.len() as u32) {
        let mut c = code;
        let eta: Vec<Letter> = nbrs
            .iter()
            .map(|_| {
                let v = (c % k) as Letter;
                c /= k;
                v
            })
            .collect();
        let fits = (0..k as Letter)
            .filter(|&a| {
                nbrs.iter().zip(&eta).all(|(&(axis, sign), &b)| if sign > 0 { x.allows(axis, a, b) } else { x.allows(axis, b, a) })
            })
            .collect();
        out.push(fits);
    }
    out
}
