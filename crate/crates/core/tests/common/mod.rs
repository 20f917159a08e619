#![allow(dead_code)]

use nnsft_core::{Alphabet, Nnsft, Pattern, Shape, Site};

pub fn hard_square(d: usize) -> Nnsft {
    Nnsft::from_fn(Alphabet::numbered(2).unwrap(), d, |_, a, b| !(a == 1 && b == 1)).unwrap()
}

/// Proper colourings with `k` colours labelled 1..=k.
pub fn colourings(k: usize, d: usize) -> Nnsft {
    Nnsft::from_fn(Alphabet::new((1..=k).map(|i| i.to_string())).unwrap(), d, |_, a, b| a != b).unwrap()
}

/// Letters -M..-1, +1..+M; neighbours need product at least -1.
pub fn iceberg(m: i64, d: usize) -> Nnsft {
    let vals: Vec<i64> = (-m..=-1).chain(1..=m).collect();
    let labels: Vec<String> = vals.iter().map(|v| format!("{v:+}")).collect();
    Nnsft::from_fn(Alphabet::new(labels).unwrap(), d, |_, a, b| vals[a as usize] * vals[b as usize] >= -1).unwrap()
}

/// Height functions 0..=g with neighbours differing by at most one.
pub fn lipschitz(g: usize, d: usize) -> Nnsft {
    Nnsft::from_fn(Alphabet::numbered(g + 1).unwrap(), d, |_, a, b| (a as i32 - b as i32).abs() <= 1).unwrap()
}

pub fn site(c: &[i64]) -> Site {
    Site::new(c).unwrap()
}

pub fn pat(d: usize, entries: &[(&[i64], u8)]) -> Pattern {
    Pattern::from_pairs(d, entries.iter().map(|(c, a)| (site(c), *a))).unwrap()
}

/// Independent local-admissibility check used by oracles: walks every
/// ordered pair of sites.
pub fn brute_locally_admissible(x: &Nnsft, p: &Pattern) -> bool {
    for (s, a) in p.iter() {
        for (t, b) in p.iter() {
            let diff: Vec<i64> = s.coords().iter().zip(t.coords()).map(|(u, v)| *v as i64 - *u as i64).collect();
            let nz: Vec<usize> = (0..diff.len()).filter(|&i| diff[i] != 0).collect();
            if nz.len() == 1 && diff[nz[0]] == 1 && !x.allows(nz[0], a, b) {
                return false;
            }
        }
    }
    true
}

/// Counts all fills of `shape` by brute force (|A|^|shape| assignments).
pub fn brute_count(x: &Nnsft, shape: &Shape) -> u64 {
    let k = x.alphabet_size() as u64;
    let n = shape.len() as u32;
    let mut count = 0;
    for code in 0..k.pow(n) {
        let mut c = code;
        let vals: Vec<u8> = (0..n)
            .map(|_| {
                let v = (c % k) as u8;
                c /= k;
                v
            })
            .collect();
        let p = Pattern::new(shape.clone(), vals).unwrap();
        if brute_locally_admissible(x, &p) {
            count += 1;
        }
    }
    count
}
