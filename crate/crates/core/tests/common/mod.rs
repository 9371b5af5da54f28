//! Slow, obviously-correct reference implementations and fixtures shared by
//! the integration tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sodesign::search::{enumerate_so_codes, DesignSearchSpec, EnumerationOptions};
use sodesign::{BitMatrix, BitVector, CanonicalForm, Design, LinearCode};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn code(rows: &[&str]) -> LinearCode {
    LinearCode::from_rows(&BitMatrix::parse_rows(rows).unwrap())
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
    let rows = (0..rows)
        .map(|_| BitVector::from_bits((0..cols).map(|_| rng.gen_bool(0.5))))
        .collect();
    BitMatrix::from_rows(cols, rows).unwrap()
}

/// A random self-orthogonal code of length `n` and dimension at most
/// `max_k`, grown one random even word of the current dual at a time.
pub fn random_so_code(rng: &mut impl Rng, n: usize, max_k: usize) -> LinearCode {
    let target = rng.gen_range(0..=max_k.min(n / 2));
    let mut c = LinearCode::zero(n);
    while c.dimension() < target {
        let dual = c.dual();
        let mut x = BitVector::zeros(n);
        for row in dual.generator().row_vectors() {
            if rng.gen_bool(0.5) {
                x.xor_assign(row);
            }
        }
        if x.weight() % 2 == 1 || c.contains(&x) {
            continue;
        }
        let mut rows = c.generator().clone();
        rows.push_row(x).unwrap();
        c = LinearCode::from_rows(&rows);
    }
    c
}

/// Every permutation of `0..n`, by Heap's algorithm.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut out = vec![p.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Equivalence by trying every coordinate permutation.
pub fn brute_force_equivalent(a: &LinearCode, b: &LinearCode, perms: &[Vec<usize>]) -> bool {
    a.length() == b.length()
        && a.dimension() == b.dimension()
        && perms.iter().any(|p| a.permuted(p) == *b)
}

/// Every `(ones coordinate, sorted rows)` witness, found by running through
/// the `v`-subsets of row-weight codewords in index order. A subset is
/// abandoned as soon as two of its rows meet in the wrong number of
/// coordinates, which no incidence matrix allows; completed subsets are
/// judged by `Design::validate` alone.
pub fn naive_witnesses(c: &LinearCode, spec: &DesignSearchSpec) -> Vec<(Option<usize>, Vec<u64>)> {
    let n = c.length();
    let words: Vec<u64> = c
        .codeword_words(24)
        .unwrap()
        .into_iter()
        .filter(|w| w.count_ones() as usize == spec.row_weight())
        .collect();
    let meet = spec.row_intersection() as u32;
    let mut out = Vec::new();
    let mut chosen: Vec<u64> = Vec::new();
    subsets(
        &words,
        0,
        spec.params.v,
        meet,
        &mut chosen,
        &mut |rows: &[u64]| {
            let common = rows.iter().fold(u64::MAX >> (64 - n), |acc, w| acc & w);
            let choices: Vec<Option<usize>> = if spec.augmented {
                (0..n).filter(|j| common >> j & 1 == 1).map(Some).collect()
            } else {
                vec![None]
            };
            for ones in choices {
                if witness_design(n, ones, rows, spec).is_some() {
                    let mut sorted = rows.to_vec();
                    sorted.sort_unstable();
                    out.push((ones, sorted));
                }
            }
        },
    );
    out.sort();
    out
}

/// The design whose rows are `rows` with the ones coordinate dropped, if
/// those rows form one.
pub fn witness_design(
    n: usize,
    ones: Option<usize>,
    rows: &[u64],
    spec: &DesignSearchSpec,
) -> Option<Design> {
    let columns: Vec<usize> = (0..n).filter(|&j| Some(j) != ones).collect();
    let m = BitMatrix::from_rows(
        columns.len(),
        rows.iter()
            .map(|&w| BitVector::from_bits(columns.iter().map(|&j| w >> j & 1 == 1)))
            .collect(),
    )
    .unwrap();
    let p = &spec.params;
    Design::validate(m, p.v, p.block_size, p.lambda).ok()
}

/// Fingerprints of the designs behind the naive witnesses.
pub fn naive_classes(c: &LinearCode, spec: &DesignSearchSpec) -> BTreeSet<CanonicalForm> {
    naive_witnesses(c, spec)
        .into_iter()
        .map(|(ones, rows)| {
            witness_design(c.length(), ones, &rows, spec)
                .unwrap()
                .canonical_form()
        })
        .collect()
}

/// Fingerprints returned by the library's class search.
pub fn library_classes(c: &LinearCode, spec: &DesignSearchSpec) -> BTreeSet<CanonicalForm> {
    sodesign::search::find_designs(c, spec)
        .unwrap()
        .into_iter()
        .map(|f| f.fingerprint)
        .collect()
}

fn subsets(
    words: &[u64],
    from: usize,
    size: usize,
    meet: u32,
    chosen: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]),
) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    for i in from..words.len() {
        if words.len() - i < size - chosen.len() {
            return;
        }
        let w = words[i];
        if chosen.iter().all(|&x| (x & w).count_ones() == meet) {
            chosen.push(w);
            subsets(words, i + 1, size, meet, chosen, visit);
            chosen.pop();
        }
    }
}

/// Witnesses from the library in the same shape as [`naive_witnesses`].
pub fn library_witnesses(
    c: &LinearCode,
    spec: &DesignSearchSpec,
) -> Vec<(Option<usize>, Vec<u64>)> {
    let mut out: Vec<(Option<usize>, Vec<u64>)> = sodesign::search::find_witnesses(c, spec)
        .unwrap()
        .into_iter()
        .map(|w| {
            let mut rows: Vec<u64> = w.row_words.iter().map(|r| r.as_word().unwrap()).collect();
            rows.sort_unstable();
            (w.ones_coordinate, rows)
        })
        .collect();
    out.sort();
    out
}

/// Self-orthogonal class representatives of length `n` for every dimension
/// from 1 to `max_k`.
pub fn so_classes(n: usize, max_k: usize) -> Vec<LinearCode> {
    (1..=max_k)
        .flat_map(|k| enumerate_so_codes(&EnumerationOptions::new(n, k)).unwrap())
        .map(|e| e.code)
        .collect()
}

/// The distinct designs among `designs`, keyed by fingerprint.
pub fn distinct(designs: impl IntoIterator<Item = Design>) -> BTreeMap<CanonicalForm, Design> {
    let mut out = BTreeMap::new();
    for d in designs {
        out.entry(d.canonical_form()).or_insert(d);
    }
    out
}
