//! Searches connecting designs and codes: designs embedded in a code,
//! subcode embedding, isomorph-free code enumeration, the closure loop and
//! an exhaustive design generator.

mod closure;
mod embed;
mod enumerate;
mod generate;

pub use closure::{closure, closure_targets, Closure, ClosureEdge};
pub use embed::{find_embedding, is_embedded};
pub use enumerate::{enumerate_so_codes, EnumeratedCode, EnumerationOptions};
pub use generate::{enumerate_designs, find_one_design};

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::canon::{code_canonical_and_automorphisms, CanonicalForm};
use crate::design::{Design, DesignParams};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, SPAN_GUARD};
use crate::lincode::LinearCode;

/// Target design parameters plus whether the rows carry an all-ones coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignSearchSpec {
    pub params: DesignParams,
    pub augmented: bool,
}

impl DesignSearchSpec {
    pub fn new(v: usize, block_size: usize, lambda: usize, augmented: bool) -> Result<Self> {
        Ok(DesignSearchSpec {
            params: DesignParams::derive(v, block_size, lambda)?,
            augmented,
        })
    }

    /// Augmented exactly when that makes the point code self-orthogonal.
    pub fn for_params(params: DesignParams) -> Self {
        DesignSearchSpec {
            params,
            augmented: params.self_orthogonal_point_code()
                == Some(crate::design::PointCode::Augmented),
        }
    }

    pub fn code_length(&self) -> usize {
        self.params.b + usize::from(self.augmented)
    }

    pub fn row_weight(&self) -> usize {
        self.params.r + usize::from(self.augmented)
    }

    pub fn row_intersection(&self) -> usize {
        self.params.lambda + usize::from(self.augmented)
    }
}

/// `v` codewords forming an (augmented) incidence matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub row_words: Vec<BitVector>,
    /// Coordinate where every chosen word is 1, in the augmented case.
    pub ones_coordinate: Option<usize>,
    /// Design block `t` is code coordinate `column_order[t]`.
    pub column_order: Vec<usize>,
}

impl EmbeddingWitness {
    pub fn incidence(&self) -> BitMatrix {
        let rows = self
            .row_words
            .iter()
            .map(|w| BitVector::from_bits(self.column_order.iter().map(|&c| w.get(c))))
            .collect();
        BitMatrix::from_rows(self.column_order.len(), rows).expect("uniform row length")
    }

    pub fn design(&self, spec: &DesignSearchSpec) -> Result<Design> {
        let p = &spec.params;
        Design::validate(self.incidence(), p.v, p.block_size, p.lambda)
    }
}

/// A design found in a code, with its fingerprint and one witness.
#[derive(Clone, Debug)]
pub struct FoundDesign {
    pub fingerprint: CanonicalForm,
    pub design: Design,
    pub witness: EmbeddingWitness,
}

/// Necessary conditions for a code to hold a design: distance at least 4,
/// no zero coordinate and at least `v` words of the row weight.
pub fn prefilter(c: &LinearCode, spec: &DesignSearchSpec) -> Result<bool> {
    if c.min_distance()? < 4 || c.has_zero_coordinate() {
        return Ok(false);
    }
    let w = c.weight_distribution()?.get(spec.row_weight());
    Ok(w >= spec.params.v as u64)
}

/// All non-isomorphic designs whose (augmented) incidence matrix rows are
/// codewords of `c`, sorted by fingerprint.
///
/// A witness is seeded by a flag: its ones coordinate (if any) together with
/// one of its rows. Flags fall into orbits under the known automorphisms of
/// `c`, and every witness is carried by some automorphism onto a witness that
/// contains the representative of its earliest flag orbit and no row from an
/// earlier orbit. So one search per orbit representative, with the rows of
/// earlier orbits removed, meets every class. The same step is repeated for
/// further rows under the stabilizer of the rows already fixed, for as long
/// as that stabilizer stays large.
pub fn find_designs(c: &LinearCode, spec: &DesignSearchSpec) -> Result<Vec<FoundDesign>> {
    check_length(c, spec)?;
    let n = c.length();
    let words = row_words(c, spec)?;
    if words.len() < spec.params.v {
        return Ok(Vec::new());
    }
    let (form, automorphisms) = code_canonical_and_automorphisms(c, None)?;
    let group = (form.automorphism_order() <= GROUP_ELEMENT_LIMIT as u128)
        .then(|| group_elements(n, &automorphisms));
    let flags = flag_orbits(n, &words, spec.augmented, &automorphisms);
    let meet = spec.row_intersection() as u32;
    let per_seed: Vec<BTreeMap<CanonicalForm, FoundDesign>> = (0..flags.seeds.len())
        .into_par_iter()
        .map(|s| {
            let (ones, seed) = flags.seeds[s];
            let seed = words[seed];
            let mut rows = vec![seed];
            rows.extend(
                flags
                    .members(ones)
                    .filter(|&(w, orbit)| {
                        orbit >= s && w != seed && (w & seed).count_ones() == meet
                    })
                    .map(|(w, _)| w),
            );
            let stabilizer: Option<Vec<Perm>> = group.as_ref().map(|g| {
                g.iter()
                    .filter(|p| {
                        ones.is_none_or(|j| p[j] as usize == j) && permute_word(seed, p) == seed
                    })
                    .cloned()
                    .collect()
            });
            let tables = RowTables::new(n, rows, ones, spec);
            let mut pool = RowSet::full(tables.words.len());
            pool.remove(0);
            let seeded = Seeded {
                tables: &tables,
                spec,
                index: tables
                    .words
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| (w, i))
                    .collect(),
            };
            seeded.explore(vec![0], pool, stabilizer)
        })
        .collect::<Result<_>>()?;
    let mut unique: BTreeMap<CanonicalForm, FoundDesign> = BTreeMap::new();
    for classes in per_seed {
        for (fp, f) in classes {
            unique.entry(fp).or_insert(f);
        }
    }
    Ok(unique.into_values().collect())
}

/// Every labeled embedding: each set of `v` codewords (sharing a ones
/// coordinate when augmented) that forms an incidence matrix.
pub fn find_witnesses(c: &LinearCode, spec: &DesignSearchSpec) -> Result<Vec<EmbeddingWitness>> {
    check_length(c, spec)?;
    let n = c.length();
    let words = row_words(c, spec)?;
    let choices: Vec<Option<usize>> = if spec.augmented {
        (0..n).map(Some).collect()
    } else {
        vec![None]
    };
    let per_choice: Vec<Vec<EmbeddingWitness>> = choices
        .into_par_iter()
        .map(|ones| {
            let rows: Vec<u64> = words
                .iter()
                .copied()
                .filter(|w| ones.is_none_or(|j| w >> j & 1 == 1))
                .collect();
            let tables = RowTables::new(n, rows, ones, spec);
            let mut out = Vec::new();
            let pool = RowSet::full(tables.words.len());
            tables.search(&[], pool, &mut |w| out.push(w));
            out
        })
        .collect();
    Ok(per_choice.into_iter().flatten().collect())
}

fn check_length(c: &LinearCode, spec: &DesignSearchSpec) -> Result<()> {
    let n = c.length();
    if n != spec.code_length() {
        return Err(Error::Dimension {
            expected: spec.code_length(),
            found: n,
        });
    }
    if n > 64 {
        return Err(Error::Dimension {
            expected: 64,
            found: n,
        });
    }
    Ok(())
}

fn row_words(c: &LinearCode, spec: &DesignSearchSpec) -> Result<Vec<u64>> {
    let weight = spec.row_weight() as u32;
    Ok(c.codeword_words(SPAN_GUARD)?
        .into_iter()
        .filter(|w| w.count_ones() == weight)
        .collect())
}

/// Groups larger than this are used through their generators only, for the
/// first row.
const GROUP_ELEMENT_LIMIT: usize = 1 << 16;

type Perm = Vec<u8>;

/// Every element of the group generated by `generators`.
fn group_elements(n: usize, generators: &[Vec<usize>]) -> Vec<Perm> {
    let gens: Vec<Perm> = generators
        .iter()
        .map(|g| g.iter().map(|&x| x as u8).collect())
        .collect();
    let identity: Perm = (0..n as u8).collect();
    let mut seen: HashSet<Perm> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut i = 0;
    while i < elements.len() {
        for g in &gens {
            let next: Perm = elements[i].iter().map(|&x| g[x as usize]).collect();
            if seen.insert(next.clone()) {
                elements.push(next);
            }
        }
        i += 1;
    }
    elements
}

/// Below this stabilizer size, splitting off one more row per orbit costs
/// more than the duplicate witnesses it saves.
const SPLIT_STABILIZER_MIN: usize = 16;

/// Designs reachable from one seed flag, split further by symmetry.
struct Seeded<'a> {
    tables: &'a RowTables,
    spec: &'a DesignSearchSpec,
    index: HashMap<u64, usize>,
}

impl Seeded<'_> {
    /// Fixes one more row per orbit of `stabilizer` on `pool` while the
    /// stabilizer is large, then searches what remains.
    fn explore(
        &self,
        prefix: Vec<usize>,
        pool: RowSet,
        stabilizer: Option<Vec<Perm>>,
    ) -> Result<BTreeMap<CanonicalForm, FoundDesign>> {
        let stabilizer = match stabilizer {
            Some(h)
                if h.len() >= SPLIT_STABILIZER_MIN
                    && prefix.len() < self.spec.params.v
                    && pool.len() > 0 =>
            {
                h
            }
            _ => return self.finish(&prefix, pool),
        };
        let words = &self.tables.words;
        let members: Vec<usize> = pool.iter().collect();
        let mut parent: Vec<usize> = (0..words.len()).collect();
        for p in &stabilizer {
            for &i in &members {
                let j = self.index[&permute_word(words[i], p)];
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let orbit: Vec<usize> = (0..words.len()).map(|i| root(&mut parent, i)).collect();
        let reps: Vec<usize> = members.iter().copied().filter(|&i| orbit[i] == i).collect();
        let parts: Vec<BTreeMap<CanonicalForm, FoundDesign>> = reps
            .par_iter()
            .map(|&rep| {
                let mut next = pool.meet(&self.tables.compatible[rep]);
                for &i in &members {
                    if orbit[i] < rep {
                        next.remove(i);
                    }
                }
                let next_stabilizer: Vec<Perm> = stabilizer
                    .iter()
                    .filter(|p| permute_word(words[rep], p) == words[rep])
                    .cloned()
                    .collect();
                let mut prefix = prefix.clone();
                prefix.push(rep);
                self.explore(prefix, next, Some(next_stabilizer))
            })
            .collect::<Result<_>>()?;
        let mut merged = BTreeMap::new();
        for part in parts {
            for (fp, f) in part {
                merged.entry(fp).or_insert(f);
            }
        }
        Ok(merged)
    }

    fn finish(
        &self,
        prefix: &[usize],
        pool: RowSet,
    ) -> Result<BTreeMap<CanonicalForm, FoundDesign>> {
        let spec = self.spec;
        let mut classes: BTreeMap<CanonicalForm, FoundDesign> = BTreeMap::new();
        let mut failure = None;
        self.tables.search(prefix, pool, &mut |witness| {
            if failure.is_some() {
                return;
            }
            let design = match witness.design(spec) {
                Ok(d) => d,
                Err(e) => {
                    failure = Some(Error::InvalidDesign(format!(
                        "search produced an invalid witness: {e}"
                    )));
                    return;
                }
            };
            let fingerprint = design.canonical_form();
            classes.entry(fingerprint.clone()).or_insert(FoundDesign {
                fingerprint,
                design,
                witness,
            });
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(classes),
        }
    }
}

/// Orbits of flags `(ones coordinate, row word)` under a permutation group.
/// Orbits are numbered by their least flag; `seeds[i]` is that flag of
/// orbit `i`, with the word given as an index into the row words.
struct FlagOrbits<'a> {
    words: &'a [u64],
    /// Per ones choice, the orbit number of each word (or `None` when the
    /// word misses the ones coordinate).
    orbit: Vec<(Option<usize>, Vec<Option<usize>>)>,
    seeds: Vec<(Option<usize>, usize)>,
}

impl FlagOrbits<'_> {
    fn members(&self, ones: Option<usize>) -> impl Iterator<Item = (u64, usize)> + '_ {
        let (_, orbits) = self
            .orbit
            .iter()
            .find(|(o, _)| *o == ones)
            .expect("ones choice is listed");
        self.words
            .iter()
            .zip(orbits)
            .filter_map(|(&w, o)| o.map(|o| (w, o)))
    }
}

fn flag_orbits<'a>(
    n: usize,
    words: &'a [u64],
    augmented: bool,
    perms: &[Vec<usize>],
) -> FlagOrbits<'a> {
    let ones_choices: Vec<Option<usize>> = if augmented {
        (0..n).map(Some).collect()
    } else {
        vec![None]
    };
    let index: HashMap<u64, usize> = words.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let flag_id = |ones: Option<usize>, word: usize| ones.unwrap_or(0) * words.len() + word;
    let holds = |ones: Option<usize>, w: u64| ones.is_none_or(|j| w >> j & 1 == 1);
    let mut parent: Vec<usize> = (0..ones_choices.len() * words.len()).collect();
    for perm in perms {
        for &ones in &ones_choices {
            let image_ones = ones.map(|j| perm[j]);
            for (i, &w) in words.iter().enumerate() {
                if !holds(ones, w) {
                    continue;
                }
                let j = index[&permute_word(w, perm)];
                let (a, b) = (
                    root(&mut parent, flag_id(ones, i)),
                    root(&mut parent, flag_id(image_ones, j)),
                );
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut seeds = Vec::new();
    let mut orbit = Vec::new();
    for &ones in &ones_choices {
        let labels = words
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                if !holds(ones, w) {
                    return None;
                }
                let r = root(&mut parent, flag_id(ones, i));
                Some(*number.entry(r).or_insert_with(|| {
                    seeds.push((ones, i));
                    seeds.len() - 1
                }))
            })
            .collect();
        orbit.push((ones, labels));
    }
    FlagOrbits {
        words,
        orbit,
        seeds,
    }
}

/// Union-find root with path halving.
fn root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn permute_word<T: Copy + Into<usize>>(mut w: u64, perm: &[T]) -> u64 {
    let mut image = 0;
    while w != 0 {
        image |= 1 << perm[w.trailing_zeros() as usize].into();
        w &= w - 1;
    }
    image
}

/// A set of candidate row indices.
#[derive(Clone, Debug)]
struct RowSet(Vec<u64>);

impl RowSet {
    fn empty(len: usize) -> Self {
        RowSet(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut s = RowSet::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn len(&self) -> usize {
        self.0.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn meet_len(&self, other: &RowSet) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn meet(&self, other: &RowSet) -> RowSet {
        RowSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn subtract(&mut self, other: &RowSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &b)| {
            let mut b = b;
            std::iter::from_fn(move || {
                (b != 0).then(|| {
                    let i = b.trailing_zeros() as usize;
                    b &= b - 1;
                    k * 64 + i
                })
            })
        })
    }
}

/// Candidate rows for one ones coordinate with their pairwise compatibility.
struct RowTables {
    n: usize,
    words: Vec<u64>,
    ones: Option<usize>,
    columns: Vec<usize>,
    v: usize,
    block_size: usize,
    /// Rows meeting row `i` in the required number of coordinates.
    compatible: Vec<RowSet>,
    /// Rows covering each code coordinate.
    covering: Vec<RowSet>,
}

impl RowTables {
    fn new(n: usize, words: Vec<u64>, ones: Option<usize>, spec: &DesignSearchSpec) -> Self {
        let meet = spec.row_intersection() as u32;
        let compatible = words
            .iter()
            .map(|&w| {
                let mut s = RowSet::empty(words.len());
                for (j, &x) in words.iter().enumerate() {
                    if (w & x).count_ones() == meet && w != x {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        let covering = (0..n)
            .map(|c| {
                let mut s = RowSet::empty(words.len());
                for (j, &x) in words.iter().enumerate() {
                    if x >> c & 1 == 1 {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        RowTables {
            n,
            columns: (0..n).filter(|&j| Some(j) != ones).collect(),
            words,
            ones,
            v: spec.params.v,
            block_size: spec.params.block_size,
            compatible,
            covering,
        }
    }

    /// Every witness drawn from `pool` that contains the rows of `prefix`.
    fn search(&self, prefix: &[usize], mut pool: RowSet, sink: &mut dyn FnMut(EmbeddingWitness)) {
        let mut emit = |rows: Vec<u64>| {
            sink(EmbeddingWitness {
                row_words: rows
                    .into_iter()
                    .map(|w| BitVector::from_word(self.n, w))
                    .collect(),
                ones_coordinate: self.ones,
                column_order: self.columns.clone(),
            })
        };
        let mut search = RowSearch {
            t: self,
            chosen: Vec::new(),
            sink: &mut emit,
        };
        let mut sums = vec![0; self.n];
        for &i in prefix {
            search.choose(i, &mut pool, &mut sums);
        }
        search.run(pool, sums);
    }
}

/// Exact-cover style search: every design column must be hit by exactly
/// `block_size` chosen rows, and chosen rows meet pairwise in `intersection`
/// coordinates. Branches on the most constrained column, taking that
/// column's rows in increasing index order so each row set appears once.
struct RowSearch<'a> {
    t: &'a RowTables,
    chosen: Vec<u64>,
    sink: &'a mut dyn FnMut(Vec<u64>),
}

impl RowSearch<'_> {
    /// Adds row `i`, narrowing `pool` to rows still allowed beside it.
    fn choose(&mut self, i: usize, pool: &mut RowSet, sums: &mut [usize]) {
        let word = self.t.words[i];
        *pool = pool.meet(&self.t.compatible[i]);
        for &c in &self.t.columns {
            if word >> c & 1 == 1 {
                sums[c] += 1;
                if sums[c] == self.t.block_size {
                    pool.subtract(&self.t.covering[c]);
                }
            }
        }
        self.chosen.push(word);
    }

    fn run(&mut self, pool: RowSet, col_sums: Vec<usize>) {
        let t = self.t;
        let depth = self.chosen.len();
        let left = t.v - depth;
        if pool.len() < left {
            return;
        }
        let mut best: Option<(usize, usize)> = None;
        for &c in &t.columns {
            let need = t.block_size - col_sums[c];
            if need == 0 {
                continue;
            }
            if need > left {
                return;
            }
            let avail = pool.meet_len(&t.covering[c]);
            if avail < need {
                return;
            }
            if best.is_none_or(|(_, a)| avail < a) {
                best = Some((c, avail));
            }
        }
        let Some((col, _)) = best else {
            if depth == t.v {
                let mut rows = self.chosen.clone();
                rows.sort_unstable();
                (self.sink)(rows);
            }
            return;
        };
        let column_rows = pool.meet(&t.covering[col]);
        let mut pool = pool;
        for p in column_rows.iter() {
            let mut next = pool.clone();
            let mut sums = col_sums.clone();
            self.choose(p, &mut next, &mut sums);
            self.run(next, sums);
            self.chosen.pop();
            pool.remove(p);
        }
    }
}
