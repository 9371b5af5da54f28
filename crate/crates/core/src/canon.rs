//! Canonical labeling of two-colored bipartite incidence graphs.
//!
//! Codes become graphs whose left vertices are nonzero codewords and whose
//! right vertices are coordinates; designs become graphs of points against
//! blocks. The engine is a plain individualization-refinement search: colour
//! refinement to a stable ordered partition, individualize a vertex of the
//! first smallest non-singleton cell, recurse, and keep the least leaf. Leaves
//! with equal certificates yield automorphisms, which prune sibling subtrees
//! lying in the same orbit of the pointwise stabilizer of the current path.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::design::Design;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::lincode::LinearCode;

/// Codes up to this dimension use every nonzero codeword as a graph vertex.
pub const FULL_GRAPH_DIMENSION: usize = 16;

/// A bipartite graph with an initial vertex colouring. Left and right
/// vertices never share a colour class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteIncidence {
    adjacency: BitMatrix,
    left_colors: Vec<u32>,
    right_colors: Vec<u32>,
}

impl BipartiteIncidence {
    /// Every left vertex in one class and every right vertex in another.
    pub fn new(adjacency: BitMatrix) -> Self {
        let left_colors = vec![0; adjacency.rows()];
        let right_colors = vec![0; adjacency.cols()];
        BipartiteIncidence {
            adjacency,
            left_colors,
            right_colors,
        }
    }

    pub fn with_colors(
        adjacency: BitMatrix,
        left_colors: Vec<u32>,
        right_colors: Vec<u32>,
    ) -> Result<Self> {
        if left_colors.len() != adjacency.rows() {
            return Err(Error::Dimension {
                expected: adjacency.rows(),
                found: left_colors.len(),
            });
        }
        if right_colors.len() != adjacency.cols() {
            return Err(Error::Dimension {
                expected: adjacency.cols(),
                found: right_colors.len(),
            });
        }
        Ok(BipartiteIncidence {
            adjacency,
            left_colors,
            right_colors,
        })
    }

    pub fn left_count(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn right_count(&self) -> usize {
        self.adjacency.cols()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn left_colors(&self) -> &[u32] {
        &self.left_colors
    }

    pub fn right_colors(&self) -> &[u32] {
        &self.right_colors
    }

    /// Relabels left vertex `i` as `left_perm[i]` and right vertex `j` as `right_perm[j]`.
    pub fn relabeled(&self, left_perm: &[usize], right_perm: &[usize]) -> Self {
        let adjacency = self
            .adjacency
            .permute_rows(left_perm)
            .permute_columns(right_perm);
        let mut left_colors = vec![0; self.left_count()];
        for (i, &p) in left_perm.iter().enumerate() {
            left_colors[p] = self.left_colors[i];
        }
        let mut right_colors = vec![0; self.right_count()];
        for (j, &p) in right_perm.iter().enumerate() {
            right_colors[p] = self.right_colors[j];
        }
        BipartiteIncidence {
            adjacency,
            left_colors,
            right_colors,
        }
    }

    /// Initial ordered partition: left before right, then by colour.
    /// Colours are encoded as the position where each cell starts.
    fn initial_partition(&self) -> Vec<u32> {
        let left = self.left_count();
        let n = left + self.right_count();
        let key = |v: usize| -> (u8, u32) {
            if v < left {
                (0, self.left_colors[v])
            } else {
                (1, self.right_colors[v - left])
            }
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| key(v));
        let mut colors = vec![0u32; n];
        let mut start = 0;
        for (i, &v) in order.iter().enumerate() {
            if i > 0 && key(order[i - 1]) != key(v) {
                start = i;
            }
            colors[v] = start as u32;
        }
        colors
    }
}

/// A totally ordered canonical fingerprint. Equality and ordering use only
/// the bytes; `automorphism_order` is informational.
#[derive(Clone)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
    automorphism_order: u128,
}

impl CanonicalForm {
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Order of the group generated by the automorphisms met during the
    /// search.
    pub fn automorphism_order(&self) -> u128 {
        self.automorphism_order
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    pub fn from_hex(s: &str) -> Result<CanonicalForm> {
        let bytes = hex::decode(s.trim()).map_err(|e| Error::Parse {
            line: 0,
            message: format!("bad hex fingerprint {s:?}: {e}"),
        })?;
        Ok(CanonicalForm {
            bytes,
            automorphism_order: 0,
        })
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bytes.hash(state);
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Packs a vector into bytes with coordinate 0 as the high bit of byte 0.
fn pack_bits(bits: impl Iterator<Item = bool>, out: &mut Vec<u8>) {
    let mut byte = 0u8;
    let mut filled = 0;
    for b in bits {
        byte = (byte << 1) | b as u8;
        filled += 1;
        if filled == 8 {
            out.push(byte);
            byte = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(byte << (8 - filled));
    }
}

/// FNV-1a, used for the isomorphism-invariant node trace.
fn fnv(values: impl Iterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for byte in v.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

type Certificate<'a> = dyn Fn(&[u32]) -> Vec<u8> + 'a;

struct Leaf {
    trace: Vec<u64>,
    cert: Vec<u8>,
    pos: Vec<u32>,
}

struct Engine<'a> {
    left: usize,
    nbrs: Vec<Vec<u32>>,
    right_only: bool,
    certificate: &'a Certificate<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    /// Automorphisms restricted to the search domain (all vertices, or the
    /// right side when `right_only`), indexed from the domain start.
    generators: Vec<Vec<u32>>,
    nodes: usize,
    budget: Option<usize>,
}

impl<'a> Engine<'a> {
    fn new(
        g: &BipartiteIncidence,
        right_only: bool,
        certificate: &'a Certificate<'a>,
        budget: Option<usize>,
    ) -> Self {
        let left = g.left_count();
        let n = left + g.right_count();
        let mut nbrs = vec![Vec::new(); n];
        for (i, row) in g.adjacency.row_vectors().iter().enumerate() {
            for j in row.ones_iter() {
                nbrs[i].push((left + j) as u32);
                nbrs[left + j].push(i as u32);
            }
        }
        Engine {
            left,
            nbrs,
            right_only,
            certificate,
            first: None,
            best: None,
            generators: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn domain_start(&self) -> usize {
        if self.right_only {
            self.left
        } else {
            0
        }
    }

    /// Colour refinement until the number of cells is stable.
    fn refine(&self, colors: &mut [u32]) {
        let n = colors.len();
        let mut cells = count_cells(colors);
        let mut order: Vec<u32> = (0..n as u32).collect();
        let mut flat: Vec<u32> = Vec::new();
        let mut offs = vec![0usize; n + 1];
        loop {
            flat.clear();
            for v in 0..n {
                offs[v] = flat.len();
                flat.extend(self.nbrs[v].iter().map(|&u| colors[u as usize]));
                flat[offs[v]..].sort_unstable();
            }
            offs[n] = flat.len();
            let sig = |v: u32| &flat[offs[v as usize]..offs[v as usize + 1]];
            order.sort_unstable_by(|&a, &b| {
                colors[a as usize]
                    .cmp(&colors[b as usize])
                    .then_with(|| sig(a).cmp(sig(b)))
            });
            let mut fresh = vec![0u32; n];
            let mut start = 0u32;
            let mut new_cells = 0;
            for i in 0..n {
                let v = order[i];
                if i == 0
                    || colors[order[i - 1] as usize] != colors[v as usize]
                    || sig(order[i - 1]) != sig(v)
                {
                    start = i as u32;
                    new_cells += 1;
                }
                fresh[v as usize] = start;
            }
            colors.copy_from_slice(&fresh);
            if new_cells == cells {
                break;
            }
            cells = new_cells;
        }
    }

    fn trace_of(colors: &[u32]) -> u64 {
        let mut sizes = vec![0u64; colors.len()];
        for &c in colors {
            sizes[c as usize] += 1;
        }
        fnv(sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .flat_map(|(p, &s)| [p as u64, s]))
    }

    /// First smallest non-singleton cell, as the cell's start position.
    fn target_cell(&self, colors: &[u32]) -> Option<u32> {
        let mut sizes = vec![0usize; colors.len()];
        for &c in colors {
            sizes[c as usize] += 1;
        }
        let from = if self.right_only { self.left } else { 0 };
        let pick = |lo: usize| {
            sizes
                .iter()
                .enumerate()
                .skip(lo)
                .filter(|(_, &s)| s > 1)
                .min_by_key(|(p, &s)| (s, *p))
                .map(|(p, _)| p as u32)
        };
        pick(from).or_else(|| if from > 0 { pick(0) } else { None })
    }

    fn search(
        &mut self,
        colors: Vec<u32>,
        path: &mut Vec<u32>,
        trace: &mut Vec<u64>,
    ) -> Result<()> {
        self.nodes += 1;
        if let Some(limit) = self.budget {
            if self.nodes > limit {
                return Err(Error::BudgetExceeded(format!(
                    "canonical labeling visited more than {limit} search nodes"
                )));
            }
        }
        if let Some(best) = &self.best {
            if cmp_prefix(trace, &best.trace) == Ordering::Greater {
                return Ok(());
            }
        }
        let Some(cell) = self.target_cell(&colors) else {
            self.leaf(colors, trace);
            return Ok(());
        };
        let members: Vec<u32> = (0..colors.len() as u32)
            .filter(|&v| colors[v as usize] == cell)
            .collect();
        let mut explored: Vec<u32> = Vec::new();
        for &w in &members {
            if !explored.is_empty() && self.in_explored_orbit(path, &explored, w) {
                continue;
            }
            explored.push(w);
            let mut child = colors.clone();
            for &m in members.iter().filter(|&&m| m != w) {
                child[m as usize] = cell + 1;
            }
            self.refine(&mut child);
            trace.push(Self::trace_of(&child));
            path.push(w);
            let r = self.search(child, path, trace);
            path.pop();
            trace.pop();
            r?;
        }
        Ok(())
    }

    fn in_explored_orbit(&self, path: &[u32], explored: &[u32], w: u32) -> bool {
        let start = self.domain_start();
        let size = self.nbrs.len() - start;
        let mut uf: Vec<u32> = (0..size as u32).collect();
        fn find(uf: &mut [u32], mut x: u32) -> u32 {
            while uf[x as usize] != x {
                uf[x as usize] = uf[uf[x as usize] as usize];
                x = uf[x as usize];
            }
            x
        }
        let mut any = false;
        for g in &self.generators {
            if path.iter().all(|&p| {
                let p = p as usize - start;
                g[p] as usize == p
            }) {
                any = true;
                for (x, &y) in g.iter().enumerate() {
                    let (a, b) = (find(&mut uf, x as u32), find(&mut uf, y));
                    if a != b {
                        uf[a as usize] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let target = find(&mut uf, w - start as u32);
        explored
            .iter()
            .any(|&e| find(&mut uf, e - start as u32) == target)
    }

    fn leaf(&mut self, pos: Vec<u32>, trace: &[u64]) {
        let cert = (self.certificate)(&pos);
        let leaf = Leaf {
            trace: trace.to_vec(),
            cert,
            pos,
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                trace: leaf.trace.clone(),
                cert: leaf.cert.clone(),
                pos: leaf.pos.clone(),
            });
            self.first = Some(leaf);
            return;
        };
        if first.cert == leaf.cert {
            let g = self.automorphism(&first.pos, &leaf.pos);
            self.push_generator(g);
            return;
        }
        let best = self.best.as_ref().expect("best is set with first");
        match (&leaf.trace, &leaf.cert).cmp(&(&best.trace, &best.cert)) {
            Ordering::Less => self.best = Some(leaf),
            Ordering::Equal => {
                let g = self.automorphism(&best.pos, &leaf.pos);
                self.push_generator(g);
            }
            Ordering::Greater => {}
        }
    }

    /// `v -> u` where `u` sits at the position `v` held in the other leaf.
    fn automorphism(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let start = self.domain_start();
        let mut inv_b = vec![0u32; b.len()];
        for (v, &p) in b.iter().enumerate() {
            inv_b[p as usize] = v as u32;
        }
        (start..a.len())
            .map(|v| inv_b[a[v] as usize] - start as u32)
            .collect()
    }

    fn push_generator(&mut self, g: Vec<u32>) {
        if g.iter().enumerate().any(|(i, &x)| i as u32 != x) && !self.generators.contains(&g) {
            self.generators.push(g);
        }
    }

    fn run(mut self, g: &BipartiteIncidence) -> Result<(Vec<u8>, u128, Vec<Vec<u32>>)> {
        let mut colors = g.initial_partition();
        self.refine(&mut colors);
        let mut trace = vec![Self::trace_of(&colors)];
        self.search(colors, &mut Vec::new(), &mut trace)?;
        let best = self.best.take().expect("search reaches at least one leaf");
        let degree = self.nbrs.len() - self.domain_start();
        let order = group_order(&self.generators, degree);
        Ok((best.cert, order, self.generators))
    }
}

fn count_cells(colors: &[u32]) -> usize {
    let mut seen = vec![false; colors.len()];
    let mut cells = 0;
    for &c in colors {
        if !seen[c as usize] {
            seen[c as usize] = true;
            cells += 1;
        }
    }
    cells
}

/// Lexicographic comparison where a longer `node` trace is already greater
/// once the shared prefix agrees, and a shorter one is undecided.
fn cmp_prefix(node: &[u64], best: &[u64]) -> Ordering {
    for (a, b) in node.iter().zip(best) {
        match a.cmp(b) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    if node.len() > best.len() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Adjacency certificate: sizes, initial colours in canonical order, then
/// left rows over right vertices in canonical order.
fn adjacency_certificate(g: &BipartiteIncidence, pos: &[u32]) -> Vec<u8> {
    let left = g.left_count();
    let right = g.right_count();
    let mut inv = vec![0usize; pos.len()];
    for (v, &p) in pos.iter().enumerate() {
        inv[p as usize] = v;
    }
    let mut out = Vec::new();
    out.extend_from_slice(&(left as u32).to_le_bytes());
    out.extend_from_slice(&(right as u32).to_le_bytes());
    for &v in &inv {
        let c = if v < left {
            g.left_colors[v]
        } else {
            g.right_colors[v - left]
        };
        out.extend_from_slice(&c.to_le_bytes());
    }
    let rows = g.adjacency.row_vectors();
    for &v in &inv[..left] {
        let row = &rows[v];
        pack_bits(inv[left..].iter().map(|&u| row.get(u - left)), &mut out);
    }
    out
}

/// Canonical form of a coloured bipartite graph.
pub fn canonical_form(g: &BipartiteIncidence) -> CanonicalForm {
    canonical_form_with_budget(g, None).expect("no budget set")
}

pub fn canonical_form_with_budget(
    g: &BipartiteIncidence,
    budget: Option<usize>,
) -> Result<CanonicalForm> {
    let cert = |pos: &[u32]| adjacency_certificate(g, pos);
    let (bytes, automorphism_order, _) = Engine::new(g, false, &cert, budget).run(g)?;
    Ok(CanonicalForm {
        bytes,
        automorphism_order,
    })
}

/// The codeword/coordinate graph of a code. With `use_all_codewords` every
/// nonzero codeword is a left vertex; otherwise the left vertices are all
/// codewords of the smallest weights whose words already span the code.
/// Left vertices are coloured by weight.
pub fn code_to_graph(c: &LinearCode, use_all_codewords: bool) -> Result<BipartiteIncidence> {
    let mut words: Vec<BitVector> = c
        .codewords(crate::gf2::SPAN_GUARD)?
        .into_iter()
        .filter(|w| !w.is_zero())
        .collect();
    words.sort_by_key(|w| (w.weight(), w.clone()));
    if !use_all_codewords {
        words = spanning_prefix(c, words);
    }
    let colors = words.iter().map(|w| w.weight() as u32).collect();
    let n = c.length();
    let right = vec![0; n];
    BipartiteIncidence::with_colors(BitMatrix::from_rows(n, words)?, colors, right)
}

/// Words of the smallest weights, whole weight classes at a time, until they
/// span `c`. Falls back to every word if no proper prefix spans.
fn spanning_prefix(c: &LinearCode, words: Vec<BitVector>) -> Vec<BitVector> {
    let k = c.dimension();
    let mut end = 0;
    while end < words.len() {
        let w = words[end].weight();
        while end < words.len() && words[end].weight() == w {
            end += 1;
        }
        let m = BitMatrix::from_rows(c.length(), words[..end].to_vec()).expect("equal lengths");
        if m.rank() == k {
            return words[..end].to_vec();
        }
    }
    words
}

/// Canonical form of a code under coordinate permutations.
///
/// The search individualizes coordinates only; once coordinates are
/// discrete the certificate is the reduced row-echelon generator of the
/// relabeled code, so the fingerprint is `n`, `k` and the canonical
/// generator rows.
pub fn code_canonical(c: &LinearCode) -> CanonicalForm {
    code_canonical_with_budget(c, None).expect("no budget set")
}

pub fn code_canonical_with_budget(c: &LinearCode, budget: Option<usize>) -> Result<CanonicalForm> {
    Ok(code_canonical_and_automorphisms(c, budget)?.0)
}

/// The canonical form together with generators (as coordinate permutations)
/// of the automorphisms found on the way. They generate a subgroup of the
/// full automorphism group.
pub fn code_canonical_and_automorphisms(
    c: &LinearCode,
    budget: Option<usize>,
) -> Result<(CanonicalForm, Vec<Vec<usize>>)> {
    let use_all = c.dimension() <= FULL_GRAPH_DIMENSION;
    let g = code_to_graph(c, use_all)?;
    let left = g.left_count() as u32;
    let n = c.length();
    let generator = c.generator();
    let cert = |pos: &[u32]| {
        let perm: Vec<usize> = pos[left as usize..]
            .iter()
            .map(|&p| (p - left) as usize)
            .collect();
        let (canon, _) = generator.permute_columns(&perm).rref();
        code_fingerprint_bytes(n, &canon)
    };
    let (bytes, automorphism_order, generators) = Engine::new(&g, true, &cert, budget).run(&g)?;
    let generators = generators
        .into_iter()
        .map(|p| p.into_iter().map(|x| x as usize).collect())
        .collect();
    Ok((
        CanonicalForm {
            bytes,
            automorphism_order,
        },
        generators,
    ))
}

fn code_fingerprint_bytes(n: usize, generator: &BitMatrix) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(generator.rows() as u32).to_le_bytes());
    for row in generator.row_vectors() {
        pack_bits((0..n).map(|j| row.get(j)), &mut out);
    }
    out
}

/// Decodes a code fingerprint back into its canonical representative.
pub fn code_from_fingerprint(f: &CanonicalForm) -> Result<LinearCode> {
    let b = f.bytes();
    let bad = || Error::Parse {
        line: 0,
        message: "not a code fingerprint".into(),
    };
    if b.len() < 8 {
        return Err(bad());
    }
    let n = u32::from_le_bytes(b[0..4].try_into().unwrap()) as usize;
    let k = u32::from_le_bytes(b[4..8].try_into().unwrap()) as usize;
    let row_bytes = n.div_ceil(8);
    if b.len() != 8 + k * row_bytes {
        return Err(bad());
    }
    let rows = (0..k)
        .map(|i| {
            let chunk = &b[8 + i * row_bytes..8 + (i + 1) * row_bytes];
            BitVector::from_bits((0..n).map(|j| chunk[j / 8] >> (7 - j % 8) & 1 == 1))
        })
        .collect();
    LinearCode::from_vectors(n, rows)
}

/// Point/block incidence graph with points on the left. Colour refinement
/// alone cannot split the vertices of a 2-design, so blocks are coloured by
/// the sorted list of their intersection sizes with the other blocks, and
/// points by the sorted list of how many blocks hold them together with
/// each pair of other points.
pub fn design_graph(d: &Design) -> BipartiteIncidence {
    let m = d.incidence();
    let rows = m.row_vectors();
    let columns: Vec<BitVector> = m.transpose().row_vectors().to_vec();
    let block_profiles: Vec<Vec<usize>> = (0..columns.len())
        .map(|i| {
            let mut p: Vec<usize> = (0..columns.len())
                .filter(|&j| j != i)
                .map(|j| columns[i].and(&columns[j]).weight())
                .collect();
            p.sort_unstable();
            p
        })
        .collect();
    let point_profiles: Vec<Vec<usize>> = (0..rows.len())
        .map(|p| {
            let mut out = Vec::new();
            for q in (0..rows.len()).filter(|&q| q != p) {
                let pq = rows[p].and(&rows[q]);
                for r in (q + 1..rows.len()).filter(|&r| r != p) {
                    out.push(pq.and(&rows[r]).weight());
                }
            }
            out.sort_unstable();
            out
        })
        .collect();
    BipartiteIncidence::with_colors(
        m.clone(),
        rank_profiles(&point_profiles),
        rank_profiles(&block_profiles),
    )
    .expect("sizes match")
}

/// Replaces each profile by its rank among the distinct profiles.
fn rank_profiles(profiles: &[Vec<usize>]) -> Vec<u32> {
    let mut distinct = profiles.to_vec();
    distinct.sort();
    distinct.dedup();
    profiles
        .iter()
        .map(|p| distinct.binary_search(p).expect("profile is listed") as u32)
        .collect()
}

pub fn design_canonical(d: &Design) -> CanonicalForm {
    canonical_form(&design_graph(d))
}

/// Whether two codes are equal up to a coordinate permutation. Codes with
/// different weight distributions are rejected before any canonization.
pub fn are_equivalent(a: &LinearCode, b: &LinearCode) -> Result<bool> {
    if a.length() != b.length() || a.dimension() != b.dimension() {
        return Ok(false);
    }
    if a.weight_distribution()? != b.weight_distribution()? {
        return Ok(false);
    }
    Ok(code_canonical(a) == code_canonical(b))
}

type Perm = Vec<u32>;

struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Perm>>,
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    // apply a, then b
    a.iter().map(|&x| b[x as usize]).collect()
}

fn inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn is_identity(a: &Perm) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

fn sift(levels: &[Level], mut g: Perm) -> (Perm, usize) {
    for (i, level) in levels.iter().enumerate() {
        let u = g[level.base] as usize;
        match &level.transversal[u] {
            Some(t) => g = compose(&g, &inverse(t)),
            None => return (g, i),
        }
    }
    (g, levels.len())
}

/// Order of the permutation group generated by `gens` (Schreier-Sims).
pub fn group_order(gens: &[Perm], degree: usize) -> u128 {
    let mut levels: Vec<Level> = Vec::new();
    let mut work: Vec<Perm> = gens.to_vec();
    let identity: Perm = (0..degree as u32).collect();
    while let Some(g) = work.pop() {
        let (h, depth) = sift(&levels, g);
        if is_identity(&h) {
            continue;
        }
        if depth == levels.len() {
            let base = h
                .iter()
                .enumerate()
                .find(|(i, &x)| *i as u32 != x)
                .unwrap()
                .0;
            let mut transversal = vec![None; degree];
            transversal[base] = Some(identity.clone());
            levels.push(Level {
                base,
                gens: Vec::new(),
                orbit: vec![base],
                transversal,
            });
        }
        // h fixes the bases above `depth`, so it belongs to every level up to it.
        for l in 0..=depth {
            let level = &mut levels[l];
            level.gens.push(h.clone());
            let old_len = level.orbit.len();
            let mut i = 0;
            while i < level.orbit.len() {
                let u = level.orbit[i];
                let tu = level.transversal[u]
                    .clone()
                    .expect("orbit points have transversals");
                // Old points only need the new generator; new points need all of them.
                let gens: Vec<Perm> = if i < old_len {
                    vec![h.clone()]
                } else {
                    level.gens.clone()
                };
                for s in &gens {
                    let v = s[u] as usize;
                    let tus = compose(&tu, s);
                    match &level.transversal[v] {
                        None => {
                            level.transversal[v] = Some(tus);
                            level.orbit.push(v);
                        }
                        Some(tv) => {
                            let schreier = compose(&tus, &inverse(tv));
                            if !is_identity(&schreier) {
                                work.push(schreier);
                            }
                        }
                    }
                }
                i += 1;
            }
        }
    }
    levels.iter().map(|l| l.orbit.len() as u128).product()
}
