//! Bit-packed linear algebra over GF(2).
//!
//! Coordinate `i` of a vector lives in bit `i % 64` of word `i / 64`, so
//! coordinate 0 is the least significant bit of the first word. Every textual
//! form prints coordinate 0 first (leftmost).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Default limit on the dimension of a code whose span may be enumerated.
pub const SPAN_GUARD: usize = 24;

type Words = SmallVec<[u64; 1]>;

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

/// A binary vector of fixed length. Storage beyond `len` is always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Words,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: SmallVec::from_elem(0, word_count(len)),
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.mask_tail();
        v
    }

    /// Builds a vector of length `len <= 64` from a packed word.
    pub fn from_word(len: usize, word: u64) -> Self {
        assert!(len <= 64, "from_word needs len <= 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = word;
            v.mask_tail();
        }
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The packed word for vectors of length at most 64.
    #[inline]
    pub fn as_word(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            1..=64 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "coordinate {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::Dimension {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    /// Number of coordinates where both vectors are 1.
    pub fn intersection(&self, other: &BitVector) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// Mod-2 inner product.
    pub fn inner_product(&self, other: &BitVector) -> Result<bool> {
        Ok(self.intersection(other)? % 2 == 1)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// Moves coordinate `i` to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> BitVector {
        assert_eq!(perm.len(), self.len);
        let mut out = BitVector::zeros(self.len);
        for i in self.ones_iter() {
            out.set(perm[i], true);
        }
        out
    }

    /// Drops coordinate `j`, shifting later coordinates down by one.
    pub fn without_coordinate(&self, j: usize) -> BitVector {
        assert!(j < self.len);
        BitVector::from_bits((0..self.len).filter(|&i| i != j).map(|i| self.get(i)))
    }

    /// Appends one coordinate at the end.
    pub fn pushed(&self, bit: bool) -> BitVector {
        let mut out = BitVector::zeros(self.len + 1);
        for (dst, src) in out.words.iter_mut().zip(&self.words) {
            *dst = *src;
        }
        if bit {
            out.set(self.len, true);
        }
        out
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl Ord for BitVector {
    /// Length first, then lexicographic in textual order (coordinate 0 most significant).
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                let diff = a ^ b;
                if diff != 0 {
                    let low = diff & diff.wrapping_neg();
                    return if a & low != 0 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unexpected character {c:?} at column {i}"),
                    })
                }
            }
        }
        Ok(BitVector::from_bits(bits))
    }
}

/// Mod-2 inner product of two equal-length vectors.
pub fn inner_product(a: &BitVector, b: &BitVector) -> Result<bool> {
    a.inner_product(b)
}

/// A dense matrix over GF(2) stored as rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn empty(cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Parses rows of `0`/`1` characters. All rows must have equal length.
    pub fn parse_rows<S: AsRef<str>>(lines: &[S]) -> Result<Self> {
        let rows = lines
            .iter()
            .map(|l| l.as_ref().parse::<BitVector>())
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        Self::from_rows(cols, rows)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones_iter() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVector::weight).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for j in row.ones_iter() {
                w[j] += 1;
            }
        }
        w
    }

    /// Moves column `i` to position `perm[i]`.
    pub fn permute_columns(&self, perm: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: self.cols,
            rows: self.rows.iter().map(|r| r.permuted(perm)).collect(),
        }
    }

    /// Moves row `i` to position `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> BitMatrix {
        assert_eq!(perm.len(), self.rows.len());
        let mut rows = vec![BitVector::zeros(self.cols); self.rows.len()];
        for (i, r) in self.rows.iter().enumerate() {
            rows[perm[i]] = r.clone();
        }
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }

    /// Appends a column of ones on the right.
    pub fn with_ones_column(&self) -> BitMatrix {
        BitMatrix {
            cols: self.cols + 1,
            rows: self.rows.iter().map(|r| r.pushed(true)).collect(),
        }
    }

    pub fn without_column(&self, j: usize) -> BitMatrix {
        BitMatrix {
            cols: self.cols - 1,
            rows: self.rows.iter().map(|r| r.without_coordinate(j)).collect(),
        }
    }

    /// Reduced row echelon form and the pivot columns; zero rows are dropped.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (
            BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space `{x : M x^T = 0}`, i.e. the dual code of the row space.
    pub fn dual(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::with_capacity(self.cols - pivots.len());
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVector::zeros(self.cols);
            x.set(f, true);
            for (row, &p) in r.rows.iter().zip(&pivots) {
                if row.get(f) {
                    x.set(p, true);
                }
            }
            out.push(x);
        }
        BitMatrix {
            cols: self.cols,
            rows: out,
        }
    }

    /// Whether `v` lies in the row space of this matrix, which must be in rref
    /// with the given pivots.
    pub fn rref_contains(&self, pivots: &[usize], v: &BitVector) -> bool {
        let mut x = v.clone();
        for (row, &p) in self.rows.iter().zip(pivots) {
            if x.get(p) {
                x.xor_assign(row);
            }
        }
        x.is_zero()
    }

    /// Enumerates the span of the rows, which must be linearly independent.
    pub fn span(&self, order: SpanOrder, guard: usize) -> Result<SpanIter> {
        SpanIter::new(self, order, guard)
    }

    pub fn to_lines(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.to_string()).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Order in which [`SpanIter`] visits codewords.
///
/// `Gray` visits message `i` as `gray(i) = i ^ (i >> 1)` (one XOR per step);
/// `Lexicographic` visits message `i` directly. In both cases bit `j` of the
/// message selects basis row `j`, and the first word yielded is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpanOrder {
    #[default]
    Gray,
    Lexicographic,
}

pub struct SpanIter {
    basis: Vec<BitVector>,
    current: BitVector,
    index: u64,
    total: u64,
    order: SpanOrder,
}

impl SpanIter {
    fn new(m: &BitMatrix, order: SpanOrder, guard: usize) -> Result<Self> {
        let k = m.rows();
        if k > guard {
            return Err(Error::TooLarge {
                dimension: k,
                guard,
            });
        }
        let rank = m.rank();
        if rank != k {
            return Err(Error::NotABasis { rank, rows: k });
        }
        Ok(SpanIter {
            basis: m.rows.clone(),
            current: BitVector::zeros(m.cols),
            index: 0,
            total: 1u64 << k,
            order,
        })
    }
}

impl Iterator for SpanIter {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index >= self.total {
            return None;
        }
        let i = self.index;
        self.index += 1;
        match self.order {
            SpanOrder::Gray => {
                if i > 0 {
                    let j = i.trailing_zeros() as usize;
                    self.current.xor_assign(&self.basis[j]);
                }
                Some(self.current.clone())
            }
            SpanOrder::Lexicographic => {
                let mut w = BitVector::zeros(self.current.len());
                let mut m = i;
                while m != 0 {
                    let j = m.trailing_zeros() as usize;
                    w.xor_assign(&self.basis[j]);
                    m &= m - 1;
                }
                Some(w)
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.total - self.index) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for SpanIter {}

/// All codewords of a basis of length <= 64 as packed words, in Gray order.
pub(crate) fn span_words(basis: &[u64], guard: usize) -> Result<Vec<u64>> {
    let k = basis.len();
    if k > guard {
        return Err(Error::TooLarge {
            dimension: k,
            guard,
        });
    }
    let total = 1usize << k;
    let mut out = Vec::with_capacity(total);
    let mut cur = 0u64;
    out.push(cur);
    for i in 1..total {
        cur ^= basis[i.trailing_zeros() as usize];
        out.push(cur);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        assert!(!inner_product(&v("0000"), &v("1111")).unwrap());
        assert!(inner_product(&v("1100000"), &v("1010000")).unwrap());
        assert!(!inner_product(&v("1111000"), &v("0011110")).unwrap());
        assert!(matches!(
            inner_product(&v("11"), &v("111")),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn text_order_is_coordinate_zero_first() {
        let x = v("1000000000");
        assert!(x.get(0));
        assert_eq!(x.to_string(), "1000000000");
        assert!(v("100") > v("011"));
        assert!(v("010") < v("011"));
    }

    #[test]
    fn multiword_vectors() {
        let mut x = BitVector::zeros(130);
        x.set(0, true);
        x.set(64, true);
        x.set(129, true);
        assert_eq!(x.weight(), 3);
        assert_eq!(x.ones_iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(BitVector::ones(130).weight(), 130);
        let y: BitVector = x.to_string().parse().unwrap();
        assert_eq!(x, y);
        assert_eq!(x.without_coordinate(64).weight(), 2);
        assert_eq!(x.pushed(true).weight(), 4);
    }

    #[test]
    fn rref_examples() {
        let id = BitMatrix::identity(3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));

        let z = BitMatrix::zeros(4, 6);
        let (r, p) = z.rref();
        assert_eq!((r.rows(), r.cols()), (0, 6));
        assert!(p.is_empty());

        let a = m(&["1111000", "0011110", "1100110"]);
        let (r, p) = a.rref();
        assert_eq!(r.rows(), 2);
        assert_eq!(p, vec![0, 2]);
        assert_eq!(r.to_lines(), vec!["1100110", "0011110"]);
    }

    #[test]
    fn span_examples() {
        let empty = BitMatrix::empty(7);
        let words: Vec<_> = empty.span(SpanOrder::Gray, SPAN_GUARD).unwrap().collect();
        assert_eq!(words, vec![v("0000000")]);

        let b = m(&["1111000", "0011110"]);
        let mut words: Vec<_> = b.span(SpanOrder::Gray, SPAN_GUARD).unwrap().collect();
        words.sort();
        let mut expected = vec![v("0000000"), v("1111000"), v("0011110"), v("1100110")];
        expected.sort();
        assert_eq!(words, expected);

        let lex: Vec<_> = b
            .span(SpanOrder::Lexicographic, SPAN_GUARD)
            .unwrap()
            .collect();
        assert_eq!(
            lex,
            vec![v("0000000"), v("1111000"), v("0011110"), v("1100110")]
        );

        assert_eq!(
            BitMatrix::identity(12)
                .span(SpanOrder::Gray, SPAN_GUARD)
                .unwrap()
                .count(),
            4096
        );
    }

    #[test]
    fn span_guard_and_basis_check() {
        let big = BitMatrix::identity(25);
        assert!(matches!(
            big.span(SpanOrder::Gray, SPAN_GUARD),
            Err(Error::TooLarge {
                dimension: 25,
                guard: 24
            })
        ));
        assert!(big.span(SpanOrder::Gray, 25).is_ok());
        let dependent = m(&["110", "110"]);
        assert!(matches!(
            dependent.span(SpanOrder::Gray, SPAN_GUARD),
            Err(Error::NotABasis { rank: 1, rows: 2 })
        ));
    }

    #[test]
    fn dual_examples() {
        let zero = BitMatrix::empty(5);
        assert_eq!(zero.dual().rank(), 5);
        let full = BitMatrix::identity(5);
        assert_eq!(full.dual().rows(), 0);

        // The (7,3) code of the (4,2,1)-design.
        let g = m(&["1110001", "1001101", "0101011", "0010111"]);
        let (g, _) = g.rref();
        assert_eq!(g.rows(), 3);
        let d = g.dual();
        assert_eq!(d.rank(), 4);
        let (dr, dp) = d.rref();
        for w in g.span(SpanOrder::Gray, SPAN_GUARD).unwrap() {
            assert!(dr.rref_contains(&dp, &w));
        }
    }

    #[test]
    fn span_words_matches_span_iter() {
        let b = m(&["1111000", "0011110", "1010101"]);
        let words: Vec<u64> = b
            .row_vectors()
            .iter()
            .map(|r| r.as_word().unwrap())
            .collect();
        let packed = span_words(&words, SPAN_GUARD).unwrap();
        let slow: Vec<u64> = b
            .span(SpanOrder::Gray, SPAN_GUARD)
            .unwrap()
            .map(|w| w.as_word().unwrap())
            .collect();
        assert_eq!(packed, slow);
    }
}
