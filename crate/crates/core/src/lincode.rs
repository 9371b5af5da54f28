//! Binary linear codes held in reduced row-echelon form.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::{span_words, BitMatrix, BitVector, SpanOrder, SPAN_GUARD};
use crate::records::{self, RawRecord, RecordKind};

/// `counts[i]` is the number of codewords of weight `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightDistribution { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, weight: usize) -> u64 {
        self.counts.get(weight).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.counts.iter().skip(1).step_by(2).all(|&c| c == 0)
    }

    /// Smallest nonzero weight, or `n + 1` for the zero code.
    pub fn min_distance(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map_or(self.counts.len(), |(i, _)| i)
    }

    /// Sparse `weight:count` pairs, e.g. `0:1,4:7`.
    pub fn to_sparse(&self) -> String {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, c)| format!("{w}:{c}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_sparse(n: usize, s: &str) -> Result<Self> {
        let mut counts = vec![0; n + 1];
        for pair in s.split(',').filter(|p| !p.is_empty()) {
            let bad = || Error::Parse {
                line: 0,
                message: format!("bad weight pair {pair:?}"),
            };
            let (w, c) = pair.split_once(':').ok_or_else(bad)?;
            let w: usize = w.trim().parse().map_err(|_| bad())?;
            let c: u64 = c.trim().parse().map_err(|_| bad())?;
            if w > n {
                return Err(bad());
            }
            counts[w] = c;
        }
        Ok(WeightDistribution { counts })
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sparse())
    }
}

/// A binary `(n, k)` linear code. The generator is stored in reduced
/// row-echelon form, so two values are equal iff they are the same code.
pub struct LinearCode {
    generator: BitMatrix,
    pivots: Vec<usize>,
    weights: OnceLock<WeightDistribution>,
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        LinearCode {
            generator: self.generator.clone(),
            pivots: self.pivots.clone(),
            weights: self.weights.clone(),
        }
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl Eq for LinearCode {}

impl Hash for LinearCode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.generator.hash(state);
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinearCode({}, {}) {:?}",
            self.length(),
            self.dimension(),
            self.generator
        )
    }
}

impl LinearCode {
    /// The code spanned by the rows of `rows`.
    pub fn from_rows(rows: &BitMatrix) -> LinearCode {
        let (generator, pivots) = rows.rref();
        LinearCode {
            generator,
            pivots,
            weights: OnceLock::new(),
        }
    }

    pub fn from_vectors(n: usize, rows: Vec<BitVector>) -> Result<LinearCode> {
        Ok(Self::from_rows(&BitMatrix::from_rows(n, rows)?))
    }

    pub fn zero(n: usize) -> LinearCode {
        Self::from_rows(&BitMatrix::empty(n))
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.length() && self.generator.rref_contains(&self.pivots, v)
    }

    /// Basis rows as packed words (requires `n <= 64`).
    pub fn basis_words(&self) -> Option<Vec<u64>> {
        self.generator
            .row_vectors()
            .iter()
            .map(BitVector::as_word)
            .collect()
    }

    /// Every codeword, as packed words in Gray order. Requires `n <= 64`.
    pub fn codeword_words(&self, guard: usize) -> Result<Vec<u64>> {
        let basis = self.basis_words().ok_or(Error::Dimension {
            expected: 64,
            found: self.length(),
        })?;
        span_words(&basis, guard)
    }

    /// Every codeword, in Gray order.
    pub fn codewords(&self, guard: usize) -> Result<Vec<BitVector>> {
        Ok(self.generator.span(SpanOrder::Gray, guard)?.collect())
    }

    /// Weight distribution under the default guard.
    pub fn weight_distribution(&self) -> Result<&WeightDistribution> {
        self.weight_distribution_with_guard(SPAN_GUARD)
    }

    pub fn weight_distribution_with_guard(&self, guard: usize) -> Result<&WeightDistribution> {
        if let Some(w) = self.weights.get() {
            return Ok(w);
        }
        let n = self.length();
        let mut counts = vec![0u64; n + 1];
        if n <= 64 {
            for w in self.codeword_words(guard)? {
                counts[w.count_ones() as usize] += 1;
            }
        } else {
            for w in self.generator.span(SpanOrder::Gray, guard)? {
                counts[w.weight()] += 1;
            }
        }
        Ok(self.weights.get_or_init(|| WeightDistribution { counts }))
    }

    pub fn min_distance(&self) -> Result<usize> {
        Ok(self.weight_distribution()?.min_distance())
    }

    /// `G G^T = 0` over GF(2).
    pub fn is_self_orthogonal(&self) -> bool {
        let rows = self.generator.row_vectors();
        rows.iter().enumerate().all(|(i, a)| {
            rows[i..]
                .iter()
                .all(|b| !a.inner_product(b).expect("equal lengths"))
        })
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dimension() == self.length() && self.is_self_orthogonal()
    }

    /// Every codeword weight is a multiple of 4, checked by enumeration.
    pub fn is_doubly_even(&self) -> Result<bool> {
        Ok(self
            .weight_distribution()?
            .counts()
            .iter()
            .enumerate()
            .all(|(w, &c)| c == 0 || w % 4 == 0))
    }

    /// Basis criterion for doubly-evenness: every basis weight is a multiple
    /// of 4 and every pair of basis rows meets in an even number of places.
    /// Since `wt(x + y) = wt(x) + wt(y) - 2|x ∩ y|`, both properties pass to
    /// sums, so this is equivalent to [`LinearCode::is_doubly_even`].
    pub fn is_doubly_even_by_basis(&self) -> bool {
        let rows = self.generator.row_vectors();
        rows.iter().enumerate().all(|(i, a)| {
            a.weight() % 4 == 0
                && rows[i + 1..]
                    .iter()
                    .all(|b| a.intersection(b).expect("equal lengths") % 2 == 0)
        })
    }

    pub fn zero_coordinates(&self) -> Vec<usize> {
        let mut support = BitVector::zeros(self.length());
        for r in self.generator.row_vectors() {
            for j in r.ones_iter() {
                support.set(j, true);
            }
        }
        (0..self.length()).filter(|&j| !support.get(j)).collect()
    }

    pub fn has_zero_coordinate(&self) -> bool {
        !self.zero_coordinates().is_empty()
    }

    /// Keeps the codewords that are 0 at `j`, then deletes coordinate `j`.
    pub fn cross_section(&self, j: usize) -> Result<LinearCode> {
        let n = self.length();
        if j >= n {
            return Err(Error::Dimension {
                expected: n,
                found: j,
            });
        }
        let mut rows: Vec<BitVector> = self.generator.row_vectors().to_vec();
        if let Some(p) = rows.iter().position(|r| r.get(j)) {
            let pivot = rows.remove(p);
            for r in rows.iter_mut().filter(|r| r.get(j)) {
                r.xor_assign(&pivot);
            }
        }
        let shortened = rows.iter().map(|r| r.without_coordinate(j)).collect();
        LinearCode::from_vectors(n - 1, shortened)
    }

    /// Pads every codeword with a trailing 0 and adds the all-ones word of
    /// length `n + 1`.
    pub fn extend(&self) -> Result<LinearCode> {
        let n = self.length();
        let mut rows: Vec<BitVector> = self
            .generator
            .row_vectors()
            .iter()
            .map(|r| r.pushed(false))
            .collect();
        rows.push(BitVector::ones(n + 1));
        let code = LinearCode::from_vectors(n + 1, rows)?;
        if code.dimension() != self.dimension() + 1 {
            return Err(Error::DegenerateExtension);
        }
        Ok(code)
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode::from_rows(&self.generator.dual())
    }

    /// Moves coordinate `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> LinearCode {
        LinearCode::from_rows(&self.generator.permute_columns(perm))
    }

    /// Whether every codeword of `self` lies in `other` (same coordinates).
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.length() == other.length()
            && self
                .generator
                .row_vectors()
                .iter()
                .all(|r| other.contains(r))
    }

    /// Reads an `n k` record whose `k` rows must be independent.
    pub fn from_record(record: &RawRecord) -> Result<LinearCode> {
        if record.kind() != Some(RecordKind::Code) {
            return Err(record.error("not a code record (header must be `n k`)"));
        }
        let rows = if record.rows.is_empty() {
            BitMatrix::empty(record.header[0])
        } else {
            record.matrix()?
        };
        let code = LinearCode::from_rows(&rows);
        if code.dimension() != record.header[1] {
            return Err(record.error(
                Error::NotABasis {
                    rank: code.dimension(),
                    rows: record.header[1],
                }
                .to_string(),
            ));
        }
        Ok(code)
    }

    /// The record of the reduced generator matrix.
    pub fn to_record(&self) -> String {
        records::write_matrix_record(&[self.length(), self.dimension()], &self.generator)
    }
}
