//! Balanced incomplete block designs and their incidence matrices.

use std::collections::HashMap;
use std::fmt;

use crate::canon::{self, CanonicalForm};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::lincode::LinearCode;
use crate::records::{self, RawRecord, RecordKind};

/// Parameters `(v, b, r, k, lambda)` of a 2-design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DesignParams {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub block_size: usize,
    pub lambda: usize,
}

impl DesignParams {
    /// Solves `r (k - 1) = lambda (v - 1)` and `b k = v r`.
    pub fn derive(v: usize, block_size: usize, lambda: usize) -> Result<DesignParams> {
        if block_size < 2 || block_size >= v {
            return Err(Error::Admissibility(format!(
                "need 2 <= k < v, got v={v}, k={block_size}"
            )));
        }
        if lambda == 0 {
            return Err(Error::Admissibility("lambda must be at least 1".into()));
        }
        let pairs = lambda * (v - 1);
        if !pairs.is_multiple_of(block_size - 1) {
            return Err(Error::Admissibility(format!(
                "r(k-1) = lambda(v-1) has no integral r: {lambda}*{} is not divisible by {}",
                v - 1,
                block_size - 1
            )));
        }
        let r = pairs / (block_size - 1);
        if !(v * r).is_multiple_of(block_size) {
            return Err(Error::Admissibility(format!(
                "bk = vr has no integral b: {v}*{r} is not divisible by {block_size}"
            )));
        }
        Ok(DesignParams {
            v,
            b: v * r / block_size,
            r,
            block_size,
            lambda,
        })
    }

    /// The `(6l - 2, 9l - 3, 3l, 2l, l)` family.
    pub fn residual_family(lambda: usize) -> Result<DesignParams> {
        Self::derive(6 * lambda - 2, 2 * lambda, lambda)
    }

    /// Which incidence matrix generates a self-orthogonal point code, if any:
    /// the plain one when `r` and `lambda` are even, the augmented one when
    /// both are odd.
    pub fn self_orthogonal_point_code(&self) -> Option<PointCode> {
        match (self.r % 2, self.lambda % 2) {
            (0, 0) => Some(PointCode::Plain),
            (1, 1) => Some(PointCode::Augmented),
            _ => None,
        }
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.v, self.b, self.r, self.block_size, self.lambda
        )
    }
}

/// Which rows generate the point code of a design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointCode {
    /// Rows of the `v x b` incidence matrix.
    Plain,
    /// Rows of the incidence matrix with an all-ones column appended.
    Augmented,
}

/// A validated design. Rows of the incidence matrix are points, columns are blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Design {
    params: DesignParams,
    incidence: BitMatrix,
}

/// The largest block multiplicity together with the bound `b / v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MannBound {
    pub multiplicity: usize,
    pub b: usize,
    pub v: usize,
}

impl MannBound {
    /// `floor(b / v)`, the largest multiplicity a design may have.
    pub fn limit(&self) -> usize {
        self.b / self.v
    }

    pub fn holds(&self) -> bool {
        self.multiplicity <= self.limit()
    }
}

impl Design {
    /// Checks replication, block size and integer pair counts.
    pub fn validate(
        candidate: BitMatrix,
        v: usize,
        block_size: usize,
        lambda: usize,
    ) -> Result<Design> {
        let params = DesignParams::derive(v, block_size, lambda)?;
        if candidate.rows() != v {
            return Err(Error::InvalidDesign(format!(
                "expected {v} rows, found {}",
                candidate.rows()
            )));
        }
        if candidate.cols() != params.b {
            return Err(Error::InvalidDesign(format!(
                "expected {} blocks, found {}",
                params.b,
                candidate.cols()
            )));
        }
        if let Some((i, w)) = candidate
            .row_weights()
            .into_iter()
            .enumerate()
            .find(|&(_, w)| w != params.r)
        {
            return Err(Error::InvalidDesign(format!(
                "point {i} lies in {w} blocks, expected r = {}",
                params.r
            )));
        }
        if let Some((j, w)) = candidate
            .column_weights()
            .into_iter()
            .enumerate()
            .find(|&(_, w)| w != block_size)
        {
            return Err(Error::InvalidDesign(format!(
                "block {j} has {w} points, expected k = {block_size}"
            )));
        }
        let table = intersection_table(&candidate);
        for i in 0..v {
            for j in i + 1..v {
                if table[i][j] != lambda {
                    return Err(Error::InvalidDesign(format!(
                        "points {i} and {j} share {} blocks, expected lambda = {lambda}",
                        table[i][j]
                    )));
                }
            }
        }
        Ok(Design {
            params,
            incidence: candidate,
        })
    }

    pub fn params(&self) -> &DesignParams {
        &self.params
    }

    pub fn incidence(&self) -> &BitMatrix {
        &self.incidence
    }

    /// Incidence matrix with a column of ones appended.
    pub fn augment(&self) -> BitMatrix {
        self.incidence.with_ones_column()
    }

    pub fn point_code_rows(&self, mode: PointCode) -> BitMatrix {
        match mode {
            PointCode::Plain => self.incidence.clone(),
            PointCode::Augmented => self.augment(),
        }
    }

    pub fn point_code(&self, mode: PointCode) -> LinearCode {
        LinearCode::from_rows(&self.point_code_rows(mode))
    }

    /// The self-orthogonal point code for this design's parameters, falling
    /// back to the plain incidence matrix when neither choice is self-orthogonal.
    pub fn default_point_code(&self) -> (PointCode, LinearCode) {
        let mode = self
            .params
            .self_orthogonal_point_code()
            .unwrap_or(PointCode::Plain);
        (mode, self.point_code(mode))
    }

    /// GF(2) rank of the plain incidence matrix.
    pub fn rank(&self) -> usize {
        self.incidence.rank()
    }

    /// Blocks as columns, sorted.
    pub fn sorted_blocks(&self) -> Vec<BitVector> {
        let t = self.incidence.transpose();
        let mut blocks = t.into_rows();
        blocks.sort();
        blocks
    }

    pub fn mann_bound(&self) -> Result<MannBound> {
        if self.params.r <= self.params.lambda {
            return Err(Error::BoundNotApplicable {
                r: self.params.r,
                lambda: self.params.lambda,
            });
        }
        Ok(MannBound {
            multiplicity: max_block_multiplicity(&self.incidence),
            b: self.params.b,
            v: self.params.v,
        })
    }

    /// Canonical form of the point/block incidence graph; equal iff the
    /// designs are isomorphic.
    pub fn canonical_form(&self) -> CanonicalForm {
        canon::design_canonical(self)
    }

    pub fn from_record(record: &RawRecord) -> Result<Design> {
        if record.kind() != Some(RecordKind::Design) {
            return Err(record.error("not a design record (header must be `v b r k lambda`)"));
        }
        let h = &record.header;
        let params =
            DesignParams::derive(h[0], h[3], h[4]).map_err(|e| record.error(e.to_string()))?;
        if params.b != h[1] || params.r != h[2] {
            return Err(record.error(format!(
                "header {:?} disagrees with derived parameters {params}",
                h
            )));
        }
        Design::validate(record.matrix()?, h[0], h[3], h[4])
            .map_err(|e| record.error(e.to_string()))
    }

    pub fn to_record(&self) -> String {
        let p = &self.params;
        records::write_matrix_record(&[p.v, p.b, p.r, p.block_size, p.lambda], &self.incidence)
    }

    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Design {
        Design {
            params: self.params,
            incidence: self
                .incidence
                .permute_rows(row_perm)
                .permute_columns(col_perm),
        }
    }
}

/// Integer `v x v` table of row intersections.
pub fn intersection_table(m: &BitMatrix) -> Vec<Vec<usize>> {
    let rows = m.row_vectors();
    rows.iter()
        .map(|a| {
            rows.iter()
                .map(|b| a.intersection(b).expect("equal lengths"))
                .collect()
        })
        .collect()
}

/// Largest number of identical columns.
pub fn max_block_multiplicity(incidence: &BitMatrix) -> usize {
    let mut counts: HashMap<BitVector, usize> = HashMap::new();
    for block in incidence.transpose().into_rows() {
        *counts.entry(block).or_default() += 1;
    }
    counts.values().copied().max().unwrap_or(0)
}

/// The complete design on four points: every 2-subset is a block.
pub fn pairs_design_421() -> Design {
    let mut m = BitMatrix::zeros(4, 6);
    let mut col = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            m.set(a, col, true);
            m.set(b, col, true);
            col += 1;
        }
    }
    Design::validate(m, 4, 2, 1).expect("all pairs of 4 points form a (4,2,1)-design")
}
