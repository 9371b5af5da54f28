use crate::design::{Design, DesignParams};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Incidence matrices of `(v, k, lambda)`-designs whose rows strictly
/// decrease and whose columns weakly decrease (reading coordinate 0 as most
/// significant). The lexicographically largest matrix in any isomorphism
/// class has this shape, so the output meets every class; it is not
/// isomorph-free. Stops after `limit` matrices when given.
pub fn enumerate_designs(
    v: usize,
    block_size: usize,
    lambda: usize,
    limit: Option<usize>,
) -> Result<Vec<Design>> {
    let params = DesignParams::derive(v, block_size, lambda)?;
    if params.b > 64 {
        return Err(Error::Dimension {
            expected: 64,
            found: params.b,
        });
    }
    let mut gen = Generator {
        params,
        rows: Vec::new(),
        col_sums: vec![0; params.b],
        out: Vec::new(),
        limit,
    };
    gen.next_row(vec![params.b]);
    gen.out
        .into_iter()
        .map(|m| Design::validate(m, v, block_size, lambda))
        .collect()
}

pub fn find_one_design(v: usize, block_size: usize, lambda: usize) -> Result<Option<Design>> {
    Ok(enumerate_designs(v, block_size, lambda, Some(1))?
        .into_iter()
        .next())
}

struct Generator {
    params: DesignParams,
    rows: Vec<u64>,
    col_sums: Vec<usize>,
    out: Vec<BitMatrix>,
    limit: Option<usize>,
}

/// Columns are grouped into runs that agree on every row so far. A new row
/// must be of the form `1..10..0` on each run, and each earlier row is
/// constant on a run, so a row is chosen by picking a count of ones per run.
impl Generator {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.out.len() >= l)
    }

    fn next_row(&mut self, runs: Vec<usize>) {
        if self.done() {
            return;
        }
        let p = self.params;
        if self.rows.len() == p.v {
            let rows = self
                .rows
                .iter()
                .map(|&w| BitVector::from_word(p.b, w))
                .collect();
            self.out
                .push(BitMatrix::from_rows(p.b, rows).expect("uniform rows"));
            return;
        }
        let mut choice = Vec::with_capacity(runs.len());
        let meets = vec![0usize; self.rows.len()];
        self.choose(
            &runs,
            0,
            0,
            0,
            p.r,
            &meets,
            self.rows.is_empty(),
            &mut choice,
        );
    }

    /// Picks the number of ones for run `idx`, which starts at column `start`.
    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        runs: &[usize],
        idx: usize,
        start: usize,
        word: u64,
        weight_left: usize,
        meets: &[usize],
        below_prev: bool,
        choice: &mut Vec<usize>,
    ) {
        if self.done() {
            return;
        }
        let p = self.params;
        if idx == runs.len() {
            if weight_left != 0 || !below_prev || meets.iter().any(|&m| m != p.lambda) {
                return;
            }
            let mut split = Vec::with_capacity(2 * runs.len());
            for (&len, &t) in runs.iter().zip(choice.iter()) {
                split.extend([t, len - t].into_iter().filter(|&x| x > 0));
            }
            for c in 0..p.b {
                self.col_sums[c] += (word >> c & 1) as usize;
            }
            self.rows.push(word);
            self.next_row(split);
            self.rows.pop();
            for c in 0..p.b {
                self.col_sums[c] -= (word >> c & 1) as usize;
            }
            return;
        }
        let len = runs[idx];
        let sum = self.col_sums[start];
        let rows_after = p.v - self.rows.len() - 1;
        // A column left at 0 here still needs k - sum ones from later rows.
        let max_ones = if sum >= p.block_size {
            0
        } else {
            len.min(weight_left)
        };
        let min_ones = if sum + rows_after < p.block_size {
            len
        } else {
            0
        };
        let remaining_cols: usize = runs[idx + 1..].iter().sum();
        let prev_bit = self.rows.last().map(|&w| w >> start & 1 == 1);
        for t in (min_ones..=max_ones).rev() {
            if t > weight_left || weight_left - t > remaining_cols {
                continue;
            }
            // While equal to the previous row, a run where it has 0 must stay 0.
            let mut below = below_prev;
            if !below_prev {
                match prev_bit {
                    Some(true) => below = t < len,
                    Some(false) if t > 0 => continue,
                    _ => {}
                }
            }
            let mut next_meets = meets.to_vec();
            let mut ok = true;
            for (i, &r) in self.rows.iter().enumerate() {
                if r >> start & 1 == 1 {
                    next_meets[i] += t;
                }
                if next_meets[i] > p.lambda {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let bits = if t == 0 {
                0
            } else {
                ((1u64 << t) - 1) << start
            };
            choice.push(t);
            self.choose(
                runs,
                idx + 1,
                start + len,
                word | bits,
                weight_left - t,
                &next_meets,
                below,
                choice,
            );
            choice.pop();
        }
    }
}
