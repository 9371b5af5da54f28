use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, SPAN_GUARD};
use crate::lincode::LinearCode;

/// Whether some coordinate permutation carries `a` into a subcode of `b`.
pub fn is_embedded(a: &LinearCode, b: &LinearCode) -> Result<bool> {
    Ok(find_embedding(a, b, None)?.is_some())
}

/// A permutation `perm` (coordinate `i` of `a` goes to `perm[i]`) with
/// `a.permuted(perm)` contained in `b`, if one exists.
///
/// The search picks a low-weight basis `g_1..g_m` of `a` and looks for
/// images `w_1..w_m` in `b` of matching weights. Viewing coordinates as the
/// column patterns of the stacked rows, an embedding exists exactly when the
/// pattern multisets of `(g_1..g_i)` and `(w_1..w_i)` agree at the last
/// level, and agreement at every prefix is necessary, so it prunes each level.
pub fn find_embedding(
    a: &LinearCode,
    b: &LinearCode,
    budget: Option<u64>,
) -> Result<Option<Vec<usize>>> {
    let n = a.length();
    if b.length() != n || a.dimension() > b.dimension() {
        return Ok(None);
    }
    if n > 64 {
        return Err(Error::Dimension {
            expected: 64,
            found: n,
        });
    }
    let wa = a.weight_distribution()?;
    let wb = b.weight_distribution()?;
    if (0..=n).any(|w| wa.get(w) > wb.get(w)) {
        return Ok(None);
    }
    let basis = low_weight_basis(a)?;
    if basis.is_empty() {
        return Ok(Some((0..n).collect()));
    }
    let mut by_weight: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for w in b.codeword_words(SPAN_GUARD)? {
        by_weight[w.count_ones() as usize].push(w);
    }
    // Sorted column patterns of each prefix of the basis of `a`.
    let mut targets: Vec<Vec<u64>> = Vec::with_capacity(basis.len());
    let mut patterns = vec![0u64; n];
    for (i, &g) in basis.iter().enumerate() {
        for (j, p) in patterns.iter_mut().enumerate() {
            *p |= (g >> j & 1) << i;
        }
        let mut sorted = patterns.clone();
        sorted.sort_unstable();
        targets.push(sorted);
    }
    let mut search = EmbedSearch {
        n,
        basis: &basis,
        by_weight: &by_weight,
        targets: &targets,
        images: Vec::new(),
        nodes: 0,
        budget,
    };
    if !search.run(vec![0u64; n])? {
        return Ok(None);
    }
    // Pair coordinates with equal patterns.
    let pattern_of = |rows: &[u64], j: usize| -> u64 {
        rows.iter()
            .enumerate()
            .fold(0, |acc, (i, &w)| acc | (w >> j & 1) << i)
    };
    let mut from: Vec<(u64, usize)> = (0..n).map(|j| (pattern_of(&basis, j), j)).collect();
    let mut to: Vec<(u64, usize)> = (0..n).map(|j| (pattern_of(&search.images, j), j)).collect();
    from.sort_unstable();
    to.sort_unstable();
    let mut perm = vec![0usize; n];
    for ((pa, ja), (pb, jb)) in from.into_iter().zip(to) {
        debug_assert_eq!(pa, pb);
        perm[ja] = jb;
    }
    debug_assert!(a.permuted(&perm).is_subcode_of(b));
    Ok(Some(perm))
}

fn low_weight_basis(a: &LinearCode) -> Result<Vec<u64>> {
    let mut words = a.codeword_words(SPAN_GUARD)?;
    words.retain(|&w| w != 0);
    words.sort_unstable_by_key(|&w| (w.count_ones(), w));
    let n = a.length();
    let mut basis: Vec<u64> = Vec::new();
    let mut span = BitMatrix::empty(n);
    for w in words {
        if basis.len() == a.dimension() {
            break;
        }
        let mut trial = span.clone();
        trial.push_row(BitVector::from_word(n, w))?;
        if trial.rank() > basis.len() {
            span = trial;
            basis.push(w);
        }
    }
    Ok(basis)
}

struct EmbedSearch<'a> {
    n: usize,
    basis: &'a [u64],
    by_weight: &'a [Vec<u64>],
    targets: &'a [Vec<u64>],
    images: Vec<u64>,
    nodes: u64,
    budget: Option<u64>,
}

impl EmbedSearch<'_> {
    fn run(&mut self, patterns: Vec<u64>) -> Result<bool> {
        let level = self.images.len();
        if level == self.basis.len() {
            return Ok(true);
        }
        let weight = self.basis[level].count_ones() as usize;
        let mut next = patterns.clone();
        let mut sorted = vec![0u64; self.n];
        for &w in &self.by_weight[weight] {
            self.nodes += 1;
            if let Some(limit) = self.budget {
                if self.nodes > limit {
                    return Err(Error::BudgetExceeded(format!(
                        "subcode embedding visited more than {limit} nodes"
                    )));
                }
            }
            for j in 0..self.n {
                next[j] = patterns[j] | (w >> j & 1) << level;
            }
            sorted.copy_from_slice(&next);
            sorted.sort_unstable();
            if sorted != self.targets[level] {
                continue;
            }
            self.images.push(w);
            if self.run(next.clone())? {
                return Ok(true);
            }
            self.images.pop();
        }
        Ok(false)
    }
}
