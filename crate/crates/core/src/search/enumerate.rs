use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::canon::{
    code_canonical, code_canonical_and_automorphisms, code_from_fingerprint, CanonicalForm,
};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::lincode::LinearCode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub n: usize,
    pub k: usize,
    /// Keep only codes of at least this minimum distance (0 for no filter).
    pub min_distance: usize,
    pub forbid_zero_coordinate: bool,
    /// Completed levels are written here and resumed from on the next run.
    pub checkpoint: Option<PathBuf>,
    /// Maximum number of canonical labelings before giving up.
    pub budget: Option<u64>,
}

impl EnumerationOptions {
    pub fn new(n: usize, k: usize) -> Self {
        EnumerationOptions {
            n,
            k,
            min_distance: 0,
            forbid_zero_coordinate: false,
            checkpoint: None,
            budget: None,
        }
    }

    fn header(&self, level: usize) -> String {
        format!(
            "# n={} k={} min_distance={} level={level}",
            self.n, self.k, self.min_distance
        )
    }
}

/// One equivalence class representative with its fingerprint.
#[derive(Clone, Debug)]
pub struct EnumeratedCode {
    pub fingerprint: CanonicalForm,
    pub code: LinearCode,
}

/// One representative per equivalence class of self-orthogonal `(n, k)`
/// codes meeting the filters, sorted by fingerprint.
///
/// Classes are built a dimension at a time. Every self-orthogonal code of
/// dimension `j + 1` is some class representative `C` of dimension `j`
/// plus one even coset of `C` inside `C⊥`, so extending each representative
/// by every such coset and keeping one code per fingerprint reaches every
/// class. The distance filter is applied at every level because subcodes
/// never have smaller distance; the zero-coordinate filter only at the end.
pub fn enumerate_so_codes(opts: &EnumerationOptions) -> Result<Vec<EnumeratedCode>> {
    if 2 * opts.k > opts.n {
        return Ok(Vec::new());
    }
    let (mut level, mut current) = match resume(opts)? {
        Some(state) => state,
        None => {
            let zero = LinearCode::zero(opts.n);
            (
                0,
                vec![EnumeratedCode {
                    fingerprint: code_canonical(&zero),
                    code: zero,
                }],
            )
        }
    };
    let mut spent = 0u64;
    while level < opts.k {
        let children: Vec<LinearCode> = current
            .par_iter()
            .map(|parent| children_of(&parent.code, opts.min_distance))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        spent += children.len() as u64;
        if let Some(limit) = opts.budget {
            if spent > limit {
                let saved = match &opts.checkpoint {
                    Some(p) => format!("; level {level} is saved in {}", p.display()),
                    None => String::new(),
                };
                return Err(Error::BudgetExceeded(format!(
                    "enumeration needed more than {limit} canonical labelings{saved}"
                )));
            }
        }
        let labeled: Vec<(CanonicalForm, LinearCode)> = children
            .into_par_iter()
            .map(|c| (code_canonical(&c), c))
            .collect();
        let mut classes: BTreeMap<CanonicalForm, LinearCode> = BTreeMap::new();
        for (f, c) in labeled {
            classes.entry(f).or_insert(c);
        }
        current = classes.into_keys().map(|fingerprint| {
                let code = code_from_fingerprint(&fingerprint)?;
                Ok(EnumeratedCode { fingerprint, code })
            })
            .collect::<Result<_>>()?;
        level += 1;
        save(opts, level, &current)?;
    }
    if opts.forbid_zero_coordinate {
        current.retain(|c| !c.code.has_zero_coordinate());
    }
    Ok(current)
}

/// Self-orthogonal codes `C + <x>`, one for each orbit of even cosets
/// `x + C` of `C` in `C⊥` under the known automorphisms of `C`.
fn children_of(c: &LinearCode, min_distance: usize) -> Result<Vec<LinearCode>> {
    let n = c.length();
    if n > 64 {
        return Err(Error::Dimension {
            expected: 64,
            found: n,
        });
    }
    let (_, automorphisms) = code_canonical_and_automorphisms(c, None)?;
    let basis = c.basis_words().unwrap_or_default();
    let pivots = c.pivots().to_vec();
    let reduce = |mut y: u64| -> u64 {
        for (&row, &p) in basis.iter().zip(&pivots) {
            if y >> p & 1 == 1 {
                y ^= row;
            }
        }
        y
    };
    let (dual, _) = c.generator().dual().rref();
    let mut seen: Vec<u64> = Vec::new();
    for row in dual.row_vectors() {
        let mut y = reduce(row.as_word().expect("length at most 64"));
        for &s in &seen {
            if y & (1u64 << s.trailing_zeros()) != 0 {
                y ^= s;
            }
        }
        if y != 0 {
            for s in seen.iter_mut() {
                if *s & (1u64 << y.trailing_zeros()) != 0 {
                    *s ^= y;
                }
            }
            seen.push(y);
        }
    }
    // Reducing modulo `C` leaves exactly one word per coset, and the
    // combinations of `seen` are such words.
    let m = seen.len();
    let reps: Vec<u64> = (0..1usize << m)
        .map(|i| {
            (0..m)
                .filter(|b| i >> b & 1 == 1)
                .fold(0, |acc, b| acc ^ seen[b])
        })
        .collect();
    let index: HashMap<u64, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for perm in &automorphisms {
        for (i, &r) in reps.iter().enumerate() {
            let image = perm
                .iter()
                .enumerate()
                .fold(0u64, |acc, (from, &to)| acc | (r >> from & 1) << to);
            let j = index[&reduce(image)];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out = Vec::new();
    for (i, &x) in reps.iter().enumerate().skip(1) {
        if find(&mut parent, i) != i || x.count_ones() % 2 != 0 {
            continue;
        }
        let mut rows = c.generator().clone();
        rows.push_row(BitVector::from_word(n, x))?;
        let child = LinearCode::from_rows(&rows);
        if min_distance > 0 && child.min_distance()? < min_distance {
            continue;
        }
        out.push(child);
    }
    Ok(out)
}

fn record_line(e: &EnumeratedCode) -> String {
    format!(
        "{}\t{} {}\t{}",
        e.fingerprint.to_hex(),
        e.code.length(),
        e.code.dimension(),
        e.code.generator().to_lines().join(",")
    )
}

fn save(opts: &EnumerationOptions, level: usize, codes: &[EnumeratedCode]) -> Result<()> {
    let Some(path) = &opts.checkpoint else {
        return Ok(());
    };
    let mut text = opts.header(level);
    text.push('\n');
    for c in codes {
        text.push_str(&record_line(c));
        text.push('\n');
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn resume(opts: &EnumerationOptions) -> Result<Option<(usize, Vec<EnumeratedCode>)>> {
    let Some(path) = &opts.checkpoint else {
        return Ok(None);
    };
    let Ok(text) = fs::read_to_string(path) else {
        return Ok(None);
    };
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    let level = header
        .rsplit_once("level=")
        .and_then(|(_, l)| l.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("bad checkpoint header {header:?}"),
        })?;
    if header != opts.header(level) || level > opts.k {
        return Err(Error::Parse {
            line: 1,
            message: format!("checkpoint {} belongs to a different run", path.display()),
        });
    }
    let mut codes = Vec::new();
    for (i, line) in lines.enumerate() {
        let bad = |m: &str| Error::Parse {
            line: i + 2,
            message: m.to_string(),
        };
        let mut fields = line.split('\t');
        let (Some(hex), Some(shape), Some(rows)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(bad("expected fingerprint, shape and rows"));
        };
        let fingerprint = CanonicalForm::from_hex(hex)?;
        let n: usize = shape
            .split_whitespace()
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad shape"))?;
        let rows: Vec<&str> = rows.split(',').filter(|r| !r.is_empty()).collect();
        let matrix = if rows.is_empty() {
            BitMatrix::empty(n)
        } else {
            BitMatrix::parse_rows(&rows)?
        };
        let code = LinearCode::from_rows(&matrix);
        if code_canonical(&code) != fingerprint {
            return Err(bad("fingerprint does not match the stored generator"));
        }
        codes.push(EnumeratedCode { fingerprint, code });
    }
    Ok(Some((level, codes)))
}
