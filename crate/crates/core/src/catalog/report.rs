use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::{Catalog, CodeEntry, Stage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReportKind {
    /// Input designs per point-code dimension.
    RankDistribution,
    /// Input designs grouped by the weight distribution of their point code.
    WeightClass,
    /// Codes holding designs, with the number of designs in each.
    DesignsPerCode,
    /// Smaller point codes with the number of census codes they embed in.
    SubcodeDistribution,
    /// Census codes by minimum distance and zero-coordinate presence.
    CodeCensus,
}

impl ReportKind {
    pub const ALL: [ReportKind; 5] = [
        ReportKind::RankDistribution,
        ReportKind::WeightClass,
        ReportKind::DesignsPerCode,
        ReportKind::SubcodeDistribution,
        ReportKind::CodeCensus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReportKind::RankDistribution => "rank-distribution",
            ReportKind::WeightClass => "weight-class",
            ReportKind::DesignsPerCode => "designs-per-code",
            ReportKind::SubcodeDistribution => "subcode-distribution",
            ReportKind::CodeCensus => "code-census",
        }
    }

    fn stage(self) -> Stage {
        match self {
            ReportKind::RankDistribution | ReportKind::WeightClass => Stage::Designs,
            ReportKind::DesignsPerCode => Stage::Inventory,
            ReportKind::SubcodeDistribution => Stage::Embeddings,
            ReportKind::CodeCensus => Stage::Census,
        }
    }
}

impl FromStr for ReportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReportKind> {
        ReportKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ReportKind::ALL.iter().map(|k| k.name()).collect();
                Error::Parse {
                    line: 0,
                    message: format!(
                        "unknown report kind {s:?}; expected one of {}",
                        names.join(", ")
                    ),
                }
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportTable {
    pub kind: ReportKind,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ReportTable {
    /// The cell in `column` of the row whose first cell is `key`.
    pub fn cell(&self, key: &str, column: &str) -> Option<&str> {
        let c = self.header.iter().position(|h| h == column)?;
        let row = self.rows.iter().find(|r| r[0] == key)?;
        Some(&row[c])
    }

    /// Sum of a numeric column.
    pub fn column_total(&self, column: &str) -> u64 {
        let Some(c) = self.header.iter().position(|h| h == column) else {
            return 0;
        };
        self.rows
            .iter()
            .filter_map(|r| r[c].parse::<u64>().ok())
            .sum()
    }
}

impl fmt::Display for ReportTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.kind.name())?;
        writeln!(f, "{}", self.header.join("\t"))?;
        for row in &self.rows {
            writeln!(f, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}

/// Sort key shared by the code-level tables.
fn code_key(e: &CodeEntry) -> (usize, Vec<u64>) {
    (e.code.dimension(), e.weights.counts().to_vec())
}

fn strings<const N: usize>(cells: [String; N]) -> Vec<String> {
    cells.into()
}

pub(super) fn build(catalog: &Catalog, kind: ReportKind) -> Result<ReportTable> {
    catalog.require(kind.stage())?;
    let (header, rows): (&[&str], Vec<Vec<String>>) = match kind {
        ReportKind::RankDistribution => {
            let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
            for d in catalog.designs.values().filter(|d| d.input) {
                *counts.entry(d.rank).or_default() += 1;
            }
            let rows = counts
                .into_iter()
                .map(|(rank, n)| strings([rank.to_string(), n.to_string()]))
                .collect();
            (&["rank", "designs"], rows)
        }
        ReportKind::WeightClass => {
            let mut groups: BTreeMap<(usize, Vec<u64>), (String, u64, u64)> = BTreeMap::new();
            let mut seen_codes = std::collections::BTreeSet::new();
            for d in catalog.designs.values().filter(|d| d.input) {
                let code = &catalog.codes[&d.point_code];
                let g = groups
                    .entry(code_key(code))
                    .or_insert_with(|| (code.weights.to_sparse(), 0, 0));
                g.1 += 1;
                if seen_codes.insert(&d.point_code) {
                    g.2 += 1;
                }
            }
            let rows = groups
                .into_iter()
                .map(|((k, _), (w, designs, codes))| {
                    strings([k.to_string(), w, designs.to_string(), codes.to_string()])
                })
                .collect();
            (&["k", "weights", "designs", "codes"], rows)
        }
        ReportKind::DesignsPerCode => {
            let mut entries: Vec<_> = catalog
                .codes
                .iter()
                .filter(|(_, e)| !e.designs.is_empty())
                .collect();
            entries.sort_by(|(fa, a), (fb, b)| code_key(a).cmp(&code_key(b)).then(fa.cmp(fb)));
            let rows = entries
                .into_iter()
                .map(|(fp, e)| {
                    strings([
                        fp.to_hex(),
                        e.code.dimension().to_string(),
                        e.distance.to_string(),
                        e.weights.to_sparse(),
                        e.designs.len().to_string(),
                    ])
                })
                .collect();
            (&["code", "k", "d", "weights", "designs"], rows)
        }
        ReportKind::SubcodeDistribution => {
            let mut supers: BTreeMap<_, u64> = BTreeMap::new();
            for (sub, _) in &catalog.embeddings {
                *supers.entry(sub).or_default() += 1;
            }
            let max_k = catalog
                .codes
                .values()
                .map(|e| e.code.dimension())
                .max()
                .unwrap_or(0);
            let mut entries: Vec<_> = catalog
                .codes
                .iter()
                .filter(|(_, e)| e.point_code && e.code.dimension() < max_k)
                .collect();
            entries.sort_by(|(fa, a), (fb, b)| code_key(a).cmp(&code_key(b)).then(fa.cmp(fb)));
            let rows = entries
                .into_iter()
                .map(|(fp, e)| {
                    strings([
                        fp.to_hex(),
                        e.code.dimension().to_string(),
                        e.weights.to_sparse(),
                        supers.get(fp).copied().unwrap_or(0).to_string(),
                    ])
                })
                .collect();
            (&["code", "k", "weights", "supercodes"], rows)
        }
        ReportKind::CodeCensus => {
            let mut cells = [[0u64; 4]; 2];
            for e in catalog.codes.values().filter(|e| e.census) {
                let column = match e.distance {
                    0..=2 => 0,
                    3..=4 => 1,
                    5..=6 => 2,
                    _ => 3,
                };
                cells[usize::from(e.zero_coordinate)][column] += 1;
            }
            let rows = [("no", cells[0]), ("yes", cells[1])]
                .into_iter()
                .map(|(label, c)| {
                    let mut row = vec![label.to_string()];
                    row.extend(c.iter().map(u64::to_string));
                    row.push(c.iter().sum::<u64>().to_string());
                    row
                })
                .collect();
            (
                &["zero_coordinate", "d=2", "d=4", "d=6", "d>=8", "total"],
                rows,
            )
        }
    };
    Ok(ReportTable {
        kind,
        header: header.iter().map(|h| h.to_string()).collect(),
        rows,
    })
}
