//! On-disk classification database: ingestion, the design-to-code
//! pipeline, and the tables reported from it.
//!
//! A catalog directory holds
//! - `manifest.tsv`: design parameters and the stages that have run,
//! - `codes.tsv`: fingerprint, n, k, d, sparse weight distribution, design
//!   count, zero-coordinate flag and roles,
//! - `designs.tsv`: fingerprint, rank, point code, containing codes, origin,
//! - `embeddings.tsv`: subcode and supercode fingerprints,
//! - `designs.txt`: every design as a record,
//! - `codes/<fingerprint>.txt`: one generator record per code.

mod ingest;
mod report;

pub use ingest::{
    cross_section_classes, ingest_codes, ingest_codes_text, ingest_designs, ingest_designs_text,
    ingest_selfdual, IngestedCodes, IngestedDesigns,
};
pub use report::{ReportKind, ReportTable};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::canon::{code_canonical, CanonicalForm};
use crate::design::{Design, DesignParams};
use crate::error::{Error, Result};
use crate::lincode::{LinearCode, WeightDistribution};
use crate::records::split_records;
use crate::search::{
    enumerate_so_codes, find_designs, is_embedded, prefilter, Closure, ClosureEdge,
    DesignSearchSpec, EnumerationOptions,
};

/// Pipeline stages, in the order `classify` runs them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Ranks and point codes of the input designs.
    Designs,
    /// Every self-orthogonal code of maximal dimension.
    Census,
    /// Point codes of smaller dimension placed inside filtered census codes.
    Embeddings,
    /// Designs found inside every code that passes the prefilter.
    Inventory,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::Designs,
        Stage::Census,
        Stage::Embeddings,
        Stage::Inventory,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Designs => "designs",
            Stage::Census => "census",
            Stage::Embeddings => "embeddings",
            Stage::Inventory => "inventory",
        }
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Stage> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unknown stage {s:?}"),
            })
    }
}

#[derive(Clone, Debug)]
pub struct DesignEntry {
    pub design: Design,
    /// Dimension of the self-orthogonal point code.
    pub rank: usize,
    pub point_code: CanonicalForm,
    /// Codes whose inventory holds this design.
    pub codes: BTreeSet<CanonicalForm>,
    /// False for designs that only turned up inside some code.
    pub input: bool,
}

#[derive(Clone, Debug)]
pub struct CodeEntry {
    pub code: LinearCode,
    pub distance: usize,
    pub weights: WeightDistribution,
    pub zero_coordinate: bool,
    /// Fingerprints of the designs found inside this code.
    pub designs: BTreeSet<CanonicalForm>,
    /// Generated by the incidence rows of some catalog design.
    pub point_code: bool,
    /// Member of the maximal-dimension census.
    pub census: bool,
}

impl CodeEntry {
    fn new(code: LinearCode) -> Result<CodeEntry> {
        let weights = code.weight_distribution()?.clone();
        Ok(CodeEntry {
            distance: weights.min_distance(),
            zero_coordinate: code.has_zero_coordinate(),
            weights,
            code,
            designs: BTreeSet::new(),
            point_code: false,
            census: false,
        })
    }

    fn roles(&self) -> String {
        let mut roles = Vec::new();
        if self.point_code {
            roles.push("point-code");
        }
        if self.census {
            roles.push("census");
        }
        if roles.is_empty() {
            "-".to_string()
        } else {
            roles.join(",")
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub params: Option<DesignParams>,
    pub designs: BTreeMap<CanonicalForm, DesignEntry>,
    pub codes: BTreeMap<CanonicalForm, CodeEntry>,
    /// `(subcode, supercode)` pairs.
    pub embeddings: BTreeSet<(CanonicalForm, CanonicalForm)>,
    pub stages: BTreeSet<Stage>,
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Run the census of maximal-dimension codes and the embedding stage.
    pub enumerate_max_dim: bool,
    /// Checkpoint file for the census enumeration.
    pub checkpoint: Option<PathBuf>,
    /// Canonical labeling budget for the census enumeration.
    pub budget: Option<u64>,
}

/// Runs every requested stage on designs of one parameter set.
pub fn classify(designs: &[Design], opts: &ClassifyOptions) -> Result<Catalog> {
    let mut catalog = Catalog::default();
    catalog.classify_designs(designs)?;
    if opts.enumerate_max_dim {
        catalog.run_census(opts)?;
        catalog.run_embeddings()?;
    }
    catalog.run_inventory()?;
    Ok(catalog)
}

/// Like [`classify`], saving to `dir` after each stage. A rerun skips the
/// stages recorded in an existing catalog there and resumes the census
/// from its checkpoint.
pub fn classify_to_dir(designs: &[Design], opts: &ClassifyOptions, dir: &Path) -> Result<Catalog> {
    let mut catalog = if dir.join(MANIFEST).exists() {
        Catalog::load(dir)?
    } else {
        Catalog::default()
    };
    if !catalog.stages.contains(&Stage::Designs) {
        catalog.classify_designs(designs)?;
        catalog.save(dir)?;
    }
    if opts.enumerate_max_dim {
        if !catalog.stages.contains(&Stage::Census) {
            let mut opts = opts.clone();
            opts.checkpoint
                .get_or_insert_with(|| dir.join("census.checkpoint"));
            catalog.run_census(&opts)?;
            catalog.save(dir)?;
        }
        if !catalog.stages.contains(&Stage::Embeddings) {
            catalog.run_embeddings()?;
            catalog.save(dir)?;
        }
    }
    if !catalog.stages.contains(&Stage::Inventory) {
        catalog.run_inventory()?;
        catalog.save(dir)?;
    }
    Ok(catalog)
}

impl Catalog {
    fn spec(&self) -> Result<DesignSearchSpec> {
        self.params
            .map(DesignSearchSpec::for_params)
            .ok_or_else(|| Error::StageNotRun(Stage::Designs.name().into()))
    }

    pub fn require(&self, stage: Stage) -> Result<()> {
        if self.stages.contains(&stage) {
            Ok(())
        } else {
            Err(Error::StageNotRun(stage.name().into()))
        }
    }

    fn add_code(&mut self, fingerprint: CanonicalForm, code: LinearCode) -> Result<&mut CodeEntry> {
        if !self.codes.contains_key(&fingerprint) {
            self.codes
                .insert(fingerprint.clone(), CodeEntry::new(code)?);
        }
        Ok(self.codes.get_mut(&fingerprint).expect("just inserted"))
    }

    /// Records rank and point code of each design.
    pub fn classify_designs(&mut self, designs: &[Design]) -> Result<()> {
        let Some(first) = designs.first() else {
            self.stages.insert(Stage::Designs);
            return Ok(());
        };
        let params = *first.params();
        if let Some(d) = designs.iter().find(|d| *d.params() != params) {
            return Err(Error::InvalidDesign(format!(
                "designs of one parameter set expected, found {params} and {}",
                d.params()
            )));
        }
        if self.params.is_some_and(|p| p != params) {
            return Err(Error::InvalidDesign(format!(
                "catalog holds {} designs, not {params}",
                self.params.expect("checked")
            )));
        }
        self.params = Some(params);
        let labeled: Vec<(CanonicalForm, &Design, CanonicalForm, LinearCode)> = designs
            .par_iter()
            .map(|d| {
                let (_, code) = d.default_point_code();
                (d.canonical_form(), d, code_canonical(&code), code)
            })
            .collect();
        for (fp, design, cfp, code) in labeled {
            self.add_code(cfp.clone(), code.clone())?.point_code = true;
            self.designs.entry(fp).or_insert_with(|| DesignEntry {
                design: design.clone(),
                rank: code.dimension(),
                point_code: cfp,
                codes: BTreeSet::new(),
                input: true,
            });
        }
        self.stages.insert(Stage::Designs);
        Ok(())
    }

    /// Enumerates every self-orthogonal code of the point-code length and
    /// maximal dimension.
    pub fn run_census(&mut self, opts: &ClassifyOptions) -> Result<()> {
        let n = self.spec()?.code_length();
        let mut eo = EnumerationOptions::new(n, n / 2);
        eo.checkpoint = opts.checkpoint.clone();
        eo.budget = opts.budget;
        for e in enumerate_so_codes(&eo)? {
            self.add_code(e.fingerprint, e.code)?.census = true;
        }
        self.stages.insert(Stage::Census);
        Ok(())
    }

    /// For every point code below maximal dimension, the census codes with
    /// distance at least 4 and no zero coordinate that it embeds in.
    pub fn run_embeddings(&mut self) -> Result<()> {
        self.require(Stage::Census)?;
        let n = self.spec()?.code_length();
        let targets: Vec<(&CanonicalForm, &CodeEntry)> = self
            .codes
            .iter()
            .filter(|(_, e)| e.census && e.distance >= 4 && !e.zero_coordinate)
            .collect();
        let subs: Vec<(&CanonicalForm, &CodeEntry)> = self
            .codes
            .iter()
            .filter(|(_, e)| e.point_code && e.code.dimension() < n / 2)
            .collect();
        let pairs: Vec<(&CanonicalForm, &CanonicalForm)> = subs
            .iter()
            .flat_map(|s| targets.iter().map(move |t| (s, t)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|((sf, s), (tf, t))| Ok(is_embedded(&s.code, &t.code)?.then_some((*sf, *tf))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let found: Vec<(CanonicalForm, CanonicalForm)> = pairs
            .into_iter()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        self.embeddings.extend(found);
        self.stages.insert(Stage::Embeddings);
        Ok(())
    }

    /// Searches every code that passes the prefilter for designs.
    pub fn run_inventory(&mut self) -> Result<()> {
        self.require(Stage::Designs)?;
        let spec = self.spec()?;
        let candidates: Vec<(CanonicalForm, LinearCode)> = self
            .codes
            .iter()
            .filter(|(_, e)| e.code.length() == spec.code_length())
            .map(|(f, e)| (f.clone(), e.code.clone()))
            .collect();
        let mut found = Vec::new();
        for (cfp, code) in candidates {
            if prefilter(&code, &spec)? {
                found.push((cfp, find_designs(&code, &spec)?));
            }
        }
        for (cfp, designs) in found {
            for f in designs {
                let entry = self
                    .designs
                    .entry(f.fingerprint.clone())
                    .or_insert_with(|| {
                        let (_, code) = f.design.default_point_code();
                        DesignEntry {
                            rank: code.dimension(),
                            point_code: code_canonical(&code),
                            design: f.design.clone(),
                            codes: BTreeSet::new(),
                            input: false,
                        }
                    });
                entry.codes.insert(cfp.clone());
                self.codes
                    .get_mut(&cfp)
                    .expect("inventoried code is in the catalog")
                    .designs
                    .insert(f.fingerprint);
            }
        }
        self.stages.insert(Stage::Inventory);
        Ok(())
    }

    /// The catalog of a closure run. Its designs come from the closure
    /// rather than an input file, so only the seed counts as input.
    pub fn from_closure(seed: &Design, closure: &Closure) -> Result<Catalog> {
        let mut catalog = Catalog {
            params: Some(*seed.params()),
            ..Catalog::default()
        };
        let seed_fp = seed.canonical_form();
        for (fp, code) in &closure.codes {
            catalog.add_code(fp.clone(), code.clone())?;
        }
        for (fp, design) in &closure.designs {
            let (_, code) = design.default_point_code();
            catalog.designs.insert(
                fp.clone(),
                DesignEntry {
                    design: design.clone(),
                    rank: code.dimension(),
                    point_code: code_canonical(&code),
                    codes: BTreeSet::new(),
                    input: *fp == seed_fp,
                },
            );
        }
        for edge in &closure.edges {
            match edge {
                ClosureEdge::PointCode { code, .. } => {
                    if let Some(e) = catalog.codes.get_mut(code) {
                        e.point_code = true;
                    }
                }
                ClosureEdge::Contains { code, design } => {
                    if let Some(e) = catalog.codes.get_mut(code) {
                        e.designs.insert(design.clone());
                    }
                    if let Some(d) = catalog.designs.get_mut(design) {
                        d.codes.insert(code.clone());
                    }
                }
                ClosureEdge::Embeds { sub, sup } => {
                    catalog.embeddings.insert((sub.clone(), sup.clone()));
                }
            }
        }
        catalog
            .stages
            .extend([Stage::Designs, Stage::Embeddings, Stage::Inventory]);
        Ok(catalog)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let code_dir = dir.join(CODE_DIR);
        fs::create_dir_all(&code_dir)?;

        let mut manifest = String::from("# sodesign catalog\n");
        match self.params {
            Some(p) => writeln!(
                manifest,
                "params\t{} {} {} {} {}",
                p.v, p.b, p.r, p.block_size, p.lambda
            ),
            None => writeln!(manifest, "params\t-"),
        }
        .expect("write to string");
        let stages: Vec<&str> = self.stages.iter().map(|s| s.name()).collect();
        writeln!(manifest, "stages\t{}", stages.join(",")).expect("write to string");

        let mut codes =
            String::from("# fingerprint\tn\tk\td\tweights\tdesigns\tzero_coordinate\troles\n");
        for (fp, e) in &self.codes {
            writeln!(
                codes,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                fp.to_hex(),
                e.code.length(),
                e.code.dimension(),
                e.distance,
                e.weights.to_sparse(),
                e.designs.len(),
                if e.zero_coordinate { "yes" } else { "no" },
                e.roles()
            )
            .expect("write to string");
        }

        let mut designs = String::from("# fingerprint\trank\tpoint_code\tcodes\torigin\n");
        let mut records = String::new();
        for (fp, e) in &self.designs {
            let containing: Vec<String> = e.codes.iter().map(|c| c.to_hex()).collect();
            writeln!(
                designs,
                "{}\t{}\t{}\t{}\t{}",
                fp.to_hex(),
                e.rank,
                e.point_code.to_hex(),
                if containing.is_empty() {
                    "-".to_string()
                } else {
                    containing.join(",")
                },
                if e.input { "input" } else { "found" }
            )
            .expect("write to string");
            writeln!(records, "# {}\n{}", fp.to_hex(), e.design.to_record())
                .expect("write to string");
        }

        let mut embeddings = String::from("# sub\tsuper\n");
        for (a, b) in &self.embeddings {
            writeln!(embeddings, "{}\t{}", a.to_hex(), b.to_hex()).expect("write to string");
        }

        write_atomic(&dir.join("codes.tsv"), &codes)?;
        write_atomic(&dir.join("designs.tsv"), &designs)?;
        write_atomic(&dir.join("designs.txt"), &records)?;
        write_atomic(&dir.join("embeddings.tsv"), &embeddings)?;

        let wanted: BTreeSet<String> = self
            .codes
            .keys()
            .map(|f| format!("{}.txt", f.to_hex()))
            .collect();
        for entry in fs::read_dir(&code_dir)? {
            let name = entry?.file_name().to_string_lossy().into_owned();
            if !wanted.contains(&name) {
                fs::remove_file(code_dir.join(name))?;
            }
        }
        for (fp, e) in &self.codes {
            let path = code_dir.join(format!("{}.txt", fp.to_hex()));
            let text = e.code.to_record();
            if fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
                write_atomic(&path, &text)?;
            }
        }
        // Written last so an interrupted save never claims a stage it lacks.
        write_atomic(&dir.join(MANIFEST), &manifest)
    }

    /// Reads a saved catalog, checking every stored fingerprint.
    pub fn load(dir: &Path) -> Result<Catalog> {
        let mut catalog = Catalog::default();
        for (line, fields) in tsv(&dir.join(MANIFEST))? {
            let fields: Vec<&str> = fields.iter().map(String::as_str).collect();
            match fields.as_slice() {
                ["params", "-"] => {}
                ["params", p] => {
                    let nums: Vec<usize> = p
                        .split_whitespace()
                        .filter_map(|x| x.parse().ok())
                        .collect();
                    let [v, _, _, k, l] = nums[..] else {
                        return Err(parse_error(line, "params needs five numbers"));
                    };
                    catalog.params = Some(DesignParams::derive(v, k, l)?);
                }
                ["stages", s] => {
                    for name in s.split(',').filter(|x| !x.is_empty()) {
                        catalog.stages.insert(name.parse()?);
                    }
                }
                _ => return Err(parse_error(line, "unknown manifest line")),
            }
        }

        for (line, fields) in tsv(&dir.join("codes.tsv"))? {
            let fields: Vec<&str> = fields.iter().map(String::as_str).collect();
            let [hex, _, _, _, _, _, _, roles] = fields[..] else {
                return Err(parse_error(line, "codes.tsv needs 8 fields"));
            };
            let fp = CanonicalForm::from_hex(hex)?;
            let path = dir.join(CODE_DIR).join(format!("{hex}.txt"));
            let text = fs::read_to_string(&path)?;
            let record = split_records(&text)
                .into_iter()
                .next()
                .ok_or_else(|| parse_error(line, "empty generator file"))??;
            let code = LinearCode::from_record(&record)?;
            if code_canonical(&code) != fp {
                return Err(parse_error(
                    line,
                    "generator does not match its fingerprint",
                ));
            }
            let entry = catalog.add_code(fp, code)?;
            entry.point_code = roles.split(',').any(|r| r == "point-code");
            entry.census = roles.split(',').any(|r| r == "census");
        }

        let text = fs::read_to_string(dir.join("designs.txt"))?;
        let mut stored: BTreeMap<CanonicalForm, Design> = BTreeMap::new();
        for record in split_records(&text) {
            let design = Design::from_record(&record?)?;
            stored.insert(design.canonical_form(), design);
        }
        for (line, fields) in tsv(&dir.join("designs.tsv"))? {
            let fields: Vec<&str> = fields.iter().map(String::as_str).collect();
            let [hex, rank, point_code, codes, origin] = fields[..] else {
                return Err(parse_error(line, "designs.tsv needs 5 fields"));
            };
            let fp = CanonicalForm::from_hex(hex)?;
            let design = stored
                .remove(&fp)
                .ok_or_else(|| parse_error(line, "no design record with this fingerprint"))?;
            let containing = codes
                .split(',')
                .filter(|c| *c != "-")
                .map(CanonicalForm::from_hex)
                .collect::<Result<BTreeSet<_>>>()?;
            for c in &containing {
                catalog
                    .codes
                    .get_mut(c)
                    .ok_or_else(|| parse_error(line, "unknown containing code"))?
                    .designs
                    .insert(fp.clone());
            }
            catalog.designs.insert(
                fp,
                DesignEntry {
                    design,
                    rank: rank.parse().map_err(|_| parse_error(line, "bad rank"))?,
                    point_code: CanonicalForm::from_hex(point_code)?,
                    codes: containing,
                    input: origin == "input",
                },
            );
        }
        if let Some(fp) = stored.keys().next() {
            return Err(Error::Parse {
                line: 0,
                message: format!(
                    "design {} in designs.txt is missing from designs.tsv",
                    fp.to_hex()
                ),
            });
        }

        for (line, fields) in tsv(&dir.join("embeddings.tsv"))? {
            let fields: Vec<&str> = fields.iter().map(String::as_str).collect();
            let [a, b] = fields[..] else {
                return Err(parse_error(line, "embeddings.tsv needs 2 fields"));
            };
            catalog
                .embeddings
                .insert((CanonicalForm::from_hex(a)?, CanonicalForm::from_hex(b)?));
        }
        Ok(catalog)
    }

    pub fn report(&self, kind: ReportKind) -> Result<ReportTable> {
        report::build(self, kind)
    }
}

const MANIFEST: &str = "manifest.tsv";
const CODE_DIR: &str = "codes";

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// Non-comment lines split on tabs, with 1-based line numbers.
fn tsv(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    Ok(fs::read_to_string(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.split('\t').map(str::to_string).collect()))
        .collect())
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::pairs_design_421;

    #[test]
    fn four_point_design_classifies_to_one_code() {
        let catalog = classify(&[pairs_design_421()], &ClassifyOptions::default()).unwrap();
        assert_eq!(catalog.codes.len(), 1);
        let ranks = catalog.report(ReportKind::RankDistribution).unwrap();
        assert_eq!(ranks.rows, vec![vec!["3".to_string(), "1".to_string()]]);
        let per_code = catalog.report(ReportKind::DesignsPerCode).unwrap();
        assert_eq!(per_code.column_total("designs"), 1);
    }

    #[test]
    fn missing_stage_is_reported() {
        let catalog = classify(&[pairs_design_421()], &ClassifyOptions::default()).unwrap();
        let err = catalog.report(ReportKind::CodeCensus).unwrap_err();
        assert!(matches!(err, Error::StageNotRun(s) if s == "census"));
    }

    #[test]
    fn save_load_save_is_byte_identical() {
        let opts = ClassifyOptions {
            enumerate_max_dim: true,
            ..ClassifyOptions::default()
        };
        let catalog = classify(&[pairs_design_421()], &opts).unwrap();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        catalog.save(a.path()).unwrap();
        Catalog::load(a.path()).unwrap().save(b.path()).unwrap();
        for name in [
            "manifest.tsv",
            "codes.tsv",
            "designs.tsv",
            "designs.txt",
            "embeddings.tsv",
        ] {
            assert_eq!(
                fs::read(a.path().join(name)).unwrap(),
                fs::read(b.path().join(name)).unwrap(),
                "{name}"
            );
        }
        let census = catalog.report(ReportKind::CodeCensus).unwrap();
        assert_eq!(census.column_total("total"), 2);
    }
}
