use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sodesign::catalog::{self, Catalog, ClassifyOptions, ReportKind};
use sodesign::records::{split_records, RawRecord, RecordKind};
use sodesign::search::{
    closure, enumerate_so_codes, find_designs, find_embedding, DesignSearchSpec, EnumerationOptions,
};
use sodesign::{are_equivalent, code_canonical, Design, Error, LinearCode};

/// Block designs and the binary self-orthogonal codes they generate.
///
/// Exit status: 0 success, 1 invalid input or negative verdict, 2 usage
/// error, 3 search budget exceeded.
#[derive(Parser)]
#[command(name = "sodesign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every design and code record in a file.
    Validate { file: PathBuf },
    /// Histogram of point-code dimensions of the designs in a file.
    Rank { designs_file: PathBuf },
    /// Weight distribution, length, dimension and distance of each code.
    Wdist { code_file: PathBuf },
    /// Fingerprint of each record, equal exactly for isomorphic objects.
    Canon { file: PathBuf },
    /// Whether the first records of two files are isomorphic.
    Equiv { file_a: PathBuf, file_b: PathBuf },
    /// Keep the codewords that vanish at a coordinate, then drop it.
    CrossSection {
        code_file: PathBuf,
        #[arg(long)]
        coord: usize,
    },
    /// Append a coordinate and the all-ones word.
    Extend { code_file: PathBuf },
    /// Self-orthogonal codes of a length and dimension, one per class.
    EnumerateCodes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        min_distance: usize,
        #[arg(long)]
        no_zero_coord: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Give up after this many canonical labelings.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Non-isomorphic designs whose (augmented) incidence rows lie in a code.
    FindDesigns {
        code_file: PathBuf,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: usize,
        /// Rows carry an extra all-ones coordinate.
        #[arg(long)]
        augmented: bool,
    },
    /// Whether some relabeling of the first code lies inside the second.
    Embed {
        subcode_file: PathBuf,
        supercode_file: PathBuf,
        /// Give up after this many search nodes.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build a catalog directory from a file of designs.
    Classify {
        #[arg(long)]
        designs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also enumerate every self-orthogonal code of maximal dimension.
        #[arg(long)]
        enumerate_max_dim: bool,
    },
    /// Designs reachable from a seed by alternating point codes and searches.
    Closure {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print one table of a catalog.
    Report {
        #[arg(long)]
        catalog: PathBuf,
        /// rank-distribution, weight-class, designs-per-code,
        /// subcode-distribution or code-census.
        #[arg(long)]
        kind: String,
    },
}

enum Verdict {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(command: Command) -> Result<Verdict, Error> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Rank { designs_file } => {
            let ingested = catalog::ingest_designs(&designs_file)?;
            report_errors(&ingested.errors);
            let mut c = Catalog::default();
            c.classify_designs(&ingested.designs)?;
            print!("{}", c.report(ReportKind::RankDistribution)?);
            Ok(verdict(ingested.errors.is_empty()))
        }
        Command::Wdist { code_file } => {
            for code in read_codes(&code_file)? {
                let w = code.weight_distribution()?;
                println!(
                    "n={} k={} d={} weights={}",
                    code.length(),
                    code.dimension(),
                    w.min_distance(),
                    w.to_sparse()
                );
            }
            Ok(Verdict::Yes)
        }
        Command::Canon { file } => {
            for record in read_records(&file)? {
                match Object::from_record(&record)? {
                    Object::Design(d) => println!("design {}", d.canonical_form()),
                    Object::Code(c) => println!("code {}", code_canonical(&c)),
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Equiv { file_a, file_b } => {
            let same = match (first_object(&file_a)?, first_object(&file_b)?) {
                (Object::Code(a), Object::Code(b)) => are_equivalent(&a, &b)?,
                (Object::Design(a), Object::Design(b)) => a.canonical_form() == b.canonical_form(),
                _ => return Err(usage("cannot compare a design with a code")),
            };
            println!("{}", if same { "equivalent" } else { "not equivalent" });
            Ok(verdict(same))
        }
        Command::CrossSection { code_file, coord } => {
            for code in read_codes(&code_file)? {
                print!("{}", code.cross_section(coord)?.to_record());
            }
            Ok(Verdict::Yes)
        }
        Command::Extend { code_file } => {
            for code in read_codes(&code_file)? {
                print!("{}", code.extend()?.to_record());
            }
            Ok(Verdict::Yes)
        }
        Command::EnumerateCodes {
            n,
            k,
            min_distance,
            no_zero_coord,
            checkpoint,
            budget,
        } => {
            let mut opts = EnumerationOptions::new(n, k);
            opts.min_distance = min_distance;
            opts.forbid_zero_coordinate = no_zero_coord;
            opts.checkpoint = checkpoint;
            opts.budget = budget;
            let codes = enumerate_so_codes(&opts)?;
            for (i, e) in codes.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                let w = e.code.weight_distribution()?;
                println!(
                    "# {} d={} weights={}",
                    e.fingerprint,
                    w.min_distance(),
                    w.to_sparse()
                );
                print!("{}", e.code.to_record());
            }
            eprintln!("{} classes", codes.len());
            Ok(Verdict::Yes)
        }
        Command::FindDesigns {
            code_file,
            v,
            k,
            lambda,
            augmented,
        } => {
            let code = single_code(&code_file)?;
            let spec = DesignSearchSpec::new(v, k, lambda, augmented)?;
            let found = find_designs(&code, &spec)?;
            for (i, f) in found.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                println!(
                    "# {} rows at code coordinates {:?}",
                    f.fingerprint, f.witness.column_order
                );
                print!("{}", f.design.to_record());
            }
            eprintln!("{} designs", found.len());
            Ok(verdict(!found.is_empty()))
        }
        Command::Embed {
            subcode_file,
            supercode_file,
            budget,
        } => {
            let a = single_code(&subcode_file)?;
            let b = single_code(&supercode_file)?;
            match find_embedding(&a, &b, budget)? {
                Some(perm) => {
                    let image: Vec<String> = perm.iter().map(usize::to_string).collect();
                    println!("embedded: coordinate i goes to {}", image.join(" "));
                    Ok(Verdict::Yes)
                }
                None => {
                    println!("not embedded");
                    Ok(Verdict::No)
                }
            }
        }
        Command::Classify {
            designs,
            out,
            enumerate_max_dim,
        } => {
            let ingested = catalog::ingest_designs(&designs)?;
            report_errors(&ingested.errors);
            if ingested.designs.is_empty() {
                return Err(Error::InvalidDesign("no valid designs in the input".into()));
            }
            let opts = ClassifyOptions {
                enumerate_max_dim,
                ..ClassifyOptions::default()
            };
            let c = catalog::classify_to_dir(&ingested.designs, &opts, &out)?;
            println!(
                "{} designs ({} duplicate records), {} codes, {} embeddings in {}",
                c.designs.len(),
                ingested.duplicates(),
                c.codes.len(),
                c.embeddings.len(),
                out.display()
            );
            Ok(verdict(ingested.errors.is_empty()))
        }
        Command::Closure { seed, out } => {
            let design = match first_object(&seed)? {
                Object::Design(d) => d,
                Object::Code(_) => return Err(usage("the seed file must hold a design record")),
            };
            let spec = DesignSearchSpec::for_params(*design.params());
            let n = spec.code_length();
            fs::create_dir_all(&out)?;
            let mut opts = EnumerationOptions::new(n, n / 2);
            opts.min_distance = 4;
            opts.forbid_zero_coordinate = true;
            opts.checkpoint = Some(out.join("targets.checkpoint"));
            let targets: Vec<LinearCode> = enumerate_so_codes(&opts)?
                .into_iter()
                .map(|e| e.code)
                .collect();
            let result = closure(&design, &targets)?;
            Catalog::from_closure(&design, &result)?.save(&out)?;
            println!(
                "{} designs, {} codes, {} edges in {}",
                result.designs.len(),
                result.codes.len(),
                result.edges.len(),
                out.display()
            );
            Ok(Verdict::Yes)
        }
        Command::Report { catalog, kind } => {
            let kind: ReportKind = kind.parse()?;
            print!("{}", Catalog::load(&catalog)?.report(kind)?);
            Ok(Verdict::Yes)
        }
    }
}

enum Object {
    Design(Design),
    Code(LinearCode),
}

impl Object {
    fn from_record(record: &RawRecord) -> Result<Object, Error> {
        match record.kind() {
            Some(RecordKind::Design) => Ok(Object::Design(Design::from_record(record)?)),
            Some(RecordKind::Code) => Ok(Object::Code(LinearCode::from_record(record)?)),
            None => Err(record.error("unknown record kind")),
        }
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn usage(message: &str) -> Error {
    Error::Parse {
        line: 0,
        message: message.into(),
    }
}

fn report_errors(errors: &[Error]) {
    for e in errors {
        eprintln!("rejected: {e}");
    }
}

/// Every record of a file; the first malformed one is an error.
fn read_records(path: &Path) -> Result<Vec<RawRecord>, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let records = split_records(&text)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    if records.is_empty() {
        return Err(usage(&format!("{} holds no records", path.display())));
    }
    Ok(records)
}

fn first_object(path: &Path) -> Result<Object, Error> {
    Object::from_record(&read_records(path)?[0])
}

fn read_codes(path: &Path) -> Result<Vec<LinearCode>, Error> {
    read_records(path)?
        .iter()
        .map(LinearCode::from_record)
        .collect()
}

fn single_code(path: &Path) -> Result<LinearCode, Error> {
    let mut codes = read_codes(path)?;
    if codes.len() != 1 {
        return Err(usage(&format!(
            "{} must hold exactly one code record",
            path.display()
        )));
    }
    Ok(codes.remove(0))
}

fn validate(path: &Path) -> Result<Verdict, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut bad = 0;
    let mut total = 0;
    for record in split_records(&text) {
        total += 1;
        match record.and_then(|r| Object::from_record(&r).map(|o| (r.line, o))) {
            Ok((line, Object::Design(d))) => println!("line {line}: valid design {}", d.params()),
            Ok((line, Object::Code(c))) => {
                let so = if c.is_self_orthogonal() {
                    "self-orthogonal"
                } else {
                    "not self-orthogonal"
                };
                println!(
                    "line {line}: valid ({},{}) code, {so}",
                    c.length(),
                    c.dimension()
                );
            }
            Err(e) => {
                bad += 1;
                println!("{e}");
            }
        }
    }
    println!("{} of {total} records valid", total - bad);
    Ok(verdict(bad == 0 && total > 0))
}
