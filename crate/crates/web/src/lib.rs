//! Browser bindings. Each exported function takes record text and returns a
//! printable report; the plain-Rust versions in [`ops`] are what the
//! bindings wrap and what native tests exercise.

use wasm_bindgen::prelude::*;

pub mod ops {
    use std::fmt::Write;

    use sodesign::records::{split_records, RecordKind};
    use sodesign::search::{find_designs, DesignSearchSpec};
    use sodesign::{are_equivalent, Design, Error, LinearCode, PointCode, Result};

    /// Designs are searched only in codes up to this length, so that a
    /// page never stalls on a long search.
    pub const MAX_SEARCH_LENGTH: usize = 24;

    enum Object {
        Design(Design),
        Code(LinearCode),
    }

    fn first_object(text: &str) -> Result<Object> {
        let record = split_records(text)
            .into_iter()
            .next()
            .ok_or(Error::Parse {
                line: 1,
                message: "no record found".into(),
            })??;
        match record.kind() {
            Some(RecordKind::Design) => Ok(Object::Design(Design::from_record(&record)?)),
            Some(RecordKind::Code) => Ok(Object::Code(LinearCode::from_record(&record)?)),
            None => Err(record.error("unknown record kind")),
        }
    }

    fn describe_code(out: &mut String, code: &LinearCode) -> Result<()> {
        let w = code.weight_distribution()?;
        let so = if code.is_self_orthogonal() {
            "self-orthogonal"
        } else {
            "not self-orthogonal"
        };
        writeln!(
            out,
            "[{}, {}, {}] code, {so}",
            code.length(),
            code.dimension(),
            w.min_distance()
        )
        .unwrap();
        writeln!(out, "weights {}", w.to_sparse()).unwrap();
        Ok(())
    }

    /// Parameters, point code and weight distribution of a design, or the
    /// weight distribution of a code.
    pub fn analyze(text: &str) -> Result<String> {
        let mut out = String::new();
        match first_object(text)? {
            Object::Design(d) => {
                let (mode, code) = d.default_point_code();
                let how = match mode {
                    PointCode::Plain => "incidence rows",
                    PointCode::Augmented => "incidence rows with an all-ones column",
                };
                writeln!(out, "design {}", d.params()).unwrap();
                writeln!(out, "fingerprint {}", d.canonical_form()).unwrap();
                writeln!(out, "point code spanned by {how}:").unwrap();
                describe_code(&mut out, &code)?;
            }
            Object::Code(c) => {
                describe_code(&mut out, &c)?;
                writeln!(out, "\n{}", c.to_record().trim_end()).unwrap();
            }
        }
        Ok(out)
    }

    /// All non-isomorphic designs whose rows lie in the code.
    pub fn designs_in_code(
        text: &str,
        v: usize,
        k: usize,
        lambda: usize,
        augmented: bool,
    ) -> Result<String> {
        let Object::Code(code) = first_object(text)? else {
            return Err(Error::Parse {
                line: 1,
                message: "expected a code record".into(),
            });
        };
        if code.length() > MAX_SEARCH_LENGTH {
            return Err(Error::Parse {
                line: 1,
                message: format!("the demo searches codes of length at most {MAX_SEARCH_LENGTH}"),
            });
        }
        let found = find_designs(&code, &DesignSearchSpec::new(v, k, lambda, augmented)?)?;
        let mut out = format!("{} non-isomorphic designs\n", found.len());
        for f in &found {
            writeln!(
                out,
                "\n# {}\n{}",
                f.fingerprint,
                f.design.to_record().trim_end()
            )
            .unwrap();
        }
        Ok(out)
    }

    /// Whether two designs, or two codes, are isomorphic.
    pub fn equivalent(a: &str, b: &str) -> Result<bool> {
        match (first_object(a)?, first_object(b)?) {
            (Object::Design(a), Object::Design(b)) => Ok(a.canonical_form() == b.canonical_form()),
            (Object::Code(a), Object::Code(b)) => are_equivalent(&a, &b),
            _ => Err(Error::Parse {
                line: 1,
                message: "cannot compare a design with a code".into(),
            }),
        }
    }
}

fn js(e: sodesign::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn analyze(text: &str) -> Result<String, JsError> {
    ops::analyze(text).map_err(js)
}

#[wasm_bindgen(js_name = designsInCode)]
pub fn designs_in_code(
    text: &str,
    v: usize,
    k: usize,
    lambda: usize,
    augmented: bool,
) -> Result<String, JsError> {
    ops::designs_in_code(text, v, k, lambda, augmented).map_err(js)
}

#[wasm_bindgen]
pub fn equivalent(a: &str, b: &str) -> Result<bool, JsError> {
    ops::equivalent(a, b).map_err(js)
}
