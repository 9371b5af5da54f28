use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::canon::{code_canonical, CanonicalForm};
use crate::design::Design;
use crate::error::Result;
use crate::lincode::LinearCode;

use super::{
    enumerate_so_codes, find_designs, is_embedded, prefilter, DesignSearchSpec, EnumerationOptions,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClosureEdge {
    /// The design's rows generate the code.
    PointCode {
        design: CanonicalForm,
        code: CanonicalForm,
    },
    /// The code contains the design's (augmented) incidence matrix.
    Contains {
        code: CanonicalForm,
        design: CanonicalForm,
    },
    /// The first code is equivalent to a subcode of the second.
    Embeds {
        sub: CanonicalForm,
        sup: CanonicalForm,
    },
}

/// Everything reached from a seed design.
#[derive(Clone, Debug, Default)]
pub struct Closure {
    pub designs: BTreeMap<CanonicalForm, Design>,
    pub codes: BTreeMap<CanonicalForm, LinearCode>,
    pub edges: BTreeSet<ClosureEdge>,
}

/// Filtered maximal-dimension codes the closure may hop into: self-orthogonal
/// codes of the point-code length, dimension `floor(n / 2)`, distance at
/// least 4 and no zero coordinate.
pub fn closure_targets(spec: &DesignSearchSpec) -> Result<Vec<LinearCode>> {
    let n = spec.code_length();
    let mut opts = EnumerationOptions::new(n, n / 2);
    opts.min_distance = 4;
    opts.forbid_zero_coordinate = true;
    Ok(enumerate_so_codes(&opts)?
        .into_iter()
        .map(|e| e.code)
        .collect())
}

/// Repeats until nothing new appears: take the point code of every known
/// design, search every known code for designs, and hop from each code to
/// every target code it embeds in.
pub fn closure(seed: &Design, targets: &[LinearCode]) -> Result<Closure> {
    let spec = DesignSearchSpec::for_params(*seed.params());
    let mode = if spec.augmented {
        crate::design::PointCode::Augmented
    } else {
        crate::design::PointCode::Plain
    };
    let labeled_targets: Vec<(CanonicalForm, &LinearCode)> =
        targets.iter().map(|t| (code_canonical(t), t)).collect();

    let mut out = Closure::default();
    let mut design_queue: VecDeque<(CanonicalForm, Design)> = VecDeque::new();
    let mut code_queue: VecDeque<CanonicalForm> = VecDeque::new();
    let seed_fp = seed.canonical_form();
    out.designs.insert(seed_fp.clone(), seed.clone());
    design_queue.push_back((seed_fp, seed.clone()));

    loop {
        if let Some((dfp, d)) = design_queue.pop_front() {
            let code = d.point_code(mode);
            let cfp = code_canonical(&code);
            out.edges.insert(ClosureEdge::PointCode {
                design: dfp,
                code: cfp.clone(),
            });
            if !out.codes.contains_key(&cfp) {
                out.codes.insert(cfp.clone(), code);
                code_queue.push_back(cfp);
            }
            continue;
        }
        let Some(cfp) = code_queue.pop_front() else {
            break;
        };
        let code = out.codes[&cfp].clone();
        if prefilter(&code, &spec)? {
            for found in find_designs(&code, &spec)? {
                out.edges.insert(ClosureEdge::Contains {
                    code: cfp.clone(),
                    design: found.fingerprint.clone(),
                });
                if !out.designs.contains_key(&found.fingerprint) {
                    out.designs
                        .insert(found.fingerprint.clone(), found.design.clone());
                    design_queue.push_back((found.fingerprint, found.design));
                }
            }
        }
        for (tfp, target) in &labeled_targets {
            if *tfp == cfp || target.dimension() <= code.dimension() {
                continue;
            }
            if is_embedded(&code, target)? {
                out.edges.insert(ClosureEdge::Embeds {
                    sub: cfp.clone(),
                    sup: tfp.clone(),
                });
                if !out.codes.contains_key(tfp) {
                    out.codes.insert(tfp.clone(), (*target).clone());
                    code_queue.push_back(tfp.clone());
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::pairs_design_421;

    #[test]
    fn four_point_closure_is_one_design_one_code() {
        let seed = pairs_design_421();
        let spec = DesignSearchSpec::for_params(*seed.params());
        let targets = closure_targets(&spec).unwrap();
        assert_eq!(targets.len(), 1);
        let c = closure(&seed, &targets).unwrap();
        assert_eq!(c.designs.len(), 1);
        assert_eq!(c.codes.len(), 1);
    }
}
