//! Randomized property suites over decorated surfaces.

use std::sync::Arc;

use rand::Rng;

use crate::gcore::FiniteGroup;

use super::equivalence::random_base;
use super::{dual_graph_rep, evaluate_word, intersect_path, normal_form, random_rep, random_word, Decoration, DecorError};
use super::IdealSurfaceTriangulation;

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SuiteReport {
    pub cases: usize,
    /// description of the first failing case
    pub failure: Option<String>,
}

/// Random words of length up to `max_len`: the normal form must evaluate like the word
/// and be a fixed point of `normal_form`.
pub fn normal_form_suite<R: Rng>(
    surface: &Arc<IdealSurfaceTriangulation>,
    group: &Arc<FiniteGroup>,
    cases: usize,
    max_len: usize,
    rng: &mut R,
) -> Result<SuiteReport, DecorError> {
    let mut report = SuiteReport::default();
    for k in 0..cases {
        let rho = random_rep(surface, group, rng)?;
        let src = Decoration::new(&rho, random_base(surface.n_vertices(), rng))?;
        let len = rng.gen_range(0..=max_len);
        let w = random_word(&src, len, rng);
        let nf = normal_form(&w)?;
        report.cases += 1;
        if evaluate_word(&w)?.signature() != evaluate_word(&nf.to_word())?.signature() {
            report.failure = Some(format!("case {k}: evaluation differs for word of length {len}"));
            break;
        }
        if normal_form(&nf.to_word())? != nf {
            report.failure = Some(format!("case {k}: normal form is not idempotent"));
            break;
        }
    }
    Ok(report)
}

/// Random representations: intersecting each edge with the dual graph must give ρ back.
pub fn bijection_suite<R: Rng>(
    surface: &Arc<IdealSurfaceTriangulation>,
    group: &Arc<FiniteGroup>,
    cases: usize,
    rng: &mut R,
) -> Result<SuiteReport, DecorError> {
    let mut report = SuiteReport::default();
    for k in 0..cases {
        let rho = random_rep(surface, group, rng)?;
        let t = dual_graph_rep(&rho);
        report.cases += 1;
        for o in surface.oriented_edges() {
            if intersect_path(group, &[o], &t)? != rho.value(o) {
                report.failure = Some(format!("case {k}: edge {} disagrees", o.edge()));
                return Ok(report);
            }
        }
    }
    Ok(report)
}
