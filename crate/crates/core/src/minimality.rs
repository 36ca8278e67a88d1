//! The singular-point criterion: a planar field whose generic solution is
//! strongly minimal can be certified by a singular point on no invariant curve.

use std::fmt;

use crate::darboux::{darboux_search, Completeness, DarbouxReport};
use crate::error::Result;
use crate::vectorfield::{singular_points, SingularLocus, SingularPoint, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    StronglyMinimalCertified,
    CriterionFails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::StronglyMinimalCertified => "STRONGLY_MINIMAL_CERTIFIED",
            Verdict::CriterionFails => "CRITERION_FAILS",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalityReport {
    pub verdict: Verdict,
    pub witness: Option<SingularPoint>,
    pub singular_points: SingularLocus,
    pub curves_checked: DarbouxReport,
    pub caveats: Vec<String>,
}

/// Whether some reported invariant curve passes through `p`.
/// A family always has a member through every point.
pub fn lies_on_curve(report: &DarbouxReport, p: &SingularPoint) -> bool {
    !report.families.is_empty()
        || report
            .curves
            .iter()
            .any(|c| c.poly.evaluate_at(&p.coordinates).is_zero())
}

pub fn check_strong_minimality(s: &VectorField, max_degree: u32) -> Result<MinimalityReport> {
    let locus = singular_points(s)?;
    let report = darboux_search(s, max_degree)?;
    let mut caveats = vec![
        "criterion-sufficient-not-necessary".to_string(),
        format!("curve-search-degree-bound:{max_degree}"),
    ];
    if locus.discarded_nonrational {
        caveats.push("nonrational-singular-points-discarded".into());
    }
    if locus.uncertain {
        caveats.push("singular-locus-undecided".into());
    }
    if !report.families.is_empty() {
        caveats.push("invariant-curve-family".into());
    }
    if !report.branching_conditions.is_empty() {
        caveats.push("generic-parameters-only".into());
    }
    let partial = report.completeness == Completeness::Partial;
    if partial {
        caveats.push("curve-search-partial".into());
    }
    let witness = locus
        .points
        .iter()
        .find(|p| !lies_on_curve(&report, p))
        .cloned();
    let verdict = match &witness {
        Some(_) if !partial => Verdict::StronglyMinimalCertified,
        Some(_) => Verdict::Inconclusive,
        None if locus.points.is_empty() => {
            caveats.push("no-rational-singular-point".into());
            Verdict::Inconclusive
        }
        None if locus.discarded_nonrational || locus.uncertain => Verdict::Inconclusive,
        None => Verdict::CriterionFails,
    };
    Ok(MinimalityReport {
        verdict,
        witness: if verdict == Verdict::StronglyMinimalCertified { witness } else { None },
        singular_points: locus,
        curves_checked: report,
        caveats,
    })
}
