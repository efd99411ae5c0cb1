//! Orchestration shared by the CLI and the C ABI: document to
//! presentation to free-module data, with one error type that carries
//! the process exit code.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Mode, Presentation};
use crate::arith::UnityRoot;
use crate::center::{build_center_report, CenterReport, Verdict};
use crate::discr::{ClosedFormKind, FreeModuleData};
use crate::input::{AlgKind, Document, InputError};
use crate::Limits;

/// Stable failure classes, matching the CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureClass {
    /// Malformed input (exit 1).
    Parse,
    /// Valid syntax but unusable hypotheses (exit 2).
    Hypothesis,
}

#[derive(Debug, Error, Clone)]
#[error("{message}")]
pub struct SessionError {
    pub class: FailureClass,
    pub message: String,
}

impl SessionError {
    pub fn parse(message: impl Into<String>) -> SessionError {
        SessionError {
            class: FailureClass::Parse,
            message: message.into(),
        }
    }

    pub fn hypothesis(message: impl Into<String>) -> SessionError {
        SessionError {
            class: FailureClass::Hypothesis,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            FailureClass::Parse => 1,
            FailureClass::Hypothesis => 2,
        }
    }
}

impl From<InputError> for SessionError {
    fn from(e: InputError) -> Self {
        SessionError::parse(e.to_string())
    }
}

pub fn parse_document(text: &str) -> Result<(Document, Limits), SessionError> {
    let doc = Document::parse(text)?;
    let limits = doc.limits(&Limits::default().with_env_overrides());
    Ok((doc, limits))
}

/// Builds and validates the presentation.
pub fn presentation(doc: &Document, limits: &Limits) -> Result<Arc<Presentation>, SessionError> {
    let pres = doc
        .presentation(limits)
        .map_err(|e| SessionError::hypothesis(e.to_string()))?;
    let violations = pres.validate();
    if !violations.is_empty() {
        let rendered: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(SessionError::hypothesis(format!(
            "invalid presentation:\n  {}",
            rendered.join("\n  ")
        )));
    }
    Ok(pres)
}

/// The free-module data for a document. Powered presentations are free
/// over the parameter ring; the rest go over the subalgebra generated by
/// the x_i^{L_i}, which is central and carries the monomial basis whether
/// or not it is the whole center.
pub fn module_data(
    doc: &Document,
    pres: &Arc<Presentation>,
    limits: &Limits,
) -> Result<(FreeModuleData, Option<CenterReport>), SessionError> {
    match pres.mode() {
        Mode::Clifford | Mode::Bounded => {
            let fm = FreeModuleData::over_parameters(pres, limits)
                .map_err(|e| SessionError::hypothesis(e.to_string()))?;
            Ok((fm, None))
        }
        Mode::Skew | Mode::WeylLike => {
            let report =
                build_center_report(&doc.q).map_err(|e| SessionError::hypothesis(e.to_string()))?;
            let fm = FreeModuleData::over_center(pres, &report.l_vector, limits)
                .map_err(|e| SessionError::hypothesis(e.to_string()))?;
            Ok((fm, Some(report)))
        }
    }
}

/// Whether the module sits over a proper central subalgebra rather than
/// the full center.
pub fn over_proper_subalgebra(report: &Option<CenterReport>) -> bool {
    report
        .as_ref()
        .is_some_and(|r| r.verdict != Verdict::Polynomial)
}

/// The closed form matching a document's shape.
pub fn auto_formula(
    doc: &Document,
    pres: &Arc<Presentation>,
) -> Result<ClosedFormKind, SessionError> {
    match doc.kind {
        AlgKind::Skew => Ok(ClosedFormKind::SkewMonomial),
        AlgKind::QWeyl => Ok(if doc.powers.is_some() {
            ClosedFormKind::TwoGenWeylBounded
        } else {
            ClosedFormKind::TwoGenWeyl
        }),
        AlgKind::Clifford | AlgKind::GenericClifford => Ok(ClosedFormKind::CliffordDet),
        AlgKind::Weyl => {
            let all_minus_one = (0..pres.n())
                .all(|i| ((i + 1)..pres.n()).all(|j| *pres.q(i, j) == UnityRoot::minus_one()));
            if all_minus_one {
                Ok(ClosedFormKind::CliffordDet)
            } else {
                Err(SessionError::hypothesis(
                    "no closed form covers this filtered presentation; use the brute-force oracle",
                ))
            }
        }
    }
}
