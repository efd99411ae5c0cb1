//! Text and JSON rendering for every report type. JSON output keeps all
//! polynomials as display strings in the session grammar, so reports are
//! machine-readable and round-trip through the expression parser.

use serde::Serialize;
use serde_json::json;

use crate::center::{CenterReport, N4Report, Verdict};
use crate::clifford::{DiagonalizationTrace, GenericCliffordReport};
use crate::closure::{CertifyOutcome, DerivationStep};
use crate::discr::{Discriminant, Provenance, VerificationReport};
use crate::poly::{CoefPoly, PolyMatrix};

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Polynomial => "polynomial",
        Verdict::NotPolynomial => "not polynomial",
    }
}

fn int_grid(rows: &[Vec<i64>]) -> String {
    let widths: Vec<usize> = (0..rows.first().map(|r| r.len()).unwrap_or(0))
        .map(|j| rows.iter().map(|r| r[j].to_string().len()).max().unwrap_or(1))
        .collect();
    let mut out = String::new();
    for row in rows {
        out.push_str("  [ ");
        for (j, v) in row.iter().enumerate() {
            out.push_str(&format!("{:>width$}", v, width = widths[j]));
            if j + 1 < row.len() {
                out.push_str("  ");
            }
        }
        out.push_str(" ]\n");
    }
    out
}

pub fn center_text(report: &CenterReport, names: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("center analysis for n = {}\n\n", report.n));
    out.push_str("orders d[i][j]:\n");
    out.push_str(&int_grid(
        &report
            .d_matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect::<Vec<_>>(),
    ));
    out.push_str("\nL (componentwise lcm of the order rows):\n  ");
    out.push_str(
        &report
            .l_vector
            .iter()
            .enumerate()
            .map(|(i, l)| format!("L{} = {}", i + 1, l))
            .collect::<Vec<_>>()
            .join(", "),
    );
    out.push_str("\n\nexponent matrix (k[i][j] * L[i] / d[i][j]):\n");
    out.push_str(&int_grid(&report.ybar));
    out.push('\n');
    for b in &report.blocks {
        out.push_str(&format!(
            "block p = {}, level {} on indices {{{}}}:\n",
            b.prime,
            b.level,
            b.indices
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&int_grid(&b.entries));
        out.push_str(&format!("  det mod {} = {}\n", b.prime, b.det_mod_p));
        if !b.kernel.is_empty() {
            for v in &b.kernel {
                out.push_str(&format!(
                    "  kernel vector: ({})\n",
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
        }
        out.push('\n');
    }
    out.push_str(&format!("verdict: {}\n", verdict_str(report.verdict)));
    if let Some(gens) = &report.center_generators {
        let parts: Vec<String> = gens
            .iter()
            .map(|&(i, l)| {
                if l == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], l)
                }
            })
            .collect();
        out.push_str(&format!("center generators: {}\n", parts.join(", ")));
    }
    out
}

pub fn center_json(report: &CenterReport, names: &[String]) -> serde_json::Value {
    json!({
        "kind": "center-report",
        "names": names,
        "report": report,
    })
}

pub fn n4_text(report: &N4Report) -> String {
    let mut out = String::new();
    out.push_str("n = 4 fast path:\n");
    if report.primes.is_empty() {
        out.push_str("  every prime is trivial for this grid\n");
    }
    for p in &report.primes {
        let clause = match &p.clause {
            Some(crate::center::N4Clause::AllUnitsAtP) => "no L divisible by p".to_string(),
            Some(crate::center::N4Clause::FullBlock { level }) => {
                format!("full 4x4 block at level {level} with nonzero determinant")
            }
            Some(crate::center::N4Clause::DisjointPairs { level }) => {
                format!("two disjoint pairs separated at level {level}")
            }
            None => "no clause applies".to_string(),
        };
        out.push_str(&format!("  p = {}: {}\n", p.prime, clause));
    }
    out.push_str(&format!("verdict: {}\n", verdict_str(report.verdict)));
    out
}

#[derive(Debug, Serialize)]
pub struct FactorDoc {
    pub factor: String,
    pub multiplicity: u32,
}

#[derive(Debug, Serialize)]
pub struct DiscriminantDoc {
    pub method: String,
    pub rank: usize,
    pub raw: String,
    pub normalized: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorDoc>>,
}

pub fn discriminant_doc(d: &Discriminant, rank: usize, factored: bool) -> DiscriminantDoc {
    let method = match &d.provenance {
        Provenance::BruteForce => "brute".to_string(),
        Provenance::ClosedForm(k) => format!("formula:{}", k.name()),
    };
    let factors = if factored {
        Some(
            d.value
                .squarefree_factors()
                .into_iter()
                .map(|(f, e)| FactorDoc {
                    factor: f.to_string(),
                    multiplicity: e,
                })
                .collect(),
        )
    } else {
        None
    };
    DiscriminantDoc {
        method,
        rank,
        raw: d.raw.to_string(),
        normalized: d.value.to_string(),
        factors,
    }
}

pub fn discriminant_text(doc: &DiscriminantDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("method: {}\n", doc.method));
    out.push_str(&format!("rank over the center: {}\n", doc.rank));
    out.push_str(&format!("raw determinant: {}\n", doc.raw));
    out.push_str(&format!("normalized (leading coefficient 1): {}\n", doc.normalized));
    if let Some(fs) = &doc.factors {
        out.push_str("square-free factors:\n");
        for f in fs {
            out.push_str(&format!("  ({})^{}\n", f.factor, f.multiplicity));
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub formula: String,
    pub matched: bool,
    pub brute_normalized: String,
    pub formula_normalized: String,
}

pub fn verify_doc(report: &VerificationReport) -> VerifyDoc {
    let name = match &report.closed.provenance {
        Provenance::ClosedForm(k) => k.name().to_string(),
        Provenance::BruteForce => "brute".to_string(),
    };
    VerifyDoc {
        formula: name,
        matched: report.matched,
        brute_normalized: report.brute.value.to_string(),
        formula_normalized: report.closed.value.to_string(),
    }
}

pub fn verify_text(doc: &VerifyDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("formula: {}\n", doc.formula));
    out.push_str(&format!("oracle:  {}\n", doc.brute_normalized));
    out.push_str(&format!("closed:  {}\n", doc.formula_normalized));
    out.push_str(if doc.matched {
        "match: the oracle agrees with the closed form up to a unit\n"
    } else {
        "MISMATCH: the oracle disagrees with the closed form\n"
    });
    out
}

#[derive(Debug, Serialize)]
pub struct ClosureDoc {
    pub outcome: String,
    pub rounds: u32,
    pub generators: Vec<GeneratorStatus>,
    pub certified_elements: Vec<String>,
    pub certificate: Vec<DerivationStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct GeneratorStatus {
    pub name: String,
    pub known: bool,
}

pub fn closure_doc(outcome: &CertifyOutcome) -> ClosureDoc {
    let state = outcome.state();
    let generators = state
        .generator_names()
        .iter()
        .zip(state.known_generators())
        .map(|(n, &k)| GeneratorStatus {
            name: n.clone(),
            known: k,
        })
        .collect();
    let statement = if outcome.is_certified() {
        Some(
            "the divisor closure of the discriminant is the whole algebra; \
             the algebra is strongly cancellative and its unipotent \
             automorphism group is trivial"
                .to_string(),
        )
    } else {
        None
    };
    ClosureDoc {
        outcome: if outcome.is_certified() {
            "certified-full".into()
        } else {
            "unknown".into()
        },
        rounds: state.round(),
        generators,
        certified_elements: state
            .known_elements()
            .iter()
            .map(|e| e.to_string())
            .collect(),
        certificate: state.certificate.clone(),
        statement,
    }
}

pub fn closure_text(doc: &ClosureDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("outcome: {} after {} rounds\n", doc.outcome, doc.rounds));
    for g in &doc.generators {
        out.push_str(&format!(
            "  {}: {}\n",
            g.name,
            if g.known { "certified divisor" } else { "not certified" }
        ));
    }
    out.push_str("derivation log:\n");
    for s in &doc.certificate {
        out.push_str(&format!(
            "  round {} [{:?}] {} => {}\n",
            s.round,
            s.rule,
            s.inputs.join(" ; "),
            s.output
        ));
    }
    if let Some(st) = &doc.statement {
        out.push_str(&format!("conclusion: {}\n", st));
    } else {
        out.push_str("conclusion: inconclusive; this is not a negative certificate\n");
    }
    out
}

#[derive(Debug, Serialize)]
pub struct DiagonalizeDoc {
    pub det: String,
    pub stages: Vec<StageDoc>,
    pub diagonal: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct StageDoc {
    pub stage: usize,
    pub multipliers: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub inverted: Vec<String>,
    pub det: String,
}

pub fn diagonalize_doc(trace: &DiagonalizationTrace) -> DiagonalizeDoc {
    DiagonalizeDoc {
        det: trace.det.to_string(),
        stages: trace
            .stages
            .iter()
            .map(|s| StageDoc {
                stage: s.stage,
                multipliers: s.multipliers.iter().map(|m| m.to_string()).collect(),
                matrix: s
                    .matrix
                    .iter()
                    .map(|row| row.iter().map(|e| e.to_string()).collect())
                    .collect(),
                inverted: s.inverted.iter().map(|p| p.to_string()).collect(),
                det: s.det.to_string(),
            })
            .collect(),
        diagonal: trace.diagonal.iter().map(|d| d.to_string()).collect(),
    }
}

pub fn diagonalize_text(doc: &DiagonalizeDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("determinant (invariant across stages): {}\n\n", doc.det));
    for s in &doc.stages {
        out.push_str(&format!("stage {}:\n", s.stage));
        if !s.multipliers.is_empty() {
            out.push_str(&format!("  row multipliers: {}\n", s.multipliers.join(", ")));
        }
        if !s.inverted.is_empty() {
            out.push_str(&format!("  inverted pivots: {}\n", s.inverted.join(", ")));
        }
        for row in &s.matrix {
            out.push_str(&format!("  [ {} ]\n", row.join("  ")));
        }
        out.push_str(&format!("  det = {}\n\n", s.det));
    }
    out.push_str(&format!("final diagonal: {}\n", doc.diagonal.join(", ")));
    out
}

#[derive(Debug, Serialize)]
pub struct HilbertDoc {
    pub series: String,
    pub relation_vars: usize,
    pub dimensions: Vec<DimensionDoc>,
    pub checked_pairs: Vec<(usize, usize)>,
    pub regularity_degrees: Vec<usize>,
    pub all_match: bool,
}

#[derive(Debug, Serialize)]
pub struct DimensionDoc {
    pub degree: usize,
    pub series: String,
    pub enumerated: String,
}

pub fn hilbert_doc(report: &GenericCliffordReport) -> HilbertDoc {
    let all_match = report.dimensions.iter().all(|(_, s, e)| s == e);
    HilbertDoc {
        series: report.series.to_string(),
        relation_vars: report.spec.w,
        dimensions: report
            .dimensions
            .iter()
            .map(|(d, s, e)| DimensionDoc {
                degree: *d,
                series: s.to_string(),
                enumerated: e.to_string(),
            })
            .collect(),
        checked_pairs: report
            .checked_pairs
            .iter()
            .map(|&(i, j)| (i + 1, j + 1))
            .collect(),
        regularity_degrees: report.regularity_degrees.clone(),
        all_match,
    }
}

pub fn hilbert_text(doc: &HilbertDoc) -> String {
    let mut out = String::new();
    out.push_str(&format!("graded dimension series: {}\n", doc.series));
    out.push_str(&format!("relation variables: {}\n\n", doc.relation_vars));
    out.push_str("degree  series  enumerated\n");
    for d in &doc.dimensions {
        out.push_str(&format!(
            "{:>6}  {:>6}  {:>10}\n",
            d.degree, d.series, d.enumerated
        ));
    }
    out.push_str(&format!(
        "\nseries vs enumeration: {}\n",
        if doc.all_match { "all degrees match" } else { "MISMATCH" }
    ));
    if !doc.checked_pairs.is_empty() {
        out.push_str(&format!(
            "pair variables checked central with clean quotients: {}\n",
            doc.checked_pairs
                .iter()
                .map(|(i, j)| format!("t{}{}", i, j))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    out
}

/// Large matrices for verbose output.
pub fn matrix_text(m: &PolyMatrix) -> String {
    m.to_string()
}

pub fn poly_grid_json(m: &PolyMatrix) -> serde_json::Value {
    json!(m.to_string_grid())
}

pub fn poly_list_json(ps: &[CoefPoly]) -> serde_json::Value {
    json!(ps.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}
