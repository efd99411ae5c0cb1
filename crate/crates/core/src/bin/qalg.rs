//! Command-line front end: parse an `.alg` document and run center
//! analysis, discriminants, formula verification, diagonalization,
//! divisor-closure certification or Hilbert-series checks on it.
//!
//! Exit codes: 0 success, 1 parse error, 2 hypothesis or validation
//! failure, 3 verification mismatch, 4 closure unknown.

use std::path::PathBuf;
use std::process::exit;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use qalg::algebra::Presentation;
use qalg::center::{build_center_report, fast_path_n4, lift_center, Verdict};
use qalg::clifford::{diagonalize, generic_clifford, QuadraticForm};
use qalg::closure::certify_dds_full;
use qalg::discr::{
    anticommutator_matrix, closed_form, verify_formula, ClosedFormKind, Discriminant,
    FreeModuleData,
};
use qalg::expr::{eval_polynomial, EvalContext};
use qalg::input::{AlgKind, Document};
use qalg::{report, Limits};

#[derive(Parser)]
#[command(
    name = "qalg",
    version,
    about = "Exact discriminants and centers of quantum algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also print large intermediate matrices.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Method {
    #[default]
    Brute,
    Formula,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum FormulaName {
    /// Pick the formula matching the document kind.
    #[default]
    Auto,
    /// Skew rings with central monomial powers.
    SkewMonomial,
    /// Two generators with y x = q x y + a.
    QWeyl,
    /// The bounded two-generator quotient with x^n, y^n fixed.
    QWeylBounded,
    /// Determinant power of the anticommutator matrix.
    CliffordDet,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze when the center of the skew ring is a polynomial ring.
    Center { file: PathBuf },
    /// Compute the discriminant over the center.
    Discriminant {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        /// Show the square-free factors of the normalized discriminant.
        #[arg(long)]
        factor: bool,
    },
    /// Check a closed-form discriminant against the brute-force oracle.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        formula: FormulaName,
    },
    /// Diagonalize the quadratic form stage by stage.
    Diagonalize { file: PathBuf },
    /// Certify that the divisor closure of the discriminant reaches the
    /// whole algebra.
    Closure {
        file: PathBuf,
        #[arg(long)]
        max_rounds: Option<u32>,
        /// Substitutions `var=poly` applied to the discriminant first
        /// (transport along a quotient map).
        #[arg(long)]
        substitute: Vec<String>,
    },
    /// Graded dimension series of a generic Clifford algebra, with an
    /// enumeration cross-check.
    Hilbert {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        degree: usize,
    },
}

const EXIT_PARSE: i32 = 1;
const EXIT_HYPOTHESIS: i32 = 2;
const EXIT_MISMATCH: i32 = 3;
const EXIT_UNKNOWN: i32 = 4;

fn fail(code: i32, msg: impl std::fmt::Display) -> ! {
    eprintln!("error: {msg}");
    exit(code);
}

fn load(file: &PathBuf) -> (Document, Limits) {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => fail(EXIT_PARSE, format!("cannot read {}: {e}", file.display())),
    };
    match qalg::session::parse_document(&text) {
        Ok(pair) => pair,
        Err(e) => fail(e.exit_code(), e),
    }
}

fn presentation(doc: &Document, limits: &Limits) -> Arc<Presentation> {
    match qalg::session::presentation(doc, limits) {
        Ok(p) => p,
        Err(e) => fail(e.exit_code(), e),
    }
}

fn module_data(doc: &Document, pres: &Arc<Presentation>, limits: &Limits) -> FreeModuleData {
    match qalg::session::module_data(doc, pres, limits) {
        Ok((fm, report)) => {
            if qalg::session::over_proper_subalgebra(&report) {
                eprintln!(
                    "note: the center is larger than the subalgebra generated by the \
                     L-th powers; the discriminant is taken over that subalgebra"
                );
            }
            fm
        }
        Err(e) => fail(e.exit_code(), e),
    }
}

fn auto_formula(doc: &Document, pres: &Arc<Presentation>) -> ClosedFormKind {
    match qalg::session::auto_formula(doc, pres) {
        Ok(k) => k,
        Err(e) => fail(e.exit_code(), e),
    }
}

/// Halves every entry of a symmetric polynomial matrix.
fn halve(m: &qalg::poly::PolyMatrix) -> qalg::poly::PolyMatrix {
    let half = qalg::arith::rat(1, 2);
    qalg::poly::PolyMatrix::from_fn(
        m.table().clone(),
        m.conductor(),
        m.rows(),
        m.cols(),
        |i, j| m.at(i, j).mul_rat(&half),
    )
}

fn main() {
    let cli = Cli::parse();
    match &cli.command {
        Command::Center { file } => {
            let (doc, limits) = load(file);
            match doc.kind {
                AlgKind::Skew | AlgKind::Weyl | AlgKind::QWeyl => {}
                _ => fail(
                    EXIT_HYPOTHESIS,
                    "center analysis applies to skew, weyl and q-weyl documents",
                ),
            }
            let report = match build_center_report(&doc.q) {
                Ok(r) => r,
                Err(e) => fail(EXIT_HYPOTHESIS, e),
            };
            let mut lifted_names: Option<Vec<String>> = None;
            if (doc.kind == AlgKind::Weyl || doc.kind == AlgKind::QWeyl)
                && report.verdict == Verdict::Polynomial
            {
                let pres = presentation(&doc, &limits);
                if pres.powers().is_none() {
                    match lift_center(&pres, &report) {
                        Ok(lift) => {
                            lifted_names = Some(
                                lift.exponents
                                    .iter()
                                    .enumerate()
                                    .map(|(i, &l)| {
                                        if l == 1 {
                                            doc.names[i].clone()
                                        } else {
                                            format!("{}^{}", doc.names[i], l)
                                        }
                                    })
                                    .collect(),
                            );
                        }
                        Err(e) => fail(EXIT_HYPOTHESIS, e),
                    }
                }
            }
            if cli.json {
                let mut value = report::center_json(&report, &doc.names);
                if let Some(gens) = &lifted_names {
                    value["lifted_center_generators"] = serde_json::json!(gens);
                }
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                print!("{}", report::center_text(&report, &doc.names));
                if doc.n == 4 {
                    if let Ok(n4) = fast_path_n4(&doc.q) {
                        print!("\n{}", report::n4_text(&n4));
                    }
                }
                if let Some(gens) = &lifted_names {
                    println!(
                        "lifted center of the filtered algebra: generated by {}; \
                         the algebra is free over it with the monomial basis below the powers",
                        gens.join(", ")
                    );
                }
            }
        }

        Command::Discriminant {
            file,
            method,
            factor,
        } => {
            let (doc, limits) = load(file);
            let pres = presentation(&doc, &limits);
            let fm = module_data(&doc, &pres, &limits);
            if cli.verbose {
                match fm.gram_matrix() {
                    Ok(g) => eprintln!("trace matrix:\n{}", report::matrix_text(&g)),
                    Err(e) => fail(EXIT_HYPOTHESIS, e),
                }
            }
            let run_brute = || -> Discriminant {
                match fm.brute_discriminant() {
                    Ok(d) => d,
                    Err(e) => fail(EXIT_HYPOTHESIS, e),
                }
            };
            let run_formula = || -> Discriminant {
                let kind = auto_formula(&doc, &pres);
                match closed_form(&fm, kind) {
                    Ok(d) => d,
                    Err(e) => fail(EXIT_HYPOTHESIS, e),
                }
            };
            match method {
                Method::Brute | Method::Formula => {
                    let d = if *method == Method::Brute {
                        run_brute()
                    } else {
                        run_formula()
                    };
                    let doc_d = report::discriminant_doc(&d, fm.rank(), *factor);
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "kind": "discriminant-report",
                                "results": [doc_d],
                            }))
                            .unwrap()
                        );
                    } else {
                        print!("{}", report::discriminant_text(&doc_d));
                    }
                }
                Method::Both => {
                    let b = run_brute();
                    let f = run_formula();
                    let matched = b.value == f.value;
                    let docs = vec![
                        report::discriminant_doc(&b, fm.rank(), *factor),
                        report::discriminant_doc(&f, fm.rank(), *factor),
                    ];
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "kind": "discriminant-report",
                                "results": docs,
                                "matched": matched,
                            }))
                            .unwrap()
                        );
                    } else {
                        for d in &docs {
                            println!("{}", report::discriminant_text(d));
                        }
                        println!(
                            "{}",
                            if matched {
                                "both methods agree after unit normalization"
                            } else {
                                "MISMATCH between the oracle and the closed form"
                            }
                        );
                    }
                    if !matched {
                        exit(EXIT_MISMATCH);
                    }
                }
            }
        }

        Command::Verify { file, formula } => {
            let (doc, limits) = load(file);
            let pres = presentation(&doc, &limits);
            let fm = module_data(&doc, &pres, &limits);
            let kind = match formula {
                FormulaName::Auto => auto_formula(&doc, &pres),
                FormulaName::SkewMonomial => ClosedFormKind::SkewMonomial,
                FormulaName::QWeyl => ClosedFormKind::TwoGenWeyl,
                FormulaName::QWeylBounded => ClosedFormKind::TwoGenWeylBounded,
                FormulaName::CliffordDet => ClosedFormKind::CliffordDet,
            };
            let report_v = match verify_formula(&fm, kind) {
                Ok(r) => r,
                Err(e) => fail(EXIT_HYPOTHESIS, e),
            };
            let doc_v = report::verify_doc(&report_v);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc_v).unwrap());
            } else {
                print!("{}", report::verify_text(&doc_v));
            }
            if !report_v.matched {
                exit(EXIT_MISMATCH);
            }
        }

        Command::Diagonalize { file } => {
            let (doc, limits) = load(file);
            let qf = match doc.kind {
                AlgKind::Clifford => QuadraticForm::new(doc.bilinear_matrix().unwrap()),
                AlgKind::GenericClifford => Ok(doc.generic_spec().unwrap().quadratic_form()),
                AlgKind::Weyl | AlgKind::Skew | AlgKind::QWeyl => {
                    // The anticommutator matrix over the center covers
                    // sign-commuting presentations.
                    let pres = presentation(&doc, &limits);
                    let fm = module_data(&doc, &pres, &limits);
                    match anticommutator_matrix(&fm) {
                        Ok(m) => QuadraticForm::new(halve(&m)),
                        Err(e) => fail(EXIT_HYPOTHESIS, e),
                    }
                }
            };
            let qf = match qf {
                Ok(q) => q,
                Err(e) => fail(EXIT_HYPOTHESIS, e),
            };
            let trace = match diagonalize(&qf) {
                Ok(t) => t,
                Err(e) => fail(EXIT_HYPOTHESIS, e),
            };
            let doc_t = report::diagonalize_doc(&trace);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc_t).unwrap());
            } else {
                print!("{}", report::diagonalize_text(&doc_t));
            }
        }

        Command::Closure {
            file,
            max_rounds,
            substitute,
        } => {
            let (doc, limits) = load(file);
            let pres = presentation(&doc, &limits);
            let fm = module_data(&doc, &pres, &limits);
            let disc = match doc.kind {
                AlgKind::Clifford | AlgKind::GenericClifford => {
                    // The determinant-power closed form is exact here and
                    // far cheaper than the oracle.
                    match closed_form(&fm, ClosedFormKind::CliffordDet) {
                        Ok(d) => d,
                        Err(e) => fail(EXIT_HYPOTHESIS, e),
                    }
                }
                _ => match fm.brute_discriminant() {
                    Ok(d) => d,
                    Err(e) => fail(EXIT_HYPOTHESIS, e),
                },
            };
            let mut value = disc.value.clone();
            let table = fm.center_table().clone();
            for sub in substitute {
                let (lhs, rhs) = match sub.split_once('=') {
                    Some(p) => p,
                    None => fail(EXIT_PARSE, "substitutions look like `var=polynomial`"),
                };
                let var = match table.index_of(lhs.trim()) {
                    Some(v) => v,
                    None => fail(EXIT_PARSE, format!("unknown variable `{}`", lhs.trim())),
                };
                let ctx = EvalContext::plain(table.clone(), doc.conductor);
                let replacement = match eval_polynomial(rhs.trim(), &ctx) {
                    Ok(p) => p,
                    Err(e) => fail(EXIT_PARSE, e),
                };
                value = value.substitute(var, &replacement);
            }
            let rounds = max_rounds.unwrap_or(limits.max_rounds);
            let outcome = match certify_dds_full(&pres, &table, &value, rounds) {
                Ok(o) => o,
                Err(e) => fail(EXIT_HYPOTHESIS, e),
            };
            let doc_c = report::closure_doc(&outcome);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc_c).unwrap());
            } else {
                print!("{}", report::closure_text(&doc_c));
            }
            if !outcome.is_certified() {
                exit(EXIT_UNKNOWN);
            }
        }

        Command::Hilbert { file, degree } => {
            let (doc, limits) = load(file);
            if doc.kind != AlgKind::GenericClifford {
                fail(
                    EXIT_HYPOTHESIS,
                    "the series check applies to generic-clifford documents",
                );
            }
            let report_h = match generic_clifford(doc.n, &doc.excluded, *degree, &limits) {
                Ok(r) => r,
                Err(e) => fail(EXIT_HYPOTHESIS, e),
            };
            let doc_h = report::hilbert_doc(&report_h);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc_h).unwrap());
            } else {
                print!("{}", report::hilbert_text(&doc_h));
            }
            if !doc_h.all_match {
                exit(EXIT_MISMATCH);
            }
        }
    }
}
