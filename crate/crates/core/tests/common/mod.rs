//! Shared helpers for the integration and acceptance suites. Not every
//! suite uses every helper.
#![allow(dead_code)]

use std::sync::Arc;
use std::time::Instant;

use qalg::arith::rat_int;
use qalg::discr::FreeModuleData;
use qalg::input::Document;
use qalg::poly::{CoefPoly, PolyMatrix, VarTable};
use qalg::Limits;

pub const SKEW6: &str = include_str!("../data/skew6.alg");
pub const QWEYL2: &str = include_str!("../data/qweyl_ord2.alg");
pub const QWEYL3: &str = include_str!("../data/qweyl_ord3.alg");
pub const QWEYL4: &str = include_str!("../data/qweyl_ord4.alg");
pub const QWEYL5: &str = include_str!("../data/qweyl_ord5.alg");
pub const MINUS_WEYL2: &str = include_str!("../data/minus_weyl2.alg");
pub const MINUS_WEYL3: &str = include_str!("../data/minus_weyl3.alg");
pub const MINUS_WEYL4: &str = include_str!("../data/minus_weyl4.alg");
pub const FOUR_GEN_T: &str = include_str!("../data/four_gen_t.alg");
pub const CLIFFORD_CROSS: &str = include_str!("../data/clifford_cross.alg");
pub const GENERIC_CLIFF3: &str = include_str!("../data/generic_cliff3.alg");

pub fn all_documents() -> Vec<(&'static str, &'static str)> {
    vec![
        ("skew6", SKEW6),
        ("qweyl_ord2", QWEYL2),
        ("qweyl_ord3", QWEYL3),
        ("qweyl_ord4", QWEYL4),
        ("qweyl_ord5", QWEYL5),
        ("minus_weyl2", MINUS_WEYL2),
        ("minus_weyl3", MINUS_WEYL3),
        ("minus_weyl4", MINUS_WEYL4),
        ("four_gen_t", FOUR_GEN_T),
        ("clifford_cross", CLIFFORD_CROSS),
        ("generic_cliff3", GENERIC_CLIFF3),
    ]
}

pub fn parse(text: &str) -> Document {
    Document::parse(text).expect("shipped document parses")
}

/// Prints the per-criterion pass/fail line the acceptance suite reports.
pub fn criterion<F: FnOnce() -> Result<(), String>>(name: &str, budget_secs: f64, body: F) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => {
            println!("[PASS] {name} ({elapsed:.2}s, budget {budget_secs}s)");
            assert!(
                elapsed <= budget_secs,
                "{name} exceeded its runtime budget: {elapsed:.2}s > {budget_secs}s"
            );
        }
        Err(msg) => {
            println!("[FAIL] {name} ({elapsed:.2}s): {msg}");
            panic!("{name}: {msg}");
        }
    }
}

/// The expected rank-16 trace matrix of the four-generator algebra over
/// k[t], with a = x1^2, b = x2^2, c = x3^2, d = x4^2, in the basis
/// 1, x1, x2, x3, x4, x1x2, x1x3, x1x4, x2x3, x2x4, x3x4, x1x2x3,
/// x1x2x4, x1x3x4, x2x3x4, x1x2x3x4.
pub fn expected_rank16_gram(fm: &FreeModuleData) -> PolyMatrix {
    let table: Arc<VarTable> = fm.center_table().clone();
    let conductor = fm.presentation().conductor();
    let t = CoefPoly::var(table.clone(), table.index_of("t").unwrap(), conductor);
    let gen_var = |g: usize| -> CoefPoly {
        CoefPoly::var(table.clone(), table.central_var_of(g).unwrap(), conductor)
    };
    let a = gen_var(0);
    let b = gen_var(1);
    let c = gen_var(2);
    let d = gen_var(3);
    let scale = |p: &CoefPoly, k: i64| p.mul_rat(&rat_int(k));

    let alpha = scale(&a.mul(&b), -16).add(&scale(&t.pow(2), 8));
    let beta = scale(&a.mul(&b).mul(&c), -16).add(&scale(&c.mul(&t.pow(2)), 8));
    let gamma = scale(&a.mul(&b).mul(&d), -16).add(&scale(&d.mul(&t.pow(2)), 8));
    let delta = scale(&a.mul(&b).mul(&c).mul(&d), 16).sub(&scale(&c.mul(&d).mul(&t.pow(2)), 8));

    let mut entries: Vec<(usize, usize, CoefPoly)> = vec![
        (0, 0, CoefPoly::from_int(table.clone(), conductor, 16)),
        (0, 5, scale(&t, 8)),
        (1, 1, scale(&a, 16)),
        (1, 2, scale(&t, 8)),
        (2, 2, scale(&b, 16)),
        (3, 3, scale(&c, 16)),
        (3, 11, scale(&c.mul(&t), 8)),
        (4, 4, scale(&d, 16)),
        (4, 12, scale(&d.mul(&t), 8)),
        (5, 5, alpha),
        (6, 6, scale(&a.mul(&c), 16)),
        (6, 8, scale(&c.mul(&t), 8)),
        (7, 7, scale(&a.mul(&d), -16)),
        (7, 9, scale(&d.mul(&t), -8)),
        (8, 8, scale(&b.mul(&c), 16)),
        (9, 9, scale(&b.mul(&d), -16)),
        (10, 10, scale(&c.mul(&d), -16)),
        (10, 15, scale(&c.mul(&d).mul(&t), -8)),
        (11, 11, beta),
        (12, 12, gamma),
        (13, 13, scale(&a.mul(&c).mul(&d), 16)),
        (13, 14, scale(&c.mul(&d).mul(&t), 8)),
        (14, 14, scale(&b.mul(&c).mul(&d), 16)),
        (15, 15, delta),
    ];
    let mirrored: Vec<(usize, usize, CoefPoly)> = entries
        .iter()
        .filter(|(i, j, _)| i != j)
        .map(|(i, j, p)| (*j, *i, p.clone()))
        .collect();
    entries.extend(mirrored);

    let zero = CoefPoly::zero(table.clone(), conductor);
    let mut grid = vec![zero; 16 * 16];
    for (i, j, p) in entries {
        grid[i * 16 + j] = p;
    }
    PolyMatrix::new(table.clone(), conductor, 16, 16, grid)
}

/// 2^48 (4 a b - t^2)^8 c^8 d^8 over the module's center table.
pub fn expected_rank16_discriminant(fm: &FreeModuleData) -> CoefPoly {
    let table = fm.center_table().clone();
    let conductor = fm.presentation().conductor();
    let t = CoefPoly::var(table.clone(), table.index_of("t").unwrap(), conductor);
    let gen_var = |g: usize| {
        CoefPoly::var(
            table.clone(),
            table.central_var_of(g).unwrap(),
            conductor,
        )
    };
    let inner = gen_var(0)
        .mul(&gen_var(1))
        .mul_rat(&rat_int(4))
        .sub(&t.pow(2));
    CoefPoly::from_int(table.clone(), conductor, 2)
        .pow(48)
        .mul(&inner.pow(8))
        .mul(&gen_var(2).pow(8))
        .mul(&gen_var(3).pow(8))
}

pub fn default_limits() -> Limits {
    Limits::default()
}
