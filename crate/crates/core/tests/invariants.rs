//! Cross-cutting invariants with independent oracles: the fraction-free
//! determinant against plain first-row cofactor expansion, determinant
//! multiplicativity and congruence invariance, square-free
//! re-multiplication, the center kernel criterion against brute-force
//! monomial enumeration, and canonical-form round trips.

mod common;

use common::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qalg::algebra::{Mode, PresentationBuilder};
use qalg::arith::UnityRoot;
use qalg::center::{build_center_report, central_monomials_below_l, Verdict};
use qalg::expr::{eval_polynomial, EvalContext};
use qalg::poly::{CoefPoly, PolyMatrix, VarTable};

/// Plain first-row cofactor expansion; no pivoting, no memoization, no
/// sparsity handling. The independent oracle for the production path.
fn naive_det(m: &PolyMatrix) -> CoefPoly {
    let n = m.rows();
    if n == 0 {
        return CoefPoly::one(m.table().clone(), m.conductor());
    }
    let mut acc = CoefPoly::zero(m.table().clone(), m.conductor());
    for j in 0..n {
        let minor = PolyMatrix::from_fn(m.table().clone(), m.conductor(), n - 1, n - 1, |r, c| {
            m.at(r + 1, if c < j { c } else { c + 1 }).clone()
        });
        let term = m.at(0, j).mul(&naive_det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn random_poly(rng: &mut ChaCha8Rng, table: &std::sync::Arc<VarTable>) -> CoefPoly {
    let mut p = CoefPoly::zero(table.clone(), 1);
    for _ in 0..rng.random_range(0..=2usize) {
        let exps: Vec<u32> = (0..table.len()).map(|_| rng.random_range(0..=2u32)).collect();
        let c = rng.random_range(-3..=3i64);
        if c != 0 {
            p = p.add(&CoefPoly::monomial(
                table.clone(),
                &exps,
                qalg::arith::CycloNumber::from_int(c, 1),
            ));
        }
    }
    p
}

#[test]
fn det_agrees_with_cofactor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let table = VarTable::parameters(&["x", "y"]);
    for n in 1..=4usize {
        for _ in 0..40 {
            let m = PolyMatrix::from_fn(table.clone(), 1, n, n, |_, _| {
                random_poly(&mut rng, &table)
            });
            assert_eq!(m.det_fraction_free().unwrap(), naive_det(&m));
        }
    }
}

#[test]
fn det_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let table = VarTable::parameters(&["x", "y"]);
    for _ in 0..30 {
        let a = PolyMatrix::from_fn(table.clone(), 1, 3, 3, |_, _| random_poly(&mut rng, &table));
        let b = PolyMatrix::from_fn(table.clone(), 1, 3, 3, |_, _| random_poly(&mut rng, &table));
        let lhs = a.mul(&b).det_fraction_free().unwrap();
        let rhs = a
            .det_fraction_free()
            .unwrap()
            .mul(&b.det_fraction_free().unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn det_invariant_under_unimodular_congruence() {
    // N M N^T has the same determinant when N is unit-triangular.
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let table = VarTable::parameters(&["x", "y"]);
    for _ in 0..25 {
        let m = {
            let raw =
                PolyMatrix::from_fn(table.clone(), 1, 3, 3, |_, _| random_poly(&mut rng, &table));
            // Symmetrize.
            PolyMatrix::from_fn(table.clone(), 1, 3, 3, |i, j| {
                raw.at(i, j).add(raw.at(j, i))
            })
        };
        let n = PolyMatrix::from_fn(table.clone(), 1, 3, 3, |i, j| {
            use std::cmp::Ordering::*;
            match i.cmp(&j) {
                Equal => CoefPoly::one(table.clone(), 1),
                Greater => random_poly(&mut rng, &table),
                Less => CoefPoly::zero(table.clone(), 1),
            }
        });
        let congruent = n.mul(&m).mul(&n.transpose());
        assert_eq!(
            congruent.det_fraction_free().unwrap(),
            m.det_fraction_free().unwrap()
        );
    }
}

#[test]
fn squarefree_factors_remultiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let table = VarTable::parameters(&["x", "y", "z"]);
    for _ in 0..25 {
        // Random product of small factors with multiplicities.
        let mut f = CoefPoly::one(table.clone(), 1);
        for _ in 0..rng.random_range(1..=3usize) {
            let mut g = random_poly(&mut rng, &table);
            if g.is_zero() {
                g = CoefPoly::var(table.clone(), 0, 1);
            }
            f = f.mul(&g.pow(rng.random_range(1..=3u64)));
        }
        if f.is_constant() {
            continue;
        }
        let factors = f.squarefree_factors();
        let product = qalg::poly::remultiply(&factors, &f);
        assert_eq!(
            product.unit_normalize().unwrap(),
            f.unit_normalize().unwrap()
        );
        // Pairwise coprime, each square-free.
        for (i, (g, _)) in factors.iter().enumerate() {
            let var = (0..table.len()).find(|&v| g.degree_in(v) > 0).unwrap();
            let dg = qalg::poly::gcd(g, &g.derivative(var));
            assert!(dg.is_constant(), "factor not square-free: {g}");
            for (h, _) in factors.iter().skip(i + 1) {
                assert!(qalg::poly::gcd(g, h).is_one(), "factors share a divisor");
            }
        }
    }
}

#[test]
fn center_kernel_matches_monomial_enumeration() {
    // On a polynomial verdict, the only central monomial strictly below
    // the L bounds is 1; on small non-polynomial grids the kernel vectors
    // show up as extra central monomials.
    let cases: Vec<Vec<(usize, usize, i64, u64)>> = vec![
        vec![(0, 1, 1, 2)],
        vec![(0, 1, 1, 3)],
        vec![(0, 1, 1, 2), (0, 2, 1, 3), (1, 2, 1, 2)],
    ];
    for entries in cases {
        let n = entries.iter().map(|&(i, j, _, _)| i.max(j)).max().unwrap() + 1;
        let mut q = vec![vec![UnityRoot::one(); n]; n];
        for &(i, j, k, d) in &entries {
            let r = UnityRoot::new(k, d).unwrap();
            q[i][j] = r;
            q[j][i] = r.inverse();
        }
        let report = build_center_report(&q).unwrap();
        let conductor = entries.iter().fold(1u64, |acc, &(_, _, _, d)| {
            num_integer::Integer::lcm(&acc, &d)
        });
        let table = VarTable::parameters(&[]);
        let mut b = PresentationBuilder::new(Mode::Skew, n, table, conductor);
        for &(i, j, k, d) in &entries {
            b = b.q(i, j, UnityRoot::new(k, d).unwrap());
        }
        let pres = b.build().unwrap();
        let central = central_monomials_below_l(&pres, &report.l_vector).unwrap();
        match report.verdict {
            Verdict::Polynomial => {
                assert_eq!(central, vec![vec![0; n]], "expected only the unit monomial");
            }
            Verdict::NotPolynomial => {
                assert!(central.len() > 1, "kernel should produce extra monomials");
            }
        }
    }
}

#[test]
fn polynomial_display_round_trips() {
    // serialize -> parse -> serialize is the identity on shipped data and
    // on random polynomials.
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let table = VarTable::parameters(&["x", "y", "z"]);
    let ctx = EvalContext::plain(table.clone(), 12);
    for _ in 0..50 {
        let mut p = random_poly(&mut rng, &table).lift_conductor(12);
        // Mix in a cyclotomic coefficient now and then.
        if rng.random_bool(0.3) {
            p = p.add(&CoefPoly::constant(
                table.clone(),
                qalg::arith::CycloNumber::zeta_power(12, rng.random_range(1..12)),
            ));
        }
        if p.is_zero() {
            continue;
        }
        let printed = p.to_string();
        let reparsed = eval_polynomial(&printed, &ctx).unwrap();
        assert_eq!(p, reparsed, "round trip failed for {printed}");
        assert_eq!(printed, reparsed.to_string());
    }
}

#[test]
fn shipped_documents_round_trip() {
    for (name, text) in all_documents() {
        let doc = parse(text);
        let printed = doc.render();
        let doc2 = qalg::input::Document::parse(&printed)
            .unwrap_or_else(|e| panic!("{name}: canonical form failed to parse: {e}"));
        assert_eq!(printed, doc2.render(), "{name}: print-parse-print unstable");
        assert_eq!(doc.q, doc2.q, "{name}: q grid drifted");
        assert_eq!(doc.a, doc2.a, "{name}: a grid drifted");
        assert_eq!(doc.conductor, doc2.conductor, "{name}: conductor drifted");
    }
}

#[test]
fn bareiss_pivoting_handles_leading_zeros() {
    // A matrix whose leading principal minors vanish still eliminates.
    let table = VarTable::parameters(&["x"]);
    let x = CoefPoly::var(table.clone(), 0, 1);
    let zero = CoefPoly::zero(table.clone(), 1);
    let one = CoefPoly::one(table.clone(), 1);
    let entries = vec![
        zero.clone(),
        one.clone(),
        x.clone(),
        one.clone(),
        zero.clone(),
        x.pow(2),
        x.clone(),
        x.pow(2),
        zero.clone(),
    ];
    let m = PolyMatrix::new(table, 1, 3, 3, entries);
    assert_eq!(m.det_fraction_free().unwrap(), naive_det(&m));
}

#[test]
fn trace_matrix_is_symmetric_for_shipped_presentations() {
    let limits = default_limits();
    for text in [QWEYL2, QWEYL3, MINUS_WEYL2, MINUS_WEYL3, CLIFFORD_CROSS] {
        let doc = parse(text);
        let pres = doc.presentation(&limits).unwrap();
        let fm = match pres.powers() {
            Some(_) => qalg::discr::FreeModuleData::over_parameters(&pres, &limits).unwrap(),
            None => {
                let report = build_center_report(&doc.q).unwrap();
                qalg::discr::FreeModuleData::over_center(&pres, &report.l_vector, &limits)
                    .unwrap()
            }
        };
        assert!(fm.gram_matrix().unwrap().is_symmetric());
    }
}

#[test]
fn top_layer_of_products_is_the_skew_product() {
    // The top filtration layer of u*v in a filtered presentation equals
    // the product of the top layers in the associated skew presentation.
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let limits = default_limits();
    let doc = parse(FOUR_GEN_T);
    let pres = doc.presentation(&limits).unwrap();
    let twin = pres.skew_twin().unwrap();
    for _ in 0..100 {
        let mut random_element = |p: &std::sync::Arc<qalg::algebra::Presentation>| {
            let mut el = qalg::algebra::AlgebraElement::zero(p.clone());
            for _ in 0..2 {
                let exps: Vec<u32> = (0..p.n()).map(|_| rng.random_range(0..=2u32)).collect();
                let coef = CoefPoly::from_int(p.table().clone(), p.conductor(), 1);
                el = el.add(&qalg::algebra::AlgebraElement::from_exponents(
                    p.clone(),
                    &exps,
                    coef,
                ));
            }
            el
        };
        let u = random_element(&pres);
        let v = random_element(&pres);
        if u.is_zero() || v.is_zero() {
            continue;
        }
        let product_top = u.multiply(&v).unwrap().top_part_in(&twin);
        let top_product = u
            .top_part_in(&twin)
            .multiply(&v.top_part_in(&twin))
            .unwrap();
        // In a domain the top degrees add, so the layers agree exactly.
        assert_eq!(product_top, top_product);
    }
}

#[test]
fn parameter_and_squares_are_central_in_four_gen_t() {
    let limits = default_limits();
    let doc = parse(FOUR_GEN_T);
    let pres = doc.presentation(&limits).unwrap();
    let t = qalg::algebra::AlgebraElement::scalar(
        pres.clone(),
        CoefPoly::var(pres.table().clone(), 0, pres.conductor()),
    );
    assert!(t.is_central().unwrap());
    for i in 0..4 {
        let sq = qalg::algebra::AlgebraElement::monomial(
            pres.clone(),
            |e| e[i] = 2,
            CoefPoly::one(pres.table().clone(), pres.conductor()),
        );
        assert!(sq.is_central().unwrap(), "x{}^2 must be central", i + 1);
    }
}

#[test]
fn monomial_discriminants_certify_in_one_round() {
    // The graded discriminant of the sign-commuting family is a monomial
    // power, so the closure certifies every generator immediately.
    use qalg::closure::{certify_full_closure, CertifyOutcome};
    for n in 2..=4usize {
        let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
        let table = VarTable::parameters(&names.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        let mut f = CoefPoly::from_int(table.clone(), 1, 2).pow((n as u64) << n);
        for v in 0..n {
            f = f.mul(&CoefPoly::var(table.clone(), v, 1).pow(1 << (n - 1)));
        }
        let map: Vec<Option<usize>> = (0..n).map(Some).collect();
        let gens = (1..=n).map(|i| format!("x{i}")).collect();
        let outcome = certify_full_closure(&table, map, gens, &[f], 8).unwrap();
        match outcome {
            CertifyOutcome::CertifiedFull { rounds, .. } => assert_eq!(rounds, 1),
            CertifyOutcome::Unknown { .. } => panic!("monomial closure must certify at n={n}"),
        }
    }
}

#[test]
fn proper_w2_discriminant_certifies_via_constant_tail() {
    // (4 y1 y2 - 1)^2: the tail of the top term is constant, so the sum
    // completion certifies both generators.
    use qalg::closure::{certify_full_closure, CertifyOutcome};
    let table = VarTable::parameters(&["y1", "y2"]);
    let four = CoefPoly::from_int(table.clone(), 1, 4);
    let f = four
        .mul(&CoefPoly::var(table.clone(), 0, 1))
        .mul(&CoefPoly::var(table.clone(), 1, 1))
        .sub(&CoefPoly::one(table.clone(), 1))
        .pow(2);
    let outcome = certify_full_closure(
        &table,
        vec![Some(0), Some(1)],
        vec!["x1".into(), "x2".into()],
        &[f],
        8,
    )
    .unwrap();
    assert!(matches!(outcome, CertifyOutcome::CertifiedFull { .. }));
}

#[test]
fn clifford_oracle_agrees_on_numeric_rank3_form() {
    // A numeric quadratic form: x1^2 = 2, x2^2 = 3, x3^2 = 5 with a cross
    // term; the determinant power matches the trace oracle exactly.
    use qalg::clifford::{verify_clifford_discriminant, QuadraticForm};
    let table = VarTable::parameters(&["u"]);
    let u = CoefPoly::var(table.clone(), 0, 1);
    let c = |v: i64| CoefPoly::from_int(table.clone(), 1, v);
    let half_u = u.mul_rat(&qalg::arith::rat(1, 2));
    let zero = CoefPoly::zero(table.clone(), 1);
    let entries = vec![
        c(2),
        half_u.clone(),
        zero.clone(),
        half_u,
        c(3),
        zero.clone(),
        zero.clone(),
        zero,
        c(5),
    ];
    let qf = QuadraticForm::new(qalg::poly::PolyMatrix::new(table, 1, 3, 3, entries)).unwrap();
    let report = verify_clifford_discriminant(&qf, &default_limits()).unwrap();
    assert!(report.matched);
}

#[test]
fn sparse_pattern_dets_match_oracle() {
    // Highly sparse random patterns exercise the component split, the
    // permutation sign, and the memoized expansion against the plain
    // cofactor oracle.
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let table = VarTable::parameters(&["x"]);
    for n in 4..=6usize {
        for _ in 0..30 {
            let m = PolyMatrix::from_fn(table.clone(), 1, n, n, |_, _| {
                if rng.random_bool(0.7) {
                    CoefPoly::zero(table.clone(), 1)
                } else if rng.random_bool(0.3) {
                    CoefPoly::var(table.clone(), 0, 1)
            } else {
                    CoefPoly::from_int(table.clone(), 1, rng.random_range(1..=4i64))
                }
            });
            assert_eq!(m.det_fraction_free().unwrap(), naive_det(&m), "n = {n}");
        }
    }
}

#[test]
fn cyclotomic_scalar_display_round_trips() {
    // serialize -> parse -> serialize is the identity on field scalars.
    let mut rng = ChaCha8Rng::seed_from_u64(48);
    for conductor in [1u64, 2, 3, 4, 5, 8, 12] {
        for _ in 0..20 {
            let deg = qalg::arith::phi(conductor) as i64;
            let mut x = qalg::arith::CycloNumber::zero(conductor);
            for e in 0..deg {
                let num = rng.random_range(-9..=9i64);
                if num != 0 {
                    let den = rng.random_range(1..=5i64);
                    let coeff = qalg::arith::CycloNumber::from_rat(
                        qalg::arith::rat(num, den),
                        conductor,
                    );
                    x = x.add(
                        &coeff.mul(&qalg::arith::CycloNumber::zeta_power(conductor, e)),
                    );
                }
            }
            let printed = x.to_string();
            let reparsed = qalg::expr::eval_scalar(&printed, conductor).unwrap();
            assert_eq!(x, reparsed, "round trip failed for {printed}");
            assert_eq!(printed, reparsed.to_string());
        }
    }
}
