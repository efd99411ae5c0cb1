//! The discriminant engine: enumerate a free basis over the center, build
//! left-multiplication traces, assemble the Gram matrix and take its
//! determinant; closed-form counterparts and the verification harness.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, Mode, Presentation};
use crate::arith::CycloNumber;
use crate::center::CenterError;
use crate::poly::{CoefPoly, Monomial, PolyError, PolyMatrix, VarDef, VarRole, VarTable};
use crate::Limits;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscrError {
    #[error("rank too large: {0} exceeds the cap {1}")]
    RankTooLarge(u128, u64),
    #[error("element does not lie in the center's polynomial representation")]
    NotCentralizable,
    #[error("formula hypotheses not met: {0}")]
    FormulaHypothesesNotMet(String),
    #[error("the Gram determinant vanished; the input is degenerate")]
    ZeroDiscriminant,
    #[error("operation requires a different presentation mode: {0}")]
    WrongMode(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Center(#[from] CenterError),
}

/// Where a discriminant came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    BruteForce,
    ClosedForm(ClosedFormKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    /// Skew rings with central powers x_i^{alpha_i}:
    /// r^r (prod x_i^{alpha_i - 1})^r with r the rank.
    SkewMonomial,
    /// Two generators with y x = q x y + a, q a primitive n-th root:
    /// (n m)^{n^2} ((1-q)^n x^n y^n - a^n)^{n(n-1)}.
    TwoGenWeyl,
    /// The bounded quotient with x^n = b, y^n = c: the same polynomial
    /// with x^n, y^n replaced by b, c.
    TwoGenWeylBounded,
    /// Clifford-shaped algebras: det(x_i x_j + x_j x_i)^(2^(n-1)).
    CliffordDet,
}

impl ClosedFormKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormKind::SkewMonomial => "skew-monomial",
            ClosedFormKind::TwoGenWeyl => "two-generator-weyl",
            ClosedFormKind::TwoGenWeylBounded => "two-generator-weyl-bounded",
            ClosedFormKind::CliffordDet => "clifford-determinant",
        }
    }
}

/// A discriminant, unit-normalized, with its raw preimage.
#[derive(Debug, Clone, PartialEq)]
pub struct Discriminant {
    pub value: CoefPoly,
    pub raw: CoefPoly,
    pub provenance: Provenance,
}

/// The free-module data of an algebra over its (polynomial) center:
/// the exponent bounds L_i and the ordered monomial basis below them.
#[derive(Debug, Clone)]
pub struct FreeModuleData {
    pres: Arc<Presentation>,
    exponents: Vec<u64>,
    basis: Vec<Monomial>,
    center_table: Arc<VarTable>,
}

impl FreeModuleData {
    /// Skew or filtered algebras: the center is generated by x_i^{L_i},
    /// adjoined as fresh commuting variables.
    pub fn over_center(
        pres: &Arc<Presentation>,
        l_vector: &[u64],
        limits: &Limits,
    ) -> Result<FreeModuleData, DiscrError> {
        match pres.mode() {
            Mode::Skew | Mode::WeylLike => {}
            _ => {
                return Err(DiscrError::WrongMode(
                    "powered presentations are free over the parameter ring".into(),
                ))
            }
        }
        if !pres.is_valid() {
            return Err(AlgebraError::NonConfluent.into());
        }
        assert_eq!(l_vector.len(), pres.n());
        // Every x_i^{L_i} must actually be central before the trace splits
        // exponents against it.
        for (i, &l) in l_vector.iter().enumerate() {
            let gen = AlgebraElement::monomial(
                pres.clone(),
                |e| e[i] = l as u32,
                CoefPoly::one(pres.table().clone(), pres.conductor()),
            );
            if !gen.is_central()? {
                return Err(DiscrError::FormulaHypothesesNotMet(format!(
                    "x{}^{} is not central",
                    i + 1,
                    l
                )));
            }
        }
        let ydefs: Vec<VarDef> = (0..pres.n())
            .map(|i| VarDef {
                name: pres.names()[i].clone(),
                role: VarRole::CentralGen {
                    generator: i,
                    power: l_vector[i],
                },
            })
            .collect();
        let center_table = pres.table().extend(ydefs);
        FreeModuleData::assemble(pres.clone(), l_vector.to_vec(), center_table, limits)
    }

    /// Powered presentations (Clifford and bounded): free over the
    /// parameter ring itself, below the power caps.
    pub fn over_parameters(
        pres: &Arc<Presentation>,
        limits: &Limits,
    ) -> Result<FreeModuleData, DiscrError> {
        let powers = match pres.powers() {
            Some(ps) => ps,
            None => {
                return Err(DiscrError::WrongMode(
                    "presentation has no power relations; build over the center instead".into(),
                ))
            }
        };
        if !pres.is_valid() {
            return Err(AlgebraError::NonConfluent.into());
        }
        let exps: Vec<u64> = powers.iter().map(|p| p.exponent as u64).collect();
        FreeModuleData::assemble(pres.clone(), exps, pres.table().clone(), limits)
    }

    fn assemble(
        pres: Arc<Presentation>,
        exponents: Vec<u64>,
        center_table: Arc<VarTable>,
        limits: &Limits,
    ) -> Result<FreeModuleData, DiscrError> {
        let rank: u128 = exponents.iter().map(|&l| l as u128).product();
        if rank > limits.rank_cap as u128 {
            return Err(DiscrError::RankTooLarge(rank, limits.rank_cap));
        }
        let n = pres.n();
        let mut basis = Vec::with_capacity(rank as usize);
        let mut exps = vec![0u32; n];
        'enumerate: loop {
            basis.push(Monomial(exps.clone().into_boxed_slice()));
            let mut i = 0;
            loop {
                if i == n {
                    break 'enumerate;
                }
                exps[i] += 1;
                if (exps[i] as u64) < exponents[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
        // Degree first, then descending exponent vectors: 1, x1, x2, ...,
        // x1 x2, x1 x3, ... matching the usual plate layout.
        basis.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.0.cmp(&a.0)));
        Ok(FreeModuleData {
            pres,
            exponents,
            basis,
            center_table,
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn center_table(&self) -> &Arc<VarTable> {
        &self.center_table
    }

    /// Same data with the basis permuted; the discriminant must not move.
    pub fn permute_basis(&self, perm: &[usize]) -> FreeModuleData {
        assert_eq!(perm.len(), self.basis.len());
        let mut basis = Vec::with_capacity(perm.len());
        for &p in perm {
            basis.push(self.basis[p].clone());
        }
        FreeModuleData {
            pres: self.pres.clone(),
            exponents: self.exponents.clone(),
            basis,
            center_table: self.center_table.clone(),
        }
    }

    pub fn basis_element(&self, idx: usize) -> AlgebraElement {
        AlgebraElement::from_exponents(
            self.pres.clone(),
            &self.basis[idx].0,
            CoefPoly::one(self.pres.table().clone(), self.pres.conductor()),
        )
    }

    /// Splits x^e into its center part (powers of the adjoined variables)
    /// and the residual basis exponent.
    fn split(&self, m: &Monomial) -> (Monomial, Vec<u32>) {
        let n = self.pres.n();
        let mut residue = vec![0u32; n];
        let mut central = vec![0u32; self.center_table.len()];
        for i in 0..n {
            let e = m.0[i] as u64;
            let l = self.exponents[i];
            residue[i] = (e % l) as u32;
            let q = (e / l) as u32;
            if q > 0 {
                let var = self
                    .center_table
                    .central_var_of(i)
                    .expect("splitting requires an adjoined center variable");
                central[var] = q;
            }
        }
        (
            Monomial(residue.into_boxed_slice()),
            central,
        )
    }

    /// Rewrites a fully-central element as a polynomial over the center
    /// table; errors if some residue is not the unit monomial.
    pub fn central_polynomial(&self, el: &AlgebraElement) -> Result<CoefPoly, DiscrError> {
        let mut out = CoefPoly::zero(self.center_table.clone(), self.pres.conductor());
        for (m, c) in el.terms() {
            let (residue, central) = self.split(m);
            if !residue.is_unit() {
                return Err(DiscrError::NotCentralizable);
            }
            let lifted = c.lift_to(&self.center_table);
            out = out.add(&lifted.mul_monomial(
                &Monomial(central.into_boxed_slice()),
                &CycloNumber::one(self.pres.conductor()),
            ));
        }
        Ok(out)
    }

    /// The trace of left multiplication by `u` on the free module.
    pub fn trace(&self, u: &AlgebraElement) -> Result<CoefPoly, DiscrError> {
        let mut acc = CoefPoly::zero(self.center_table.clone(), self.pres.conductor());
        for b in &self.basis {
            let be = AlgebraElement::from_exponents(
                self.pres.clone(),
                &b.0,
                CoefPoly::one(self.pres.table().clone(), self.pres.conductor()),
            );
            let prod = u.multiply(&be)?;
            for (m, c) in prod.terms() {
                let (residue, central) = self.split(m);
                if &residue == b {
                    let lifted = c.lift_to(&self.center_table);
                    acc = acc.add(&lifted.mul_monomial(
                        &Monomial(central.into_boxed_slice()),
                        &CycloNumber::one(self.pres.conductor()),
                    ));
                }
            }
        }
        Ok(acc)
    }

    /// The symmetric matrix (trace(z_i z_j)).
    pub fn gram_matrix(&self) -> Result<PolyMatrix, DiscrError> {
        let r = self.rank();
        let zero = CoefPoly::zero(self.center_table.clone(), self.pres.conductor());
        let mut entries = vec![zero; r * r];
        for i in 0..r {
            let zi = self.basis_element(i);
            for j in i..r {
                let zj = self.basis_element(j);
                let t = self.trace(&zi.multiply(&zj)?)?;
                entries[i * r + j] = t.clone();
                entries[j * r + i] = t;
            }
        }
        Ok(PolyMatrix::new(
            self.center_table.clone(),
            self.pres.conductor(),
            r,
            r,
            entries,
        ))
    }

    /// The brute-force oracle: determinant of the Gram matrix, normalized.
    pub fn brute_discriminant(&self) -> Result<Discriminant, DiscrError> {
        let gram = self.gram_matrix()?;
        let raw = gram.det_fraction_free()?;
        if raw.is_zero() {
            return Err(DiscrError::ZeroDiscriminant);
        }
        let value = raw.unit_normalize()?;
        Ok(Discriminant {
            value,
            raw,
            provenance: Provenance::BruteForce,
        })
    }
}

/// Builds the closed-form discriminant for the given shape, with its
/// hypotheses validated against the module data.
pub fn closed_form(fm: &FreeModuleData, kind: ClosedFormKind) -> Result<Discriminant, DiscrError> {
    let value = match kind {
        ClosedFormKind::SkewMonomial => closed_skew_monomial(fm)?,
        ClosedFormKind::TwoGenWeyl => closed_two_gen(fm, false)?,
        ClosedFormKind::TwoGenWeylBounded => closed_two_gen(fm, true)?,
        ClosedFormKind::CliffordDet => clifford_det_power(fm)?,
    };
    Ok(Discriminant {
        raw: value.clone(),
        value: value.unit_normalize()?,
        provenance: Provenance::ClosedForm(kind),
    })
}

fn closed_skew_monomial(fm: &FreeModuleData) -> Result<CoefPoly, DiscrError> {
    let pres = fm.presentation();
    if pres.mode() != Mode::Skew {
        return Err(DiscrError::FormulaHypothesesNotMet(
            "the monomial formula applies to skew presentations".into(),
        ));
    }
    // Centrality of each x_i^{alpha_i} was verified when fm was built.
    let r = fm.rank() as u64;
    let table = fm.center_table().clone();
    let conductor = pres.conductor();
    let mut out = CoefPoly::from_int(table.clone(), conductor, r as i64).pow(r);
    for i in 0..pres.n() {
        let alpha = fm.exponents()[i];
        // x_i^{(alpha-1) r} = y_i^{r - r/alpha}.
        let var = table
            .central_var_of(i)
            .expect("skew module data adjoins center variables");
        let e = r - r / alpha;
        out = out.mul(&CoefPoly::var_pow(table.clone(), var, e as u32, conductor));
    }
    Ok(out)
}

fn closed_two_gen(fm: &FreeModuleData, bounded: bool) -> Result<CoefPoly, DiscrError> {
    let pres = fm.presentation();
    if pres.n() != 2 {
        return Err(DiscrError::FormulaHypothesesNotMet(
            "the two-generator formula needs exactly two generators".into(),
        ));
    }
    let expected_mode = if bounded { Mode::Bounded } else { Mode::WeylLike };
    if pres.mode() != expected_mode {
        return Err(DiscrError::FormulaHypothesesNotMet(format!(
            "expected a {} presentation",
            if bounded { "bounded" } else { "filtered" }
        )));
    }
    let q = pres.q(0, 1);
    let n = q.order();
    if n < 2 {
        return Err(DiscrError::FormulaHypothesesNotMet(
            "q must be a primitive n-th root of unity with n >= 2".into(),
        ));
    }
    if fm.exponents() != [n, n] {
        return Err(DiscrError::FormulaHypothesesNotMet(
            "the center exponents must both equal the order of q".into(),
        ));
    }
    let conductor = pres.conductor();
    let z = CycloNumber::embed_root(q, conductor).expect("conductor divisible");
    let one = CycloNumber::one(conductor);

    // m = prod_{i=2}^{n-1} (1 + q + ... + q^{i-1}), empty product for n = 2.
    let mut m = one.clone();
    for i in 2..n {
        let mut s = CycloNumber::zero(conductor);
        let mut p = one.clone();
        for _ in 0..i {
            s = s.add(&p);
            p = p.mul(&z);
        }
        m = m.mul(&s);
    }
    // Cross-check the factorization identity n = (1-q)^(n-1) m.
    let lhs = one.sub(&z).pow(n - 1).mul(&m);
    if lhs != CycloNumber::from_int(n as i64, conductor) {
        return Err(DiscrError::FormulaHypothesesNotMet(
            "root-of-unity product identity failed; q is not primitive".into(),
        ));
    }

    let table = fm.center_table().clone();
    let nm = CycloNumber::from_int(n as i64, conductor).mul(&m);
    let scale = CoefPoly::constant(table.clone(), nm).pow(n * n);

    let a01 = pres.a(0, 1).lift_to(&table);
    let xy_n: CoefPoly = if bounded {
        // x^n and y^n are the imposed constants.
        let powers = pres.powers().expect("bounded mode has powers");
        powers[0].value.lift_to(&table).mul(&powers[1].value.lift_to(&table))
    } else {
        let yx = table
            .central_var_of(0)
            .and_then(|v0| table.central_var_of(1).map(|v1| (v0, v1)))
            .expect("two-generator module data adjoins center variables");
        CoefPoly::var(table.clone(), yx.0, conductor).mul(&CoefPoly::var(
            table.clone(),
            yx.1,
            conductor,
        ))
    };
    let lead = CoefPoly::constant(table.clone(), one.sub(&z).pow(n));
    let body = lead.mul(&xy_n).sub(&a01.pow(n));
    Ok(scale.mul(&body.pow(n * (n - 1))))
}

fn clifford_det_power(fm: &FreeModuleData) -> Result<CoefPoly, DiscrError> {
    let pres = fm.presentation();
    match pres.mode() {
        Mode::Clifford => {}
        Mode::WeylLike | Mode::Skew => {
            for i in 0..pres.n() {
                for j in 0..pres.n() {
                    if i != j && *pres.q(i, j) != crate::arith::UnityRoot::minus_one() {
                        return Err(DiscrError::FormulaHypothesesNotMet(
                            "the determinant formula needs q = -1 off the diagonal".into(),
                        ));
                    }
                }
            }
        }
        Mode::Bounded => {
            return Err(DiscrError::FormulaHypothesesNotMet(
                "bounded presentations are not Clifford-shaped".into(),
            ))
        }
    }
    let m1 = anticommutator_matrix(fm)?;
    let det = m1.det_fraction_free()?;
    if det.is_zero() {
        return Err(DiscrError::ZeroDiscriminant);
    }
    Ok(det.pow(1u64 << (pres.n() - 1)))
}

/// The matrix (x_i x_j + x_j x_i) written over the center table.
pub fn anticommutator_matrix(fm: &FreeModuleData) -> Result<PolyMatrix, DiscrError> {
    let pres = fm.presentation();
    let n = pres.n();
    let zero = CoefPoly::zero(fm.center_table().clone(), pres.conductor());
    let mut entries = vec![zero; n * n];
    for i in 0..n {
        let xi = AlgebraElement::generator(pres.clone(), i);
        for j in i..n {
            let xj = AlgebraElement::generator(pres.clone(), j);
            let anti = xi.multiply(&xj)?.add(&xj.multiply(&xi)?);
            let poly = fm.central_polynomial(&anti)?;
            entries[i * n + j] = poly.clone();
            entries[j * n + i] = poly;
        }
    }
    Ok(PolyMatrix::new(
        fm.center_table().clone(),
        pres.conductor(),
        n,
        n,
        entries,
    ))
}

/// Result of comparing the oracle with a closed form.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub matched: bool,
    pub brute: Discriminant,
    pub closed: Discriminant,
}

/// Runs both routes and compares after unit normalization.
pub fn verify_formula(
    fm: &FreeModuleData,
    kind: ClosedFormKind,
) -> Result<VerificationReport, DiscrError> {
    let brute = fm.brute_discriminant()?;
    let closed = closed_form(fm, kind)?;
    let matched = brute.value == closed.value;
    Ok(VerificationReport {
        matched,
        brute,
        closed,
    })
}

/// Compares the top filtration layer of the discriminant with the
/// discriminant of the associated graded (skew) presentation.
pub fn gr_compatibility_check(fm: &FreeModuleData, limits: &Limits) -> Result<bool, DiscrError> {
    let pres = fm.presentation();
    match pres.mode() {
        Mode::Skew => return Ok(true),
        Mode::WeylLike => {}
        _ => {
            return Err(DiscrError::WrongMode(
                "the graded comparison applies to filtered presentations".into(),
            ))
        }
    }
    let disc = fm.brute_discriminant()?;
    let weights: Vec<u64> = fm
        .center_table()
        .defs()
        .iter()
        .map(|d| match d.role {
            VarRole::Parameter => 0,
            VarRole::CentralGen { power, .. } => power,
        })
        .collect();
    let top = disc.raw.weighted_top_part(&weights).unit_normalize()?;

    let twin = pres.skew_twin()?;
    let twin_fm = FreeModuleData::over_center(&twin, fm.exponents(), limits)?;
    let twin_disc = twin_fm.brute_discriminant()?;
    Ok(top == twin_disc.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PresentationBuilder;
    use crate::arith::{rat_int, UnityRoot};

    fn limits() -> Limits {
        Limits::default()
    }

    fn a_q(order: u64, a_val: i64) -> Arc<Presentation> {
        let table = VarTable::parameters(&[]);
        let q = UnityRoot::new(1, order).unwrap();
        PresentationBuilder::new(Mode::WeylLike, 2, table.clone(), order)
            .names(vec!["x".into(), "y".into()])
            .q(0, 1, q)
            .a(0, 1, CoefPoly::from_int(table, order, a_val))
            .build()
            .unwrap()
    }

    fn fm_a_q(order: u64) -> FreeModuleData {
        let pres = a_q(order, 1);
        FreeModuleData::over_center(&pres, &[order, order], &limits()).unwrap()
    }

    #[test]
    fn trace_of_identity_is_rank() {
        let fm = fm_a_q(2);
        assert_eq!(fm.rank(), 4);
        let one = AlgebraElement::one(fm.presentation().clone());
        let t = fm.trace(&one).unwrap();
        assert_eq!(t, CoefPoly::from_int(fm.center_table().clone(), 2, 4));
    }

    #[test]
    fn trace_of_generator_vanishes() {
        let fm = fm_a_q(2);
        let x = AlgebraElement::generator(fm.presentation().clone(), 0);
        assert!(fm.trace(&x).unwrap().is_zero());
    }

    #[test]
    fn gram_matrix_rank_four() {
        // Basis 1, x, y, xy; y1 = x^2, y2 = y^2.
        let fm = fm_a_q(2);
        let gram = fm.gram_matrix().unwrap();
        let t = fm.center_table().clone();
        let y1 = CoefPoly::var(t.clone(), t.central_var_of(0).unwrap(), 2);
        let y2 = CoefPoly::var(t.clone(), t.central_var_of(1).unwrap(), 2);
        let c = |v: i64| CoefPoly::from_int(t.clone(), 2, v);
        assert_eq!(gram.at(0, 0), &c(4));
        assert_eq!(gram.at(0, 3), &c(2));
        assert_eq!(gram.at(1, 1), &y1.mul_rat(&rat_int(4)));
        assert_eq!(gram.at(1, 2), &c(2));
        assert_eq!(gram.at(2, 2), &y2.mul_rat(&rat_int(4)));
        assert_eq!(
            gram.at(3, 3),
            &y1.mul(&y2).mul_rat(&rat_int(-4)).add(&c(2))
        );
        assert!(gram.is_symmetric());
    }

    #[test]
    fn brute_matches_closed_form_n2() {
        let fm = fm_a_q(2);
        let report = verify_formula(&fm, ClosedFormKind::TwoGenWeyl).unwrap();
        assert!(report.matched);
        // 16 (4 x^2 y^2 - 1)^2 normalized.
        let t = fm.center_table().clone();
        let y1 = CoefPoly::var(t.clone(), t.central_var_of(0).unwrap(), 2);
        let y2 = CoefPoly::var(t.clone(), t.central_var_of(1).unwrap(), 2);
        let one = CoefPoly::one(t.clone(), 2);
        let expected = y1
            .mul(&y2)
            .mul_rat(&rat_int(4))
            .sub(&one)
            .pow(2)
            .mul_rat(&rat_int(16));
        assert_eq!(report.brute.value, expected.unit_normalize().unwrap());
    }

    #[test]
    fn negative_control_mismatch() {
        // Deliberately wrong exponent: n^2 instead of n(n-1).
        let fm = fm_a_q(2);
        let brute = fm.brute_discriminant().unwrap();
        let t = fm.center_table().clone();
        let y1 = CoefPoly::var(t.clone(), t.central_var_of(0).unwrap(), 2);
        let y2 = CoefPoly::var(t.clone(), t.central_var_of(1).unwrap(), 2);
        let one = CoefPoly::one(t.clone(), 2);
        let wrong = y1
            .mul(&y2)
            .mul_rat(&rat_int(4))
            .sub(&one)
            .pow(4)
            .unit_normalize()
            .unwrap();
        assert_ne!(brute.value, wrong);
    }

    #[test]
    fn skew_monomial_formula() {
        // n = 2, alpha = (2, 2), q = -1: 256 y1^2 y2^2.
        let table = VarTable::parameters(&[]);
        let pres = PresentationBuilder::new(Mode::Skew, 2, table, 2)
            .q(0, 1, UnityRoot::minus_one())
            .build()
            .unwrap();
        let fm = FreeModuleData::over_center(&pres, &[2, 2], &limits()).unwrap();
        let report = verify_formula(&fm, ClosedFormKind::SkewMonomial).unwrap();
        assert!(report.matched);
        let t = fm.center_table().clone();
        let expected = CoefPoly::var(t.clone(), t.central_var_of(0).unwrap(), 2)
            .pow(2)
            .mul(&CoefPoly::var(t.clone(), t.central_var_of(1).unwrap(), 2).pow(2));
        assert_eq!(report.brute.value, expected);
        assert_eq!(
            report.closed.raw,
            expected.mul_rat(&rat_int(256))
        );
    }

    #[test]
    fn basis_permutation_invariance() {
        let fm = fm_a_q(2);
        let d1 = fm.brute_discriminant().unwrap();
        let perm = vec![3, 1, 0, 2];
        let d2 = fm.permute_basis(&perm).brute_discriminant().unwrap();
        assert_eq!(d1.value, d2.value);
    }

    #[test]
    fn trace_symmetry_and_center_linearity() {
        let fm = fm_a_q(3);
        let pres = fm.presentation().clone();
        let one = CoefPoly::one(pres.table().clone(), 3);
        let u = crate::algebra::normal_form(&pres, &[1, 0, 0], one.clone()).unwrap();
        let v = crate::algebra::normal_form(&pres, &[0, 1, 1], one.clone()).unwrap();
        let uv = fm.trace(&u.multiply(&v).unwrap()).unwrap();
        let vu = fm.trace(&v.multiply(&u).unwrap()).unwrap();
        assert_eq!(uv, vu);

        // trace(z u) = z trace(u) for the central element z = x^3.
        let z = AlgebraElement::monomial(pres.clone(), |e| e[0] = 3, one);
        let zu = fm.trace(&z.multiply(&u).unwrap()).unwrap();
        let y1 = CoefPoly::var(
            fm.center_table().clone(),
            fm.center_table().central_var_of(0).unwrap(),
            3,
        );
        assert_eq!(zu, y1.mul(&fm.trace(&u).unwrap()));
    }

    #[test]
    fn bounded_quotient_transport() {
        // Substituting x^n -> b, y^n -> c in the raw discriminant equals
        // the bounded quotient's raw discriminant, basis for basis.
        let n = 3u64;
        let pres = a_q(n, 1);
        let fm = FreeModuleData::over_center(&pres, &[n, n], &limits()).unwrap();
        let raw = fm.brute_discriminant().unwrap().raw;

        for (b, c) in [(2i64, 5i64), (7, 3)] {
            let table = VarTable::parameters(&[]);
            let bounded = PresentationBuilder::new(Mode::Bounded, 2, table.clone(), n)
                .names(vec!["x".into(), "y".into()])
                .q(0, 1, UnityRoot::new(1, n).unwrap())
                .a(0, 1, CoefPoly::from_int(table.clone(), n, 1))
                .power(0, n as u32, CoefPoly::from_int(table.clone(), n, b))
                .power(1, n as u32, CoefPoly::from_int(table.clone(), n, c))
                .build()
                .unwrap();
            let bfm = FreeModuleData::over_parameters(&bounded, &limits()).unwrap();
            let braw = bfm.brute_discriminant().unwrap().raw;

            let v0 = fm.center_table().central_var_of(0).unwrap();
            let v1 = fm.center_table().central_var_of(1).unwrap();
            let subst = raw
                .substitute(v0, &CoefPoly::from_int(fm.center_table().clone(), n, b))
                .substitute(v1, &CoefPoly::from_int(fm.center_table().clone(), n, c));
            let subst_const = subst.constant_value();
            let braw_const = braw.constant_value();
            assert_eq!(subst_const, braw_const, "transport failed at b={b}, c={c}");
        }
    }

    #[test]
    fn bounded_closed_form_symbolic() {
        // Symbolic bounds b, c: the bounded formula matches the oracle.
        for n in [2u64, 3] {
            let table = VarTable::parameters(&["b", "c"]);
            let b = CoefPoly::var(table.clone(), 0, n);
            let c = CoefPoly::var(table.clone(), 1, n);
            let bounded = PresentationBuilder::new(Mode::Bounded, 2, table.clone(), n)
                .names(vec!["x".into(), "y".into()])
                .q(0, 1, UnityRoot::new(1, n).unwrap())
                .a(0, 1, CoefPoly::from_int(table.clone(), n, 1))
                .power(0, n as u32, b)
                .power(1, n as u32, c)
                .build()
                .unwrap();
            let fm = FreeModuleData::over_parameters(&bounded, &limits()).unwrap();
            let report = verify_formula(&fm, ClosedFormKind::TwoGenWeylBounded).unwrap();
            assert!(report.matched, "bounded formula mismatch at order {n}");
        }
    }

    #[test]
    fn two_gen_formula_with_symbolic_coefficient() {
        // y x = q x y + t over k[t]: the closed form still matches.
        for n in [2u64, 3] {
            let table = VarTable::parameters(&["t"]);
            let t = CoefPoly::var(table.clone(), 0, n);
            let pres = PresentationBuilder::new(Mode::WeylLike, 2, table, n)
                .names(vec!["x".into(), "y".into()])
                .q(0, 1, UnityRoot::new(1, n).unwrap())
                .a(0, 1, t)
                .build()
                .unwrap();
            let fm = FreeModuleData::over_center(&pres, &[n, n], &limits()).unwrap();
            let report = verify_formula(&fm, ClosedFormKind::TwoGenWeyl).unwrap();
            assert!(report.matched, "symbolic coefficient mismatch at order {n}");
        }
    }

    #[test]
    fn gr_compatibility_for_a_q() {
        let fm = fm_a_q(2);
        assert!(gr_compatibility_check(&fm, &limits()).unwrap());
        let fm3 = fm_a_q(3);
        assert!(gr_compatibility_check(&fm3, &limits()).unwrap());
    }

    #[test]
    fn rank_one_gram_is_identity() {
        // A single generator with trivial q: the center is everything,
        // the basis is {1}, and the Gram matrix is [[1]].
        let table = VarTable::parameters(&[]);
        let pres = PresentationBuilder::new(Mode::Skew, 1, table, 1)
            .build()
            .unwrap();
        let fm = FreeModuleData::over_center(&pres, &[1], &limits()).unwrap();
        assert_eq!(fm.rank(), 1);
        let gram = fm.gram_matrix().unwrap();
        assert!(gram.at(0, 0).is_one());
        let d = fm.brute_discriminant().unwrap();
        assert!(d.value.is_one());
    }

    #[test]
    fn rank_cap_enforced() {
        let pres = a_q(2, 1);
        let tiny = Limits {
            rank_cap: 3,
            ..Limits::default()
        };
        let err = FreeModuleData::over_center(&pres, &[2, 2], &tiny).unwrap_err();
        assert_eq!(err, DiscrError::RankTooLarge(4, 3));
    }
}
