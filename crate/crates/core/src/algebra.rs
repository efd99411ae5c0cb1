//! Presentations of quantum algebras and PBW normal-form arithmetic.
//!
//! A presentation covers the relation shapes
//! `x_j x_i = q_ij x_i x_j + a_ij` for `i < j`, optionally together with
//! per-generator power relations `x_i^p = c_i` (Clifford algebras impose
//! `p = 2` with `q_ij = -1`). Elements are kept in PBW normal order
//! `x_1^{e_1} ... x_n^{e_n}` with coefficients in the commutative
//! parameter ring.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::arith::{CycloNumber, UnityRoot};
use crate::poly::{CoefPoly, Monomial, VarTable};
use crate::Limits;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("non-confluent presentation")]
    NonConfluent,
    #[error("presentation mismatch")]
    PresentationMismatch,
    #[error("degree cap {0} exceeded; raise the limit for larger elements")]
    DegreeCapExceeded(u32),
    #[error("invalid presentation: {0}")]
    InvalidStructure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// All `a = 0`, no power relations.
    Skew,
    /// Nonzero `a` allowed; the associated graded ring is the skew ring.
    WeylLike,
    /// Power relations present; off-diagonal q are all -1.
    Clifford,
    /// Arbitrary power relations `x_i^{p_i} = c_i` on top of the q/a
    /// relations; the module basis is assumed free below the power caps.
    Bounded,
}

/// `x_i^exponent = value` with `value` in the parameter ring.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRelation {
    pub exponent: u32,
    pub value: CoefPoly,
}

/// A confluence violation found by validation; violations are data, not
/// errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `a_ij != 0` requires `q_ik q_jk = 1` for every third index k.
    ProductRule { i: usize, j: usize, k: usize },
    /// `a_ij` must vanish whenever `q_ij = 1`.
    TrivialQWithA { i: usize, j: usize },
    /// The two resolutions of `x_k x_j x_i` disagree.
    Diamond { i: usize, j: usize, k: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::ProductRule { i, j, k } => write!(
                f,
                "a[{},{}] is nonzero but q[{},{}]*q[{},{}] != 1",
                i + 1,
                j + 1,
                i + 1,
                k + 1,
                j + 1,
                k + 1
            ),
            Violation::TrivialQWithA { i, j } => write!(
                f,
                "q[{},{}] = 1 but a[{},{}] is nonzero",
                i + 1,
                j + 1,
                i + 1,
                j + 1
            ),
            Violation::Diamond { i, j, k } => write!(
                f,
                "resolving x{} x{} x{} in two ways gives different normal forms",
                k + 1,
                j + 1,
                i + 1
            ),
        }
    }
}

#[derive(Debug)]
pub struct Presentation {
    n: usize,
    names: Vec<String>,
    q: Vec<Vec<UnityRoot>>,
    a: Vec<Vec<CoefPoly>>,
    powers: Option<Vec<PowerRelation>>,
    mode: Mode,
    table: Arc<VarTable>,
    conductor: u64,
    degree_cap: u32,
    violations: OnceLock<Vec<Violation>>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.names == other.names
            && self.q == other.q
            && self.a == other.a
            && self.powers == other.powers
            && self.mode == other.mode
            && *self.table == *other.table
    }
}

pub struct PresentationBuilder {
    n: usize,
    names: Vec<String>,
    q: Vec<Vec<UnityRoot>>,
    a: Vec<Vec<CoefPoly>>,
    powers: Vec<Option<PowerRelation>>,
    mode: Mode,
    table: Arc<VarTable>,
    conductor: u64,
    degree_cap: u32,
}

impl PresentationBuilder {
    pub fn new(mode: Mode, n: usize, table: Arc<VarTable>, conductor: u64) -> Self {
        let zero = CoefPoly::zero(table.clone(), conductor);
        PresentationBuilder {
            n,
            names: (1..=n).map(|i| format!("x{i}")).collect(),
            q: vec![vec![UnityRoot::one(); n]; n],
            a: vec![vec![zero.clone(); n]; n],
            powers: vec![None; n],
            mode,
            table,
            conductor,
            degree_cap: Limits::default().degree_cap,
        }
    }

    pub fn names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n);
        self.names = names;
        self
    }

    pub fn degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    /// Sets `q_ij` for `i < j`; the inverse entry is filled in.
    pub fn q(mut self, i: usize, j: usize, q: UnityRoot) -> Self {
        assert!(i < j && j < self.n);
        self.q[i][j] = q;
        self.q[j][i] = q.inverse();
        self
    }

    /// Sets `a_ij` for `i < j`.
    pub fn a(mut self, i: usize, j: usize, a: CoefPoly) -> Self {
        assert!(i < j && j < self.n);
        self.a[j][i] = a.clone();
        self.a[i][j] = a;
        self
    }

    pub fn power(mut self, i: usize, exponent: u32, value: CoefPoly) -> Self {
        self.powers[i] = Some(PowerRelation { exponent, value });
        self
    }

    pub fn build(self) -> Result<Arc<Presentation>, AlgebraError> {
        let powers = if self.powers.iter().all(|p| p.is_none()) {
            None
        } else {
            if self.powers.iter().any(|p| p.is_none()) {
                return Err(AlgebraError::InvalidStructure(
                    "power relations must cover every generator".into(),
                ));
            }
            Some(self.powers.into_iter().map(|p| p.unwrap()).collect())
        };
        Presentation::new(
            self.mode,
            self.names,
            self.q,
            self.a,
            powers,
            self.table,
            self.conductor,
            self.degree_cap,
        )
    }
}

impl Presentation {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mode: Mode,
        names: Vec<String>,
        q: Vec<Vec<UnityRoot>>,
        a: Vec<Vec<CoefPoly>>,
        powers: Option<Vec<PowerRelation>>,
        table: Arc<VarTable>,
        conductor: u64,
        degree_cap: u32,
    ) -> Result<Arc<Presentation>, AlgebraError> {
        let n = names.len();
        let fail = |msg: &str| Err(AlgebraError::InvalidStructure(msg.into()));
        if q.len() != n || q.iter().any(|row| row.len() != n) {
            return fail("q grid must be n x n");
        }
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return fail("a grid must be n x n");
        }
        for i in 0..n {
            if !q[i][i].is_one() {
                return fail("q[i][i] must be 1");
            }
            for j in 0..n {
                if !q[i][j].mul(&q[j][i]).is_one() {
                    return fail("q[j][i] must be the inverse of q[i][j]");
                }
                if a[i][j] != a[j][i] {
                    return fail("a[j][i] must equal a[i][j]");
                }
                if conductor % q[i][j].order() != 0 {
                    return fail("conductor must be divisible by the order of every q entry");
                }
            }
        }
        match mode {
            Mode::Skew => {
                if a.iter().any(|row| row.iter().any(|p| !p.is_zero())) {
                    return fail("skew mode admits no a terms");
                }
                if powers.is_some() {
                    return fail("skew mode admits no power relations");
                }
            }
            Mode::WeylLike => {
                if powers.is_some() {
                    return fail("power relations require clifford mode");
                }
            }
            Mode::Clifford => {
                let ps = match &powers {
                    Some(ps) => ps,
                    None => return fail("clifford mode requires square relations"),
                };
                if ps.len() != n || ps.iter().any(|p| p.exponent != 2) {
                    return fail("clifford mode imposes x_i^2 relations for every generator");
                }
                for i in 0..n {
                    for j in 0..n {
                        if i != j && q[i][j] != UnityRoot::minus_one() {
                            return fail("clifford mode requires q = -1 off the diagonal");
                        }
                    }
                }
            }
            Mode::Bounded => {
                let ps = match &powers {
                    Some(ps) => ps,
                    None => return fail("bounded mode requires power relations"),
                };
                if ps.len() != n || ps.iter().any(|p| p.exponent < 1) {
                    return fail("bounded mode needs a positive power for every generator");
                }
            }
        }
        Ok(Arc::new(Presentation {
            n,
            names,
            q,
            a,
            powers,
            mode,
            table,
            conductor,
            degree_cap,
            violations: OnceLock::new(),
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn q(&self, i: usize, j: usize) -> &UnityRoot {
        &self.q[i][j]
    }

    pub fn q_grid(&self) -> &[Vec<UnityRoot>] {
        &self.q
    }

    pub fn a(&self, i: usize, j: usize) -> &CoefPoly {
        &self.a[i][j]
    }

    pub fn powers(&self) -> Option<&[PowerRelation]> {
        self.powers.as_deref()
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Confluence checks: the pairwise q-product rule, the `q = 1 implies
    /// a = 0` rule for filtered lifts, and the degree-3 diamond on every
    /// triple of generators.
    pub fn validate(self: &Arc<Presentation>) -> &[Violation] {
        let this = self.clone();
        self.violations.get_or_init(move || {
            let mut out = Vec::new();
            for i in 0..this.n {
                for j in (i + 1)..this.n {
                    if this.a[i][j].is_zero() {
                        continue;
                    }
                    if this.q[i][j].is_one() && this.mode == Mode::WeylLike {
                        out.push(Violation::TrivialQWithA { i, j });
                    }
                    for k in 0..this.n {
                        if k == i || k == j {
                            continue;
                        }
                        if !this.q[i][k].mul(&this.q[j][k]).is_one() {
                            out.push(Violation::ProductRule { i, j, k });
                        }
                    }
                }
            }
            for i in 0..this.n {
                for j in (i + 1)..this.n {
                    for k in (j + 1)..this.n {
                        if this.diamond_fails(i, j, k) {
                            out.push(Violation::Diamond { i, j, k });
                        }
                    }
                }
            }
            out
        })
    }

    pub fn is_valid(self: &Arc<Presentation>) -> bool {
        self.validate().is_empty()
    }

    /// Resolves x_k x_j x_i with both bracketings and compares.
    fn diamond_fails(self: &Arc<Presentation>, i: usize, j: usize, k: usize) -> bool {
        let xk = AlgebraElement::generator(self.clone(), k);
        let xj = AlgebraElement::generator(self.clone(), j);
        let xi = AlgebraElement::generator(self.clone(), i);
        let left = xk.mul_unchecked(&xj).and_then(|kj| kj.mul_unchecked(&xi));
        let right = xj.mul_unchecked(&xi).and_then(|ji| xk.mul_unchecked(&ji));
        match (left, right) {
            (Ok(l), Ok(r)) => l != r,
            _ => true,
        }
    }

    /// The associated graded presentation: same q, all a = 0, no powers.
    pub fn skew_twin(self: &Arc<Presentation>) -> Result<Arc<Presentation>, AlgebraError> {
        let zero = CoefPoly::zero(self.table.clone(), self.conductor);
        Presentation::new(
            Mode::Skew,
            self.names.clone(),
            self.q.clone(),
            vec![vec![zero; self.n]; self.n],
            None,
            self.table.clone(),
            self.conductor,
            self.degree_cap,
        )
    }

    fn embed(&self, q: &UnityRoot) -> CycloNumber {
        CycloNumber::embed_root(q, self.conductor).expect("conductor validated at construction")
    }

    /// 1 + q + ... + q^(m-1) in the session field.
    fn q_integer(&self, q: &UnityRoot, m: u32) -> CycloNumber {
        let z = self.embed(q);
        let mut acc = CycloNumber::zero(self.conductor);
        let mut p = CycloNumber::one(self.conductor);
        for _ in 0..m {
            acc = acc.add(&p);
            p = p.mul(&z);
        }
        acc
    }
}

/// An algebra element in PBW normal form: generator-exponent vectors
/// mapped to nonzero coefficient polynomials.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pres: Arc<Presentation>,
    terms: BTreeMap<Monomial, CoefPoly>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.pres, &other.pres) || *self.pres == *other.pres)
            && self.terms == other.terms
    }
}

impl AlgebraElement {
    pub fn zero(pres: Arc<Presentation>) -> AlgebraElement {
        AlgebraElement {
            pres,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(pres: Arc<Presentation>) -> AlgebraElement {
        let c = CoefPoly::one(pres.table.clone(), pres.conductor);
        AlgebraElement::scalar(pres, c)
    }

    pub fn scalar(pres: Arc<Presentation>, c: CoefPoly) -> AlgebraElement {
        let mut el = AlgebraElement::zero(pres);
        el.add_term(Monomial::unit(el.pres.n), c);
        el
    }

    pub fn generator(pres: Arc<Presentation>, i: usize) -> AlgebraElement {
        let c = CoefPoly::one(pres.table.clone(), pres.conductor);
        AlgebraElement::monomial(pres, |exps| exps[i] = 1, c)
    }

    pub fn monomial<F: FnOnce(&mut [u32])>(
        pres: Arc<Presentation>,
        f: F,
        c: CoefPoly,
    ) -> AlgebraElement {
        let mut exps = vec![0u32; pres.n];
        f(&mut exps);
        let mut el = AlgebraElement::zero(pres);
        el.add_term(Monomial(exps.into_boxed_slice()), c);
        el
    }

    pub fn from_exponents(pres: Arc<Presentation>, exps: &[u32], c: CoefPoly) -> AlgebraElement {
        assert_eq!(exps.len(), pres.n);
        let mut el = AlgebraElement::zero(pres);
        el.add_term(Monomial(exps.to_vec().into_boxed_slice()), c);
        el
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CoefPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> CoefPoly {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| CoefPoly::zero(self.pres.table.clone(), self.pres.conductor))
    }

    fn add_term(&mut self, m: Monomial, c: CoefPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> AlgebraElement {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &CoefPoly) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.pres.clone());
        for (m, t) in self.terms.iter() {
            out.add_term(m.clone(), t.mul(c));
        }
        out
    }

    /// Total degree in the generators of the top filtration layer.
    pub fn top_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// The top-filtration-degree part, mapped into another presentation
    /// with the same generator count (typically the skew twin).
    pub fn top_part_in(&self, pres: &Arc<Presentation>) -> AlgebraElement {
        let top = self.top_degree();
        let mut out = AlgebraElement::zero(pres.clone());
        for (m, c) in self.terms.iter() {
            if m.degree() == top {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Right multiplication by a single generator, in normal form.
    fn right_mul_gen(&self, g: usize) -> Result<AlgebraElement, AlgebraError> {
        let pres = &self.pres;
        let n = pres.n;
        let mut out = AlgebraElement::zero(pres.clone());
        for (m, c) in self.terms.iter() {
            // Main term: x^e x_g picks up q factors from every block right
            // of slot g.
            let mut qfac = UnityRoot::one();
            for j in (g + 1)..n {
                if m.0[j] > 0 {
                    qfac = qfac.mul(&pres.q[g][j].pow(m.0[j] as i64));
                }
            }
            let mut exps = m.0.to_vec();
            exps[g] += 1;
            let mut coef = c.mul_scalar(&pres.embed(&qfac));
            if let Some(powers) = &pres.powers {
                let p = &powers[g];
                if exps[g] == p.exponent {
                    exps[g] = 0;
                    coef = coef.mul(&p.value);
                }
            }
            if exps.iter().map(|&e| e as u64).sum::<u64>() > pres.degree_cap as u64 {
                return Err(AlgebraError::DegreeCapExceeded(pres.degree_cap));
            }
            out.add_term(Monomial(exps.into_boxed_slice()), coef);

            // Correction terms: absorbing x_g into block j > g spends the
            // generator and lowers that block by one.
            for j in (g + 1)..n {
                if m.0[j] == 0 || pres.a[g][j].is_zero() {
                    continue;
                }
                let mut qout = UnityRoot::one();
                for l in (j + 1)..n {
                    if m.0[l] > 0 {
                        qout = qout.mul(&pres.q[g][l].pow(m.0[l] as i64));
                    }
                }
                let qint = pres.q_integer(&pres.q[g][j], m.0[j]);
                if qint.is_zero() {
                    continue;
                }
                let mut exps = m.0.to_vec();
                exps[j] -= 1;
                let coef = c
                    .mul_scalar(&pres.embed(&qout))
                    .mul_scalar(&qint)
                    .mul(&pres.a[g][j]);
                out.add_term(Monomial(exps.into_boxed_slice()), coef);
            }
        }
        Ok(out)
    }

    fn mul_unchecked(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let mut out = AlgebraElement::zero(self.pres.clone());
        for (m, c) in other.terms.iter() {
            let mut acc = self.clone();
            for (g, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.right_mul_gen(g)?;
                }
            }
            out = out.add(&acc.scale(c));
        }
        Ok(out)
    }

    /// Normal-form product. Requires a valid presentation.
    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if !(Arc::ptr_eq(&self.pres, &other.pres) || *self.pres == *other.pres) {
            return Err(AlgebraError::PresentationMismatch);
        }
        if !self.pres.is_valid() {
            return Err(AlgebraError::NonConfluent);
        }
        self.mul_unchecked(other)
    }

    /// True when the element commutes with every generator.
    pub fn is_central(&self) -> Result<bool, AlgebraError> {
        if !self.pres.is_valid() {
            return Err(AlgebraError::NonConfluent);
        }
        for i in 0..self.pres.n {
            let xi = AlgebraElement::generator(self.pres.clone(), i);
            if self.mul_unchecked(&xi)? != xi.mul_unchecked(self)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Rewrites a word in the generators (given by index) to normal form with
/// the given coefficient.
pub fn normal_form(
    pres: &Arc<Presentation>,
    word: &[usize],
    coef: CoefPoly,
) -> Result<AlgebraElement, AlgebraError> {
    if !pres.is_valid() {
        return Err(AlgebraError::NonConfluent);
    }
    let mut acc = AlgebraElement::scalar(pres.clone(), coef);
    for &g in word {
        acc = acc.right_mul_gen(g)?;
    }
    Ok(acc)
}

impl std::fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.pres.names[i].clone()
                    } else {
                        format!("{}^{}", self.pres.names[i], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;

    fn params_none() -> Arc<VarTable> {
        VarTable::parameters(&[])
    }

    /// The two-generator algebra with y x = q x y + a over no parameters.
    fn a_q(order: u64, a_val: i64) -> Arc<Presentation> {
        let table = params_none();
        let conductor = order;
        let q = UnityRoot::new(1, order).unwrap();
        PresentationBuilder::new(Mode::WeylLike, 2, table.clone(), conductor)
            .names(vec!["x".into(), "y".into()])
            .q(0, 1, q)
            .a(0, 1, CoefPoly::from_int(table, conductor, a_val))
            .build()
            .unwrap()
    }

    /// All q = -1, all a = 1.
    fn w_n(n: usize) -> Arc<Presentation> {
        let table = params_none();
        let mut b = PresentationBuilder::new(Mode::WeylLike, n, table.clone(), 2);
        for i in 0..n {
            for j in (i + 1)..n {
                b = b
                    .q(i, j, UnityRoot::minus_one())
                    .a(i, j, CoefPoly::from_int(table.clone(), 2, 1));
            }
        }
        b.build().unwrap()
    }

    /// The four-generator algebra over k[t] with x2 x1 = -x1 x2 + t, x3
    /// commuting with x1 and x2, and x4 anticommuting with the rest.
    fn b_over_t() -> Arc<Presentation> {
        let table = VarTable::parameters(&["t"]);
        let t = CoefPoly::var(table.clone(), 0, 2);
        PresentationBuilder::new(Mode::WeylLike, 4, table, 2)
            .q(0, 1, UnityRoot::minus_one())
            .a(0, 1, t)
            .q(0, 3, UnityRoot::minus_one())
            .q(1, 3, UnityRoot::minus_one())
            .q(2, 3, UnityRoot::minus_one())
            .build()
            .unwrap()
    }

    #[test]
    fn validate_w_n() {
        assert!(w_n(3).is_valid());
        assert!(w_n(4).is_valid());
    }

    #[test]
    fn validate_b_over_t() {
        assert!(b_over_t().is_valid());
    }

    #[test]
    fn validate_product_rule_violation() {
        let table = params_none();
        let p = PresentationBuilder::new(Mode::WeylLike, 3, table.clone(), 2)
            .q(0, 1, UnityRoot::minus_one())
            .a(0, 1, CoefPoly::from_int(table, 2, 1))
            .q(0, 2, UnityRoot::minus_one())
            .build()
            .unwrap();
        let violations = p.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::ProductRule { i: 0, j: 1, k: 2 })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::Diamond { i: 0, j: 1, k: 2 })));
    }

    #[test]
    fn normal_form_a_q() {
        // y x -> q x y + 1
        let p = a_q(3, 1);
        let nf = normal_form(&p, &[1, 0], CoefPoly::one(p.table().clone(), 3)).unwrap();
        let q = CycloNumber::zeta_power(3, 1);
        let mut expected = AlgebraElement::monomial(
            p.clone(),
            |e| {
                e[0] = 1;
                e[1] = 1;
            },
            CoefPoly::constant(p.table().clone(), q),
        );
        expected = expected.add(&AlgebraElement::one(p.clone()));
        assert_eq!(nf, expected);
    }

    #[test]
    fn normal_form_w2() {
        // x2 x1 -> -x1 x2 + 1
        let p = w_n(2);
        let nf = normal_form(&p, &[1, 0], CoefPoly::one(p.table().clone(), 2)).unwrap();
        let x1x2 = AlgebraElement::monomial(
            p.clone(),
            |e| {
                e[0] = 1;
                e[1] = 1;
            },
            CoefPoly::from_int(p.table().clone(), 2, -1),
        );
        let expected = x1x2.add(&AlgebraElement::one(p.clone()));
        assert_eq!(nf, expected);

        // An already ordered word stays put.
        let nf2 = normal_form(&p, &[0, 1], CoefPoly::one(p.table().clone(), 2)).unwrap();
        let expected2 = AlgebraElement::monomial(
            p.clone(),
            |e| {
                e[0] = 1;
                e[1] = 1;
            },
            CoefPoly::one(p.table().clone(), 2),
        );
        assert_eq!(nf2, expected2);
    }

    #[test]
    fn multiply_rewriting_chain() {
        // In A_{-1} with a = 1: y * (y x) = x y^2.
        let p = a_q(2, 1);
        let y = AlgebraElement::generator(p.clone(), 1);
        let x = AlgebraElement::generator(p.clone(), 0);
        let yx = y.multiply(&x).unwrap();
        let yyx = y.multiply(&yx).unwrap();
        let expected = AlgebraElement::monomial(
            p.clone(),
            |e| {
                e[0] = 1;
                e[1] = 2;
            },
            CoefPoly::one(p.table().clone(), 2),
        );
        assert_eq!(yyx, expected);
    }

    #[test]
    fn multiply_w2_square() {
        // (x1 x2)^2 = -x1^2 x2^2 + x1 x2
        let p = w_n(2);
        let m = AlgebraElement::monomial(
            p.clone(),
            |e| {
                e[0] = 1;
                e[1] = 1;
            },
            CoefPoly::one(p.table().clone(), 2),
        );
        let sq = m.multiply(&m).unwrap();
        let lead = AlgebraElement::monomial(
            p.clone(),
            |e| {
                e[0] = 2;
                e[1] = 2;
            },
            CoefPoly::from_int(p.table().clone(), 2, -1),
        );
        assert_eq!(sq, lead.add(&m));
    }

    #[test]
    fn centrality() {
        // x^n is central in A_q for q a primitive n-th root; x is not.
        for n in [2u64, 3, 4] {
            let p = a_q(n, 1);
            let xn = AlgebraElement::monomial(
                p.clone(),
                |e| e[0] = n as u32,
                CoefPoly::one(p.table().clone(), n),
            );
            assert!(xn.is_central().unwrap(), "x^{n} should be central");
            let x = AlgebraElement::generator(p.clone(), 0);
            assert!(!x.is_central().unwrap());
        }
    }

    #[test]
    fn centrality_in_skew() {
        // x_i^{L_i} is central in any skew presentation.
        let table = params_none();
        let p = PresentationBuilder::new(Mode::Skew, 3, table, 12)
            .q(0, 1, UnityRoot::new(1, 3).unwrap())
            .q(0, 2, UnityRoot::new(1, 4).unwrap())
            .q(1, 2, UnityRoot::new(1, 2).unwrap())
            .build()
            .unwrap();
        // L_1 = lcm(3,4) = 12, L_2 = lcm(3,2) = 6, L_3 = lcm(4,2) = 4.
        for (i, l) in [(0usize, 12u32), (1, 6), (2, 4)] {
            let xl = AlgebraElement::monomial(
                p.clone(),
                |e| e[i] = l,
                CoefPoly::one(p.table().clone(), 12),
            );
            assert!(xl.is_central().unwrap(), "x_{i}^{l} should be central");
        }
    }

    #[test]
    fn clifford_squares_reduce() {
        // x1^2 = c1, and x2 x1 = -x1 x2 + 2b.
        let table = VarTable::parameters(&["c1", "c2", "b"]);
        let c1 = CoefPoly::var(table.clone(), 0, 2);
        let c2 = CoefPoly::var(table.clone(), 1, 2);
        let b = CoefPoly::var(table.clone(), 2, 2);
        let p = PresentationBuilder::new(Mode::Clifford, 2, table.clone(), 2)
            .q(0, 1, UnityRoot::minus_one())
            .a(0, 1, b.mul_rat(&rat_int(2)))
            .power(0, 2, c1.clone())
            .power(1, 2, c2)
            .build()
            .unwrap();
        let x1 = AlgebraElement::generator(p.clone(), 0);
        let sq = x1.multiply(&x1).unwrap();
        assert_eq!(sq, AlgebraElement::scalar(p.clone(), c1));
        // x1 x2 * x1 x2 = -x1^2 x2^2 + 2b x1 x2 -> -c1 c2 + 2b x1 x2
        let x1x2 = AlgebraElement::monomial(
            p.clone(),
            |e| {
                e[0] = 1;
                e[1] = 1;
            },
            CoefPoly::one(table.clone(), 2),
        );
        let sq2 = x1x2.multiply(&x1x2).unwrap();
        let c1c2 = p.powers().unwrap()[0]
            .value
            .mul(&p.powers().unwrap()[1].value)
            .neg();
        let expected =
            AlgebraElement::scalar(p.clone(), c1c2).add(&x1x2.scale(&b.mul_rat(&rat_int(2))));
        assert_eq!(sq2, expected);
    }

    #[test]
    fn associativity_smoke() {
        let p = w_n(3);
        let one = CoefPoly::one(p.table().clone(), 2);
        let u = normal_form(&p, &[2, 0, 1], one.clone()).unwrap();
        let v = normal_form(&p, &[1, 1, 0], one.clone()).unwrap();
        let w = normal_form(&p, &[2, 2, 1], one).unwrap();
        let uv_w = u.multiply(&v).unwrap().multiply(&w).unwrap();
        let u_vw = u.multiply(&v.multiply(&w).unwrap()).unwrap();
        assert_eq!(uv_w, u_vw);
    }

    #[test]
    fn skew_monomial_products_stay_monomial() {
        let table = params_none();
        let p = PresentationBuilder::new(Mode::Skew, 3, table, 6)
            .q(0, 1, UnityRoot::new(1, 6).unwrap())
            .q(0, 2, UnityRoot::new(1, 3).unwrap())
            .q(1, 2, UnityRoot::new(1, 2).unwrap())
            .build()
            .unwrap();
        let one = CoefPoly::one(p.table().clone(), 6);
        let u = AlgebraElement::from_exponents(p.clone(), &[2, 1, 3], one.clone());
        let v = AlgebraElement::from_exponents(p.clone(), &[1, 2, 0], one);
        let uv = u.multiply(&v).unwrap();
        assert_eq!(uv.num_terms(), 1);
        let (m, c) = uv.terms().next().unwrap();
        assert_eq!(&m.0[..], &[3, 3, 3]);
        // q exponent: moving x1 once past x2^1 x3^3 and x2 twice past x3^3
        // inversions: q12^1 * q13^3 * q23^6 = zeta6^1 * zeta3^3 * (-1)^6
        let expected = CycloNumber::zeta_power(6, 1);
        assert_eq!(c.constant_value(), expected);
    }

    #[test]
    fn degree_cap_trips() {
        let table = params_none();
        let p = PresentationBuilder::new(Mode::Skew, 1, table, 1)
            .degree_cap(4)
            .build()
            .unwrap();
        let x = AlgebraElement::generator(p.clone(), 0);
        let x4 = x.multiply(&x).and_then(|x2| x2.multiply(&x2));
        assert!(x4.is_ok());
        let x8 = x4.unwrap().multiply(&x);
        assert_eq!(x8.unwrap_err(), AlgebraError::DegreeCapExceeded(4));
    }
}
