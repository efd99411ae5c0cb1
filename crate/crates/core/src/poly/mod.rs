//! Sparse multivariate polynomials over Q(zeta_N), with exact division,
//! fraction-free determinants, square-free factorization and unit
//! normalization. The monomial order is graded lexicographic over the
//! session variable table.

mod det;
mod factor;
mod gcd;

pub use det::PolyMatrix;
pub use factor::{as_monomial, as_single_variable as single_variable, remultiply};
pub use gcd::gcd;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{CycloNumber, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable context mismatch")]
    VariableContextMismatch,
    #[error("division by zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("not divisible")]
    NotDivisible,
    #[error("determinant of non-square matrix")]
    NonSquareMatrix,
    #[error("cannot normalize zero")]
    NormalizeZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Role of a variable in the session ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarRole {
    /// A commuting parameter of the coefficient ring T.
    Parameter,
    /// A central generator standing for x_g^power; printed as powers of the
    /// underlying algebra generator.
    CentralGen { generator: usize, power: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDef {
    pub name: String,
    pub role: VarRole,
}

/// Ordered list of session variables; the order fixes the monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarTable {
    vars: Vec<VarDef>,
}

impl VarTable {
    pub fn new(vars: Vec<VarDef>) -> Arc<VarTable> {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            assert!(seen.insert(v.name.clone()), "duplicate variable {}", v.name);
        }
        Arc::new(VarTable { vars })
    }

    pub fn parameters(names: &[&str]) -> Arc<VarTable> {
        VarTable::new(
            names
                .iter()
                .map(|n| VarDef {
                    name: n.to_string(),
                    role: VarRole::Parameter,
                })
                .collect(),
        )
    }

    pub fn empty() -> Arc<VarTable> {
        VarTable::new(vec![])
    }

    /// New table with extra variables appended; the old table stays a prefix.
    pub fn extend(self: &Arc<VarTable>, extra: Vec<VarDef>) -> Arc<VarTable> {
        let mut vars = self.vars.clone();
        vars.extend(extra);
        VarTable::new(vars)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn defs(&self) -> &[VarDef] {
        &self.vars
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.vars[idx].name
    }

    pub fn role(&self, idx: usize) -> &VarRole {
        &self.vars[idx].role
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Index of the central-generator variable for algebra generator `g`.
    pub fn central_var_of(&self, g: usize) -> Option<usize> {
        self.vars.iter().position(
            |v| matches!(v.role, VarRole::CentralGen { generator, .. } if generator == g),
        )
    }

    fn is_prefix_of(&self, other: &VarTable) -> bool {
        self.vars.len() <= other.vars.len() && self.vars[..] == other.vars[..self.vars.len()]
    }
}

/// Exponent vector keyed by the session variable table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Box<[u32]>);

impl Monomial {
    pub fn unit(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, idx: usize, e: u32) -> Monomial {
        let mut v = vec![0; nvars];
        v[idx] = e;
        Monomial(v.into_boxed_slice())
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise division; None when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out.into_boxed_slice()))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with CycloNumber coefficients.
#[derive(Debug, Clone)]
pub struct CoefPoly {
    table: Arc<VarTable>,
    conductor: u64,
    terms: BTreeMap<Monomial, CycloNumber>,
}

impl PartialEq for CoefPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.table == *other.table && self.terms == other.terms
    }
}

impl Eq for CoefPoly {}

impl CoefPoly {
    pub fn zero(table: Arc<VarTable>, conductor: u64) -> CoefPoly {
        CoefPoly {
            table,
            conductor,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: Arc<VarTable>, c: CycloNumber) -> CoefPoly {
        let conductor = c.conductor();
        let mut p = CoefPoly::zero(table, conductor);
        p.add_term(Monomial::unit(p.table.len()), c);
        p
    }

    pub fn one(table: Arc<VarTable>, conductor: u64) -> CoefPoly {
        CoefPoly::constant(table, CycloNumber::one(conductor))
    }

    pub fn from_int(table: Arc<VarTable>, conductor: u64, n: i64) -> CoefPoly {
        CoefPoly::constant(table, CycloNumber::from_int(n, conductor))
    }

    pub fn var(table: Arc<VarTable>, idx: usize, conductor: u64) -> CoefPoly {
        CoefPoly::var_pow(table, idx, 1, conductor)
    }

    pub fn var_pow(table: Arc<VarTable>, idx: usize, e: u32, conductor: u64) -> CoefPoly {
        let m = Monomial::var(table.len(), idx, e);
        let mut p = CoefPoly::zero(table, conductor);
        p.add_term(m, CycloNumber::one(conductor));
        p
    }

    pub fn monomial(table: Arc<VarTable>, exps: &[u32], c: CycloNumber) -> CoefPoly {
        assert_eq!(exps.len(), table.len());
        let conductor = c.conductor();
        let mut p = CoefPoly::zero(table, conductor);
        p.add_term(Monomial(exps.to_vec().into_boxed_slice()), c);
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycloNumber)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_one()
    }

    /// The coefficient of the unit monomial (the whole value if constant).
    pub fn constant_value(&self) -> CycloNumber {
        self.terms
            .get(&Monomial::unit(self.table.len()))
            .cloned()
            .unwrap_or_else(|| CycloNumber::zero(self.conductor))
    }

    pub fn coefficient(&self, m: &Monomial) -> CycloNumber {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| CycloNumber::zero(self.conductor))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn same_table(&self, other: &CoefPoly) -> Result<(), PolyError> {
        if *self.table == *other.table {
            Ok(())
        } else {
            Err(PolyError::VariableContextMismatch)
        }
    }

    fn add_term(&mut self, m: Monomial, c: CycloNumber) {
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

    pub fn leading(&self) -> Option<(&Monomial, &CycloNumber)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&CycloNumber> {
        self.leading().map(|(_, c)| c)
    }

    pub fn neg(&self) -> CoefPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn add(&self, other: &CoefPoly) -> CoefPoly {
        self.same_table(other).expect("variable context mismatch");
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CoefPoly) -> CoefPoly {
        self.same_table(other).expect("variable context mismatch");
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &CoefPoly) -> CoefPoly {
        self.same_table(other).expect("variable context mismatch");
        let mut out = CoefPoly::zero(self.table.clone(), self.conductor.max(other.conductor));
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &CycloNumber) -> CoefPoly {
        if c.is_zero() {
            return CoefPoly::zero(self.table.clone(), self.conductor);
        }
        let mut out = CoefPoly::zero(self.table.clone(), self.conductor.max(c.conductor()));
        for (m, t) in self.terms.iter() {
            out.add_term(m.clone(), t.mul(c));
        }
        out
    }

    pub fn mul_rat(&self, r: &Rat) -> CoefPoly {
        self.mul_scalar(&CycloNumber::from_rat(r.clone(), self.conductor))
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &CycloNumber) -> CoefPoly {
        let mut out = CoefPoly::zero(self.table.clone(), self.conductor.max(c.conductor()));
        for (mt, ct) in self.terms.iter() {
            out.add_term(mt.mul(m), ct.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u64) -> CoefPoly {
        let mut out = CoefPoly::one(self.table.clone(), self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact quotient; `NotDivisible` is a distinguished outcome, not a bug.
    pub fn exact_div(&self, b: &CoefPoly) -> Result<CoefPoly, PolyError> {
        self.same_table(b)?;
        if b.is_zero() {
            return Err(PolyError::DivisionByZeroPolynomial);
        }
        let mut rem = self.clone();
        let mut quot = CoefPoly::zero(self.table.clone(), self.conductor.max(b.conductor));
        let (lm, lc) = b.leading().expect("b nonzero");
        let lm = lm.clone();
        let lc = lc.clone();
        let lc_inv = lc.inverse().expect("leading coefficient nonzero");
        while let Some((m, c)) = rem.leading() {
            let m = m.clone();
            let c = c.clone();
            let q_mono = match m.div(&lm) {
                Some(q) => q,
                None => return Err(PolyError::NotDivisible),
            };
            let q_coef = c.mul(&lc_inv);
            quot.add_term(q_mono.clone(), q_coef.clone());
            rem = rem.sub(&b.mul_monomial(&q_mono, &q_coef));
        }
        Ok(quot)
    }

    pub fn derivative(&self, var: usize) -> CoefPoly {
        let mut out = CoefPoly::zero(self.table.clone(), self.conductor);
        for (m, c) in self.terms.iter() {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.to_vec();
            exps[var] = e - 1;
            out.add_term(
                Monomial(exps.into_boxed_slice()),
                c.mul(&CycloNumber::from_int(e as i64, self.conductor)),
            );
        }
        out
    }

    /// Replace a variable by a polynomial over the same table.
    pub fn substitute(&self, var: usize, replacement: &CoefPoly) -> CoefPoly {
        self.same_table(replacement)
            .expect("variable context mismatch");
        let mut powers: Vec<CoefPoly> = vec![CoefPoly::one(self.table.clone(), self.conductor)];
        let max_e = self.degree_in(var);
        for _ in 0..max_e {
            powers.push(powers.last().unwrap().mul(replacement));
        }
        let mut out = CoefPoly::zero(self.table.clone(), self.conductor);
        for (m, c) in self.terms.iter() {
            let e = m.0[var] as usize;
            let mut exps = m.0.to_vec();
            exps[var] = 0;
            let rest = CoefPoly::monomial(self.table.clone(), &exps, c.clone());
            out = out.add(&rest.mul(&powers[e]));
        }
        out
    }

    /// View as univariate in `var`: coefficient polynomials keyed by exponent.
    pub fn as_univariate(&self, var: usize) -> BTreeMap<u32, CoefPoly> {
        let mut out: BTreeMap<u32, CoefPoly> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let e = m.0[var];
            let mut exps = m.0.to_vec();
            exps[var] = 0;
            out.entry(e)
                .or_insert_with(|| CoefPoly::zero(self.table.clone(), self.conductor))
                .add_term(Monomial(exps.into_boxed_slice()), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn from_univariate(
        table: Arc<VarTable>,
        conductor: u64,
        var: usize,
        coeffs: &BTreeMap<u32, CoefPoly>,
    ) -> CoefPoly {
        let mut out = CoefPoly::zero(table.clone(), conductor);
        for (e, p) in coeffs {
            let m = Monomial::var(table.len(), var, *e);
            out = out.add(&p.mul_monomial(&m, &CycloNumber::one(conductor)));
        }
        out
    }

    /// Per-variable minimum exponents over all terms (the monomial content).
    pub fn monomial_content(&self) -> Monomial {
        let n = self.table.len();
        let mut mins = vec![u32::MAX; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                mins[i] = mins[i].min(e);
            }
        }
        if self.terms.is_empty() {
            mins = vec![0; n];
        }
        Monomial(mins.into_boxed_slice())
    }

    /// Divides by the leading coefficient so the graded-lex leading term
    /// becomes monic. Scalar-invariant and idempotent.
    pub fn unit_normalize(&self) -> Result<CoefPoly, PolyError> {
        let lc = self.leading_coeff().ok_or(PolyError::NormalizeZero)?;
        if lc.is_one() {
            return Ok(self.clone());
        }
        let inv = lc.inverse().expect("leading coefficient nonzero");
        Ok(self.mul_scalar(&inv))
    }

    /// Square-free decomposition up to a unit: pairwise-coprime square-free
    /// factors with multiplicities, single-variable monomial factors split
    /// off on their own.
    pub fn squarefree_factors(&self) -> Vec<(CoefPoly, u32)> {
        factor::squarefree_factors(self)
    }

    /// Embeds into a table that has the current one as a prefix.
    pub fn lift_to(&self, table: &Arc<VarTable>) -> CoefPoly {
        if *self.table == **table {
            return self.clone();
        }
        assert!(
            self.table.is_prefix_of(table),
            "variable context mismatch: cannot lift"
        );
        let mut out = CoefPoly::zero(table.clone(), self.conductor);
        let pad = table.len() - self.table.len();
        for (m, c) in self.terms.iter() {
            let mut exps = m.0.to_vec();
            exps.extend(std::iter::repeat(0).take(pad));
            out.add_term(Monomial(exps.into_boxed_slice()), c.clone());
        }
        out
    }

    /// Lifts all coefficients into Q(zeta_conductor).
    pub fn lift_conductor(&self, conductor: u64) -> CoefPoly {
        let mut out = CoefPoly::zero(self.table.clone(), conductor);
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), c.lift(conductor).expect("conductor multiple"));
        }
        out
    }

    /// Sum of the terms of maximal weighted degree (weights per variable).
    pub fn weighted_top_part(&self, weights: &[u64]) -> CoefPoly {
        assert_eq!(weights.len(), self.table.len());
        let wdeg = |m: &Monomial| -> u64 {
            m.0.iter()
                .zip(weights.iter())
                .map(|(&e, &w)| e as u64 * w)
                .sum()
        };
        let top = self.terms.keys().map(wdeg).max().unwrap_or(0);
        let mut out = CoefPoly::zero(self.table.clone(), self.conductor);
        for (m, c) in self.terms.iter() {
            if wdeg(m) == top {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Deterministic total order for report output; not the monomial order.
    pub fn cmp_canonical(&self, other: &CoefPoly) -> Ordering {
        let key = |p: &CoefPoly| (p.total_degree(), p.num_terms());
        key(self).cmp(&key(other)).then_with(|| {
            let mut a = self.terms.iter().rev();
            let mut b = other.terms.iter().rev();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some((ma, ca)), Some((mb, cb))) => {
                        let ord = ma.cmp(mb).then_with(|| cmp_cyclo(ca, cb));
                        if ord != Ordering::Equal {
                            return ord;
                        }
                    }
                }
            }
        })
    }
}

fn cmp_cyclo(a: &CycloNumber, b: &CycloNumber) -> Ordering {
    let c = num_integer::lcm(a.conductor(), b.conductor());
    let la = a.lift(c).expect("lcm");
    let lb = b.lift(c).expect("lcm");
    la.coeffs().cmp(lb.coeffs())
}

fn format_coeff(c: &CycloNumber, f: &mut fmt::Formatter<'_>, leading_space: bool) -> fmt::Result {
    // Sign handling is the caller's job for rationals; cyclotomic
    // coefficients are parenthesized verbatim.
    match c.as_rat() {
        Some(r) => {
            let abs = r.abs();
            if leading_space {
                write!(f, "{}", if r.is_negative() { " - " } else { " + " })?;
            } else if r.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", abs)
        }
        None => {
            if leading_space {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)
        }
    }
}

impl fmt::Display for CoefPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut vars = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                match self.table.role(i) {
                    VarRole::Parameter => {
                        vars.push_str(self.table.name(i));
                        if e > 1 {
                            vars.push_str(&format!("^{}", e));
                        }
                    }
                    VarRole::CentralGen { power, .. } => {
                        vars.push_str(self.table.name(i));
                        let shown = *power * e as u64;
                        if shown > 1 {
                            vars.push_str(&format!("^{}", shown));
                        }
                    }
                }
            }
            let coeff_is_unit = c.as_rat().map(|r| r.abs().is_one()).unwrap_or(false);
            if vars.is_empty() {
                format_coeff(c, f, !first)?;
            } else if coeff_is_unit {
                let r = c.as_rat().unwrap();
                if first {
                    if r.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if r.is_negative() { " - " } else { " + " })?;
                }
                write!(f, "{}", vars)?;
            } else {
                format_coeff(c, f, !first)?;
                write!(f, "*{}", vars)?;
            }
            first = false;
        }
        Ok(())
    }
}
