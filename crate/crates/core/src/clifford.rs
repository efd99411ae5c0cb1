//! Quadratic and bilinear forms, Clifford presentations, symmetric
//! diagonalization over the fraction field of the center, the determinant
//! power formula, generic Clifford algebras and their Hilbert series.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, Mode, Presentation, PresentationBuilder};
use crate::arith::UnityRoot;
use crate::discr::{closed_form, ClosedFormKind, DiscrError, Discriminant, FreeModuleData};
use crate::poly::{gcd, CoefPoly, PolyError, PolyMatrix, VarDef, VarRole, VarTable};
use crate::Limits;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("bilinear matrix must be square and symmetric")]
    NotSymmetric,
    #[error("degenerate pivot at stage {0}")]
    DegeneratePivot(usize),
    #[error("pair ({0}, {1}) is out of range or not strictly upper")]
    BadPair(usize, usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Discr(#[from] DiscrError),
}

/// A quadratic form given by its symmetric bilinear matrix over the
/// parameter ring; the diagonal holds the squares q(x_i).
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    bilinear: PolyMatrix,
}

impl QuadraticForm {
    pub fn new(bilinear: PolyMatrix) -> Result<QuadraticForm, CliffordError> {
        if bilinear.rows() != bilinear.cols() || !bilinear.is_symmetric() {
            return Err(CliffordError::NotSymmetric);
        }
        Ok(QuadraticForm { bilinear })
    }

    pub fn n(&self) -> usize {
        self.bilinear.rows()
    }

    pub fn bilinear(&self) -> &PolyMatrix {
        &self.bilinear
    }

    /// det of the bilinear matrix.
    pub fn det(&self) -> Result<CoefPoly, CliffordError> {
        Ok(self.bilinear.det_fraction_free()?)
    }

    /// The Clifford presentation: x_i x_j + x_j x_i = 2 b_ij, x_i^2 = b_ii.
    pub fn presentation(
        &self,
        names: Vec<String>,
        degree_cap: u32,
    ) -> Result<Arc<Presentation>, CliffordError> {
        let n = self.n();
        let table = self.bilinear.table().clone();
        let conductor = self.bilinear.conductor().max(2);
        let mut b = PresentationBuilder::new(Mode::Clifford, n, table, conductor)
            .names(names)
            .degree_cap(degree_cap);
        for i in 0..n {
            for j in (i + 1)..n {
                b = b.q(i, j, UnityRoot::minus_one());
                let bij = self.bilinear.at(i, j).lift_conductor(conductor);
                if !bij.is_zero() {
                    b = b.a(i, j, bij.mul_rat(&crate::arith::rat_int(2)));
                }
            }
            b = b.power(i, 2, self.bilinear.at(i, i).lift_conductor(conductor));
        }
        Ok(b.build()?)
    }

    /// The anticommutator matrix 2B.
    pub fn doubled(&self) -> PolyMatrix {
        PolyMatrix::from_fn(
            self.bilinear.table().clone(),
            self.bilinear.conductor(),
            self.n(),
            self.n(),
            |i, j| self.bilinear.at(i, j).mul_rat(&crate::arith::rat_int(2)),
        )
    }
}

/// det(2B)^(2^(n-1)), unit normalized.
pub fn clifford_discriminant(qf: &QuadraticForm) -> Result<Discriminant, CliffordError> {
    let det = qf.doubled().det_fraction_free()?;
    if det.is_zero() {
        return Err(CliffordError::Discr(DiscrError::ZeroDiscriminant));
    }
    let raw = det.pow(1u64 << (qf.n() - 1));
    let value = raw.unit_normalize()?;
    Ok(Discriminant {
        value,
        raw,
        provenance: crate::discr::Provenance::ClosedForm(ClosedFormKind::CliffordDet),
    })
}

/// Cross-check of the closed form against the trace oracle on the
/// Clifford presentation itself.
pub fn verify_clifford_discriminant(
    qf: &QuadraticForm,
    limits: &Limits,
) -> Result<crate::discr::VerificationReport, CliffordError> {
    let names = (1..=qf.n()).map(|i| format!("x{i}")).collect();
    let pres = qf.presentation(names, limits.degree_cap)?;
    let fm = FreeModuleData::over_parameters(&pres, limits)?;
    let brute = fm.brute_discriminant()?;
    let closed = closed_form(&fm, ClosedFormKind::CliffordDet)?;
    Ok(crate::discr::VerificationReport {
        matched: brute.value == closed.value,
        brute,
        closed,
    })
}

/// An element of the fraction field of the polynomial ring, kept reduced
/// with a monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RatPoly {
    pub num: CoefPoly,
    pub den: CoefPoly,
}

impl RatPoly {
    pub fn from_poly(p: CoefPoly) -> RatPoly {
        let den = CoefPoly::one(p.table().clone(), p.conductor());
        RatPoly { num: p, den }
    }

    pub fn new(num: CoefPoly, den: CoefPoly) -> RatPoly {
        assert!(!den.is_zero(), "zero denominator");
        RatPoly { num, den }.reduce()
    }

    fn reduce(self) -> RatPoly {
        if self.num.is_zero() {
            let one = CoefPoly::one(self.den.table().clone(), self.den.conductor());
            return RatPoly {
                num: self.num,
                den: one,
            };
        }
        // Exact-division fast path before a full gcd.
        if let Ok(q) = self.num.exact_div(&self.den) {
            let one = CoefPoly::one(self.den.table().clone(), self.den.conductor());
            return RatPoly { num: q, den: one };
        }
        let g = gcd(&self.num, &self.den);
        let (mut num, mut den) = if g.is_one() {
            (self.num, self.den)
        } else {
            (
                self.num.exact_div(&g).expect("gcd divides"),
                self.den.exact_div(&g).expect("gcd divides"),
            )
        };
        // Monic denominator so representations are canonical.
        let lc = den.leading_coeff().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.inverse().expect("field");
            den = den.mul_scalar(&inv);
            num = num.mul_scalar(&inv);
        }
        RatPoly { num, den }
    }

    pub fn zero_like(&self) -> RatPoly {
        RatPoly::from_poly(CoefPoly::zero(
            self.num.table().clone(),
            self.num.conductor(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        RatPoly::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        RatPoly::new(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        RatPoly::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatPoly) -> RatPoly {
        assert!(!o.is_zero(), "division by zero fraction");
        RatPoly::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl std::fmt::Display for RatPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// One congruence stage of the symmetric elimination.
#[derive(Debug, Clone)]
pub struct DiagonalizationStage {
    /// 1-based stage counter; stage 1 is the input matrix.
    pub stage: usize,
    /// Row multipliers applied below the previous pivot (empty at stage 1).
    pub multipliers: Vec<RatPoly>,
    /// The matrix M_s after this stage.
    pub matrix: Vec<Vec<RatPoly>>,
    /// Pivots inverted so far (the localized set).
    pub inverted: Vec<CoefPoly>,
    /// det M_s, which must match det M_1 at every stage.
    pub det: RatPoly,
}

#[derive(Debug, Clone)]
pub struct DiagonalizationTrace {
    pub stages: Vec<DiagonalizationStage>,
    /// The diagonal of the final stage.
    pub diagonal: Vec<RatPoly>,
    /// det M_1 as an exact polynomial.
    pub det: CoefPoly,
}

fn rat_matrix_det(m: &[Vec<RatPoly>]) -> RatPoly {
    // Fraction-field Gaussian elimination; dimensions here are tiny.
    let n = m.len();
    let mut work: Vec<Vec<RatPoly>> = m.to_vec();
    let mut det = RatPoly::from_poly(CoefPoly::one(
        m[0][0].num.table().clone(),
        m[0][0].num.conductor(),
    ));
    let mut sign_neg = false;
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !work[r][k].is_zero());
        let pr = match pivot_row {
            Some(pr) => pr,
            None => return m[0][0].zero_like(),
        };
        if pr != k {
            work.swap(pr, k);
            sign_neg = !sign_neg;
        }
        let pivot = work[k][k].clone();
        det = det.mul(&pivot);
        for r in (k + 1)..n {
            if work[r][k].is_zero() {
                continue;
            }
            let f = work[r][k].div(&pivot);
            for c in k..n {
                let delta = f.mul(&work[k][c]);
                work[r][c] = work[r][c].sub(&delta);
            }
        }
    }
    if sign_neg {
        det.neg()
    } else {
        det
    }
}

/// Iterative symmetric diagonalization of the anticommutator matrix 2B by
/// unit-triangular congruence; the determinant is preserved stage by
/// stage and every pivot must stay nonzero in the fraction field.
pub fn diagonalize(qf: &QuadraticForm) -> Result<DiagonalizationTrace, CliffordError> {
    let n = qf.n();
    let m1 = qf.doubled();
    let det_exact = m1.det_fraction_free()?;
    let mut work: Vec<Vec<RatPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| RatPoly::from_poly(m1.at(i, j).clone()))
                .collect()
        })
        .collect();
    let det_target = rat_matrix_det(&work);
    let mut inverted: Vec<CoefPoly> = Vec::new();
    let mut stages = vec![DiagonalizationStage {
        stage: 1,
        multipliers: Vec::new(),
        matrix: work.clone(),
        inverted: inverted.clone(),
        det: det_target.clone(),
    }];

    for s in 2..=n {
        let k = s - 2;
        let pivot = work[k][k].clone();
        if pivot.is_zero() {
            return Err(CliffordError::DegeneratePivot(s));
        }
        inverted.push(pivot.num.clone());
        let mut multipliers = Vec::new();
        let factors: Vec<RatPoly> = ((k + 1)..n)
            .map(|i| work[k][i].div(&pivot))
            .collect();
        for (offset, f) in factors.iter().enumerate() {
            multipliers.push(f.neg());
            let i = k + 1 + offset;
            if f.is_zero() {
                continue;
            }
            // Symmetric congruence: row and column updates together give
            // new[i][j] = old[i][j] - old[k][i] old[k][j] / pivot.
            for j in (k + 1)..n {
                let delta = f.mul(&work[k][j]);
                work[i][j] = work[i][j].sub(&delta);
            }
        }
        for i in (k + 1)..n {
            work[k][i] = work[k][i].zero_like();
            work[i][k] = work[i][k].zero_like();
        }
        let det_s = rat_matrix_det(&work);
        if det_s != det_target {
            // Unit-triangular congruence cannot change the determinant.
            return Err(CliffordError::DegeneratePivot(s));
        }
        stages.push(DiagonalizationStage {
            stage: s,
            multipliers,
            matrix: work.clone(),
            inverted: inverted.clone(),
            det: det_s,
        });
    }

    let diagonal: Vec<RatPoly> = (0..n).map(|i| work[i][i].clone()).collect();
    Ok(DiagonalizationTrace {
        stages,
        diagonal,
        det: det_exact,
    })
}

/// A generic Clifford algebra on n generators with the pairs in J killed:
/// x_i x_j + x_j x_i = 2 t_(i,j) for kept pairs, 0 for excluded ones,
/// and x_i^2 = t_(i,i).
#[derive(Debug, Clone)]
pub struct GenericCliffordSpec {
    pub n: usize,
    /// Excluded strict pairs, 0-based, i < j.
    pub excluded: Vec<(usize, usize)>,
    pub table: Arc<VarTable>,
    /// Number of surviving t variables.
    pub w: usize,
}

impl GenericCliffordSpec {
    pub fn new(n: usize, excluded: &[(usize, usize)]) -> Result<GenericCliffordSpec, CliffordError> {
        let mut ex = excluded.to_vec();
        for &(i, j) in &ex {
            if i >= j || j >= n {
                return Err(CliffordError::BadPair(i, j));
            }
        }
        ex.sort_unstable();
        ex.dedup();
        let mut defs = Vec::new();
        for i in 0..n {
            for j in i..n {
                if i != j && ex.contains(&(i, j)) {
                    continue;
                }
                defs.push(VarDef {
                    name: format!("t{}{}", i + 1, j + 1),
                    role: VarRole::Parameter,
                });
            }
        }
        let w = defs.len();
        Ok(GenericCliffordSpec {
            n,
            excluded: ex,
            table: VarTable::new(defs),
            w,
        })
    }

    pub fn t_var(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.table.index_of(&format!("t{}{}", i + 1, j + 1))
    }

    pub fn presentation(&self, degree_cap: u32) -> Result<Arc<Presentation>, CliffordError> {
        let conductor = 2;
        let mut b = PresentationBuilder::new(Mode::Clifford, self.n, self.table.clone(), conductor)
            .degree_cap(degree_cap);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                b = b.q(i, j, UnityRoot::minus_one());
                if let Some(v) = self.t_var(i, j) {
                    let t = CoefPoly::var(self.table.clone(), v, conductor);
                    b = b.a(i, j, t.mul_rat(&crate::arith::rat_int(2)));
                }
            }
            let v = self.t_var(i, i).expect("diagonal variables always exist");
            b = b.power(i, 2, CoefPoly::var(self.table.clone(), v, conductor));
        }
        Ok(b.build()?)
    }

    /// The quadratic form whose Clifford algebra this is.
    pub fn quadratic_form(&self) -> QuadraticForm {
        let conductor = 2;
        let bilinear = PolyMatrix::from_fn(self.table.clone(), conductor, self.n, self.n, |i, j| {
            match self.t_var(i, j) {
                Some(v) => CoefPoly::var(self.table.clone(), v, conductor),
                None => CoefPoly::zero(self.table.clone(), conductor),
            }
        });
        QuadraticForm { bilinear }
    }
}

/// The graded dimension series (1+t)^n / (1-t^2)^w with deg x_i = 1 and
/// deg t = 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    pub gen_count: usize,
    pub relation_vars: usize,
}

impl HilbertSeries {
    /// Coefficient of t^d, by honest power-series expansion of the
    /// rational function.
    pub fn coefficient(&self, d: usize) -> u128 {
        // Series of 1/(1-t^2)^w by iterated convolution with 1/(1-t^2).
        let mut series = vec![0u128; d + 1];
        series[0] = 1;
        for _ in 0..self.relation_vars {
            let mut next = vec![0u128; d + 1];
            for k in 0..=d {
                if series[k] == 0 {
                    continue;
                }
                let mut j = k;
                while j <= d {
                    next[j] += series[k];
                    j += 2;
                }
            }
            series = next;
        }
        // Multiply by (1+t)^n via binomial convolution.
        let mut total = 0u128;
        let mut binom: u128 = 1;
        for j in 0..=self.gen_count.min(d) {
            total += binom * series[d - j];
            binom = binom * (self.gen_count - j) as u128 / (j + 1) as u128;
        }
        total
    }
}

impl std::fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(1+t)^{} / (1-t^2)^{}",
            self.gen_count, self.relation_vars
        )
    }
}

/// Counts PBW basis monomials x^d t^e with |d| + 2|e| = degree by direct
/// enumeration; the independent cross-check of the series.
pub fn enumerate_graded_dimension(n: usize, w: usize, degree: usize) -> u128 {
    fn monomials_of_degree(vars: usize, degree: usize) -> u128 {
        // Stars and bars by explicit recursion.
        if vars == 0 {
            return u128::from(degree == 0);
        }
        let mut count = 0u128;
        for first in 0..=degree {
            count += monomials_of_degree(vars - 1, degree - first);
        }
        count
    }
    let mut total = 0u128;
    for gens in 0..=n.min(degree) {
        let rest = degree - gens;
        if rest % 2 != 0 {
            continue;
        }
        // Choose which generators appear (exterior part), then a t-monomial.
        let mut choose: u128 = 1;
        for j in 0..gens {
            choose = choose * (n - j) as u128 / (j + 1) as u128;
        }
        total += choose * monomials_of_degree(w, rest / 2);
    }
    total
}

/// Full construction of a generic Clifford algebra: presentation, series,
/// and the structural checks on each kept strict pair (centrality of the
/// pair variable and the drop of the series when it is killed).
pub struct GenericCliffordReport {
    pub spec: GenericCliffordSpec,
    pub presentation: Arc<Presentation>,
    pub series: HilbertSeries,
    /// (degree, series coefficient, enumerated dimension) pairs.
    pub dimensions: Vec<(usize, u128, u128)>,
    /// Kept strict pairs whose variable was verified central and whose
    /// quotient drops the relation count by one.
    pub checked_pairs: Vec<(usize, usize)>,
    /// Degrees at which the regular-element bookkeeping was verified.
    pub regularity_degrees: Vec<usize>,
}

pub fn generic_clifford(
    n: usize,
    excluded: &[(usize, usize)],
    max_degree: usize,
    limits: &Limits,
) -> Result<GenericCliffordReport, CliffordError> {
    let spec = GenericCliffordSpec::new(n, excluded)?;
    let presentation = spec.presentation(limits.degree_cap)?;
    let series = HilbertSeries {
        gen_count: n,
        relation_vars: spec.w,
    };
    let mut dimensions = Vec::new();
    for d in 0..=max_degree {
        dimensions.push((
            d,
            series.coefficient(d),
            enumerate_graded_dimension(n, spec.w, d),
        ));
    }

    let mut checked_pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = match spec.t_var(i, j) {
                Some(v) => v,
                None => continue,
            };
            let t = AlgebraElement::scalar(
                presentation.clone(),
                CoefPoly::var(spec.table.clone(), v, presentation.conductor()),
            );
            if !t.is_central()? {
                return Err(CliffordError::Algebra(AlgebraError::NonConfluent));
            }
            let mut bigger = spec.excluded.clone();
            bigger.push((i, j));
            let quotient = GenericCliffordSpec::new(n, &bigger)?;
            if quotient.w + 1 != spec.w {
                return Err(CliffordError::BadPair(i, j));
            }
            checked_pairs.push((i, j));
        }
    }

    // Regularity bookkeeping: killing a kept pair variable t removes
    // exactly a shifted copy of the series, so multiplication by t is
    // injective degree by degree.
    let mut regularity_degrees = Vec::new();
    if let Some(&(i, j)) = checked_pairs.first() {
        let mut bigger = spec.excluded.clone();
        bigger.push((i, j));
        let quotient_series = HilbertSeries {
            gen_count: n,
            relation_vars: spec.w - 1,
        };
        for d in 2..=max_degree {
            let lhs = series.coefficient(d) - quotient_series.coefficient(d);
            let rhs = series.coefficient(d - 2);
            if lhs != rhs {
                return Err(CliffordError::BadPair(i, j));
            }
            regularity_degrees.push(d);
        }
    }

    Ok(GenericCliffordReport {
        spec,
        presentation,
        series,
        dimensions,
        checked_pairs,
        regularity_degrees,
    })
}
