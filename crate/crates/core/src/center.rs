//! Center analysis of skew polynomial rings: the exponent matrices built
//! from the q-grid, their mod-p level blocks, the polynomiality verdict,
//! low-dimensional fast paths, and the lift to filtered algebras.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraElement, Mode, Presentation};
use crate::arith::{prime_factors, UnityRoot};
use crate::poly::CoefPoly;
use std::sync::Arc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CenterError {
    #[error("q grid is not skew-normalized: q[{j}][{i}] must be the inverse of q[{i}][{j}]")]
    NotSkewNormalized { i: usize, j: usize },
    #[error("q grid must be square with 1 on the diagonal")]
    BadShape,
    #[error("integer overflow while building the exponent matrix")]
    Overflow,
    #[error("center is not a polynomial ring; nothing to lift")]
    VerdictNotPolynomial,
    #[error("centrality check failed for x{0}^{1}; the presentation is invalid")]
    CentralityCheckFailed(usize, u64),
    #[error("fast path requires n = {expected}, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("center lifting requires a skew or filtered presentation without power relations")]
    WrongMode,
    #[error("presentation violates its confluence conditions")]
    InvalidPresentation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Polynomial,
    NotPolynomial,
}

/// One mod-p level block: the submatrix of the integer exponent matrix on
/// the indices whose L value is exactly divisible by prime^level, reduced
/// mod p to balanced representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRecord {
    pub prime: u64,
    pub level: u32,
    /// 0-based generator indices in the block.
    pub indices: Vec<usize>,
    /// Balanced residues (|entry| <= p/2, ties positive) of the submatrix.
    pub entries: Vec<Vec<i64>>,
    /// Determinant in F_p, as a canonical residue in 0..p.
    pub det_mod_p: u64,
    /// A right-kernel basis mod p when the determinant vanishes.
    pub kernel: Vec<Vec<u64>>,
}

impl BlockRecord {
    pub fn is_singular(&self) -> bool {
        self.det_mod_p == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterReport {
    pub n: usize,
    /// Orders d_ij of the q entries; d_ii = 1.
    pub d_matrix: Vec<Vec<u64>>,
    /// Numerators with k_ij = -k_ji, taken canonical (0 <= k < d) above the
    /// diagonal.
    pub k_matrix: Vec<Vec<i64>>,
    /// L_i = lcm of row i of the d matrix.
    pub l_vector: Vec<u64>,
    /// The integer matrix with entries k_ij * L_i / d_ij.
    pub ybar: Vec<Vec<i64>>,
    pub blocks: Vec<BlockRecord>,
    pub verdict: Verdict,
    /// On a polynomial verdict, the center generators as (generator, power).
    pub center_generators: Option<Vec<(usize, u64)>>,
}

impl CenterReport {
    pub fn block(&self, prime: u64, level: u32) -> Option<&BlockRecord> {
        self.blocks
            .iter()
            .find(|b| b.prime == prime && b.level == level)
    }
}

fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn balanced_residue(x: i64, p: u64) -> i64 {
    let p = p as i64;
    let mut r = x.rem_euclid(p);
    // Minimal absolute value; ties (only possible for even p) go positive.
    if 2 * r > p {
        r -= p;
    }
    r
}

/// Builds the full center report from a skew-normalized q-grid.
pub fn build_center_report(q: &[Vec<UnityRoot>]) -> Result<CenterReport, CenterError> {
    let n = q.len();
    if q.iter().any(|row| row.len() != n) {
        return Err(CenterError::BadShape);
    }
    for i in 0..n {
        if !q[i][i].is_one() {
            return Err(CenterError::BadShape);
        }
        for j in 0..n {
            if !q[i][j].mul(&q[j][i]).is_one() {
                return Err(CenterError::NotSkewNormalized { i, j });
            }
        }
    }

    let mut d_matrix = vec![vec![1u64; n]; n];
    let mut k_matrix = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            d_matrix[i][j] = q[i][j].order();
            d_matrix[j][i] = d_matrix[i][j];
            let k = q[i][j].numerator() as i64;
            k_matrix[i][j] = k;
            k_matrix[j][i] = -k;
        }
    }

    let mut l_vector = vec![1u64; n];
    for i in 0..n {
        let mut l: u64 = 1;
        for j in 0..n {
            l = l
                .checked_mul(d_matrix[i][j] / l.gcd(&d_matrix[i][j]))
                .ok_or(CenterError::Overflow)?;
        }
        l_vector[i] = l;
    }

    let mut ybar = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let step = (l_vector[i] / d_matrix[i][j]) as i128;
            let v = k_matrix[i][j] as i128 * step;
            ybar[i][j] = i64::try_from(v).map_err(|_| CenterError::Overflow)?;
        }
    }

    let mut primes: Vec<u64> = Vec::new();
    for &l in &l_vector {
        for (p, _) in prime_factors(l) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();

    let mut blocks = Vec::new();
    for &p in &primes {
        let max_level = l_vector
            .iter()
            .map(|&l| p_adic_valuation(l, p))
            .max()
            .unwrap_or(0);
        for m in 1..=max_level {
            let indices: Vec<usize> = (0..n)
                .filter(|&i| p_adic_valuation(l_vector[i], p) == m)
                .collect();
            if indices.is_empty() {
                continue;
            }
            let entries: Vec<Vec<i64>> = indices
                .iter()
                .map(|&r| {
                    indices
                        .iter()
                        .map(|&c| balanced_residue(ybar[r][c], p))
                        .collect()
                })
                .collect();
            let (det_mod_p, kernel) = det_and_kernel_mod_p(&entries, p);
            blocks.push(BlockRecord {
                prime: p,
                level: m,
                indices,
                entries,
                det_mod_p,
                kernel,
            });
        }
    }

    let verdict = if blocks.iter().all(|b| !b.is_singular()) {
        Verdict::Polynomial
    } else {
        Verdict::NotPolynomial
    };
    let center_generators = match verdict {
        Verdict::Polynomial => Some((0..n).map(|i| (i, l_vector[i])).collect()),
        Verdict::NotPolynomial => None,
    };

    Ok(CenterReport {
        n,
        d_matrix,
        k_matrix,
        l_vector,
        ybar,
        blocks,
        verdict,
        center_generators,
    })
}

/// Determinant mod p and, when singular, a right-kernel basis.
fn det_and_kernel_mod_p(entries: &[Vec<i64>], p: u64) -> (u64, Vec<Vec<u64>>) {
    let n = entries.len();
    let pe = p as i128;
    let mut m: Vec<Vec<i128>> = entries
        .iter()
        .map(|row| row.iter().map(|&x| (x as i128).rem_euclid(pe)).collect())
        .collect();
    let mut det: i128 = 1;
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let pivot = (row..n).find(|&r| m[r][col] % pe != 0);
        match pivot {
            Some(r) => {
                if r != row {
                    m.swap(r, row);
                    det = (pe - det % pe) % pe;
                }
                let inv = mod_inverse(m[row][col], pe);
                det = det * m[row][col] % pe;
                for c in 0..n {
                    m[row][c] = m[row][c] * inv % pe;
                }
                for r2 in 0..n {
                    if r2 != row && m[r2][col] != 0 {
                        let f = m[r2][col];
                        for c in 0..n {
                            m[r2][c] = (m[r2][c] - f * m[row][c]).rem_euclid(pe);
                        }
                    }
                }
                pivot_cols.push(col);
                row += 1;
            }
            None => {
                det = 0;
            }
        }
    }
    if row < n {
        det = 0;
    }
    let mut kernel = Vec::new();
    if det == 0 {
        for free in 0..n {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                let coeff = m[r][free].rem_euclid(pe);
                v[pc] = ((pe - coeff) % pe) as u64;
            }
            kernel.push(v);
        }
    }
    (det.rem_euclid(pe) as u64, kernel)
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    // Fermat; p is prime and a is nonzero mod p.
    let mut result: i128 = 1;
    let mut base = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// n = 3 fast path: polynomial iff the three orders are pairwise coprime.
pub fn fast_path_n3(d: &[Vec<u64>]) -> Result<Verdict, CenterError> {
    if d.len() != 3 || d.iter().any(|r| r.len() != 3) {
        return Err(CenterError::WrongSize {
            expected: 3,
            got: d.len(),
        });
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for (idx, (a, b)) in pairs.iter().enumerate() {
        for (c, e) in pairs.iter().skip(idx + 1) {
            if d[*a][*b].gcd(&d[*c][*e]) != 1 {
                return Ok(Verdict::NotPolynomial);
            }
        }
    }
    Ok(Verdict::Polynomial)
}

/// Which clause settled a prime in the n = 4 fast path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "clause")]
pub enum N4Clause {
    /// No L_i is divisible by p.
    AllUnitsAtP,
    /// A full 4x4 level block with nonzero determinant.
    FullBlock { level: u32 },
    /// Two disjoint pairs at separated levels.
    DisjointPairs { level: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct N4PrimeReport {
    pub prime: u64,
    pub clause: Option<N4Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct N4Report {
    pub verdict: Verdict,
    /// One entry per prime dividing some L_i; primes absent from the list
    /// satisfy the trivial clause.
    pub primes: Vec<N4PrimeReport>,
}

/// n = 4 fast path over the q-grid; must agree with the full criterion.
pub fn fast_path_n4(q: &[Vec<UnityRoot>]) -> Result<N4Report, CenterError> {
    if q.len() != 4 {
        return Err(CenterError::WrongSize {
            expected: 4,
            got: q.len(),
        });
    }
    let report = build_center_report(q)?;
    let d = &report.d_matrix;
    let strict_pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

    let mut primes: Vec<u64> = Vec::new();
    for &l in &report.l_vector {
        for (p, _) in prime_factors(l) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();

    let mut prime_reports = Vec::new();
    let mut all_ok = true;
    for &p in &primes {
        let clause = classify_prime_n4(&report, d, &strict_pairs, p);
        if clause.is_none() {
            all_ok = false;
        }
        prime_reports.push(N4PrimeReport { prime: p, clause });
    }
    Ok(N4Report {
        verdict: if all_ok {
            Verdict::Polynomial
        } else {
            Verdict::NotPolynomial
        },
        primes: prime_reports,
    })
}

fn classify_prime_n4(
    report: &CenterReport,
    d: &[Vec<u64>],
    strict_pairs: &[(usize, usize)],
    p: u64,
) -> Option<N4Clause> {
    if report.l_vector.iter().all(|&l| l % p != 0) {
        return Some(N4Clause::AllUnitsAtP);
    }
    // Full 4x4 block with nonzero determinant at a single level.
    for b in &report.blocks {
        if b.prime == p && b.indices.len() == 4 && !b.is_singular() {
            return Some(N4Clause::FullBlock { level: b.level });
        }
    }
    // Two disjoint pairs: d_ij in p^(m+1), d_kl exactly p^m, all other
    // pairs below p^(m+1).
    for &(i, j) in strict_pairs {
        for &(k, l) in strict_pairs {
            if (i, j) == (k, l) || i == k || i == l || j == k || j == l {
                continue;
            }
            let m = p_adic_valuation(d[k][l], p);
            if p_adic_valuation(d[i][j], p) < m + 1 {
                continue;
            }
            let others_ok = strict_pairs.iter().all(|&(a, b)| {
                ((a, b) == (i, j) || (a, b) == (k, l)) || p_adic_valuation(d[a][b], p) < m + 1
            });
            if others_ok {
                return Some(N4Clause::DisjointPairs { level: m });
            }
        }
    }
    None
}

/// Early exit: an odd-dimensional level block forces a zero determinant.
pub fn odd_dimension_shortcut(report: &CenterReport) -> Option<Verdict> {
    if report.blocks.iter().any(|b| b.indices.len() % 2 == 1) {
        Some(Verdict::NotPolynomial)
    } else {
        None
    }
}

/// The lifted center of a filtered algebra whose graded ring has a
/// polynomial center: generators x_i^{L_i}, each verified central.
#[derive(Debug, Clone)]
pub struct LiftedCenter {
    pub generators: Vec<AlgebraElement>,
    pub exponents: Vec<u64>,
    /// Rank of the algebra over the lifted center.
    pub rank: u128,
}

pub fn lift_center(
    pres: &Arc<Presentation>,
    report: &CenterReport,
) -> Result<LiftedCenter, CenterError> {
    match pres.mode() {
        Mode::Skew | Mode::WeylLike => {}
        Mode::Clifford | Mode::Bounded => return Err(CenterError::WrongMode),
    }
    if !pres.is_valid() {
        return Err(CenterError::InvalidPresentation);
    }
    if report.verdict != Verdict::Polynomial {
        return Err(CenterError::VerdictNotPolynomial);
    }
    let mut generators = Vec::new();
    let mut rank: u128 = 1;
    for (i, &l) in report.l_vector.iter().enumerate() {
        let gen = AlgebraElement::monomial(
            pres.clone(),
            |e| e[i] = l as u32,
            CoefPoly::one(pres.table().clone(), pres.conductor()),
        );
        let central = gen
            .is_central()
            .map_err(|_| CenterError::InvalidPresentation)?;
        if !central {
            return Err(CenterError::CentralityCheckFailed(i + 1, l));
        }
        generators.push(gen);
        rank *= l as u128;
    }
    Ok(LiftedCenter {
        generators,
        exponents: report.l_vector.clone(),
        rank,
    })
}

/// Brute-force cross-check of the kernel criterion at small sizes: lists
/// the central monomials x^s with 0 <= s_i < L_i (only 1 on a polynomial
/// verdict).
pub fn central_monomials_below_l(
    pres: &Arc<Presentation>,
    l_vector: &[u64],
) -> Result<Vec<Vec<u32>>, CenterError> {
    if !pres.is_valid() {
        return Err(CenterError::InvalidPresentation);
    }
    let n = pres.n();
    let mut found = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let el = AlgebraElement::from_exponents(
            pres.clone(),
            &exps,
            CoefPoly::one(pres.table().clone(), pres.conductor()),
        );
        if el
            .is_central()
            .map_err(|_| CenterError::InvalidPresentation)?
        {
            found.push(exps.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(found);
            }
            exps[i] += 1;
            if (exps[i] as u64) < l_vector[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}
