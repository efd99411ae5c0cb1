//! Square-free factorization: Yun's gcd iteration one variable at a time,
//! with single-variable monomial factors split off first.

use super::gcd::{content, gcd};
use super::{CoefPoly, Monomial};

pub fn squarefree_factors(f: &CoefPoly) -> Vec<(CoefPoly, u32)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut factors: Vec<(CoefPoly, u32)> = Vec::new();

    // Monomial part: each variable dividing f comes out as its own factor.
    let mc = f.monomial_content();
    let mut rest = f.clone();
    if !mc.is_unit() {
        let one = crate::arith::CycloNumber::one(f.conductor());
        let div = CoefPoly::monomial(f.table().clone(), &mc.0, one);
        rest = rest.exact_div(&div).expect("monomial content divides");
        for (v, &e) in mc.0.iter().enumerate() {
            if e > 0 {
                push_factor(
                    &mut factors,
                    CoefPoly::var(f.table().clone(), v, f.conductor()),
                    e,
                );
            }
        }
    }

    decompose(&rest, &mut factors);
    factors.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    factors
}

fn push_factor(factors: &mut Vec<(CoefPoly, u32)>, g: CoefPoly, e: u32) {
    let g = g.unit_normalize().expect("nonzero factor");
    if g.is_one() {
        return;
    }
    for (f, m) in factors.iter_mut() {
        if *f == g {
            *m += e;
            return;
        }
    }
    factors.push((g, e));
}

fn decompose(f: &CoefPoly, factors: &mut Vec<(CoefPoly, u32)>) {
    if f.is_constant() {
        return;
    }
    let nvars = f.table().len();
    let var = (0..nvars)
        .filter(|&v| f.degree_in(v) > 0)
        .min_by_key(|&v| f.degree_in(v))
        .expect("nonconstant");

    let cont = content(f, var);
    let pp = f.exact_div(&cont).expect("content divides");
    decompose(&cont, factors);
    yun(&pp, var, factors);
}

/// Yun's algorithm with the derivative taken in `var`; the input must be
/// primitive with respect to `var`.
fn yun(f: &CoefPoly, var: usize, factors: &mut Vec<(CoefPoly, u32)>) {
    if f.is_constant() {
        return;
    }
    let df = f.derivative(var);
    let c = gcd(f, &df);
    if c.is_constant() {
        push_factor(factors, f.clone(), 1);
        return;
    }
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut y = df.exact_div(&c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_constant() {
        let z = y.sub(&w.derivative(var));
        let g = gcd(&w, &z);
        w = w.exact_div(&g).expect("gcd divides");
        y = z.exact_div(&g).expect("gcd divides");
        if !g.is_constant() {
            push_factor(factors, g, i);
        }
        i += 1;
    }
}

/// Re-multiplies a factorization, for cross-checks.
pub fn remultiply(factors: &[(CoefPoly, u32)], like: &CoefPoly) -> CoefPoly {
    let mut out = CoefPoly::one(like.table().clone(), like.conductor());
    for (g, e) in factors {
        out = out.mul(&g.pow(*e as u64));
    }
    out
}

/// True when the polynomial is a scalar multiple of a single variable.
pub fn as_single_variable(f: &CoefPoly) -> Option<usize> {
    if f.num_terms() != 1 {
        return None;
    }
    let (m, _) = f.terms().next()?;
    let mut var = None;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 && var.is_none() {
            var = Some(i);
        } else if e != 0 {
            return None;
        }
    }
    var
}

/// The monomial of a single-term polynomial.
pub fn as_monomial(f: &CoefPoly) -> Option<Monomial> {
    if f.num_terms() == 1 {
        f.terms().next().map(|(m, _)| m.clone())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    #[test]
    fn squarefree_single_square() {
        let t = VarTable::parameters(&["y1"]);
        let y1 = CoefPoly::var(t.clone(), 0, 1);
        let f = y1.pow(2);
        let fs = squarefree_factors(&f);
        assert_eq!(fs, vec![(y1, 2)]);
    }

    #[test]
    fn squarefree_example_discriminant() {
        // (4 y2 y3 (4 y1 y4 - y3^2))^8 -> y2^8, y3^8, (4 y1 y4 - y3^2)^8
        let t = VarTable::parameters(&["y1", "y2", "y3", "y4"]);
        let v = |i: usize| CoefPoly::var(t.clone(), i, 1);
        let four = CoefPoly::from_int(t.clone(), 1, 4);
        let inner = four.mul(&v(0)).mul(&v(3)).sub(&v(2).pow(2));
        let f = four.mul(&v(1)).mul(&v(2)).mul(&inner).pow(8);
        let fs = squarefree_factors(&f);
        let expected_inner = inner.unit_normalize().unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&(v(1), 8)));
        assert!(fs.contains(&(v(2), 8)));
        assert!(fs.contains(&(expected_inner, 8)));

        // The product of the factors recovers f up to a scalar.
        let re = remultiply(&fs, &f);
        assert_eq!(
            re.unit_normalize().unwrap(),
            f.unit_normalize().unwrap()
        );
    }

    #[test]
    fn squarefree_trace_determinant_shape() {
        // 2^48 (4ab - t^2)^8 c^16 d^16 over {t,a,b,c,d}
        let t = VarTable::parameters(&["t", "a", "b", "c", "d"]);
        let v = |i: usize| CoefPoly::var(t.clone(), i, 1);
        let four = CoefPoly::from_int(t.clone(), 1, 4);
        let inner = four.mul(&v(1)).mul(&v(2)).sub(&v(0).pow(2));
        let f = CoefPoly::from_int(t.clone(), 1, 2)
            .pow(48)
            .mul(&inner.pow(8))
            .mul(&v(3).pow(16))
            .mul(&v(4).pow(16));
        let fs = squarefree_factors(&f);
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&(v(3), 16)));
        assert!(fs.contains(&(v(4), 16)));
        assert!(fs.contains(&(inner.unit_normalize().unwrap(), 8)));
    }
}
