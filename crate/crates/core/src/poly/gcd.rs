//! Multivariate gcd over the cyclotomic coefficient field via primitive
//! pseudo-remainder sequences, one main variable at a time.

use super::CoefPoly;

/// Unit-normalized gcd; zero only when both inputs are zero.
pub fn gcd(a: &CoefPoly, b: &CoefPoly) -> CoefPoly {
    a.same_table(b).expect("variable context mismatch");
    if a.is_zero() {
        return normalize_or_zero(b);
    }
    if b.is_zero() {
        return normalize_or_zero(a);
    }
    if a.is_constant() || b.is_constant() {
        return CoefPoly::one(a.table().clone(), a.conductor());
    }
    // Main variable: positive degree somewhere, smallest combined degree.
    let nvars = a.table().len();
    let var = (0..nvars)
        .filter(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("nonconstant polynomial has a variable");

    if a.degree_in(var) == 0 {
        return gcd(&content(b, var), a);
    }
    if b.degree_in(var) == 0 {
        return gcd(&content(a, var), b);
    }

    let ca = content(a, var);
    let cb = content(b, var);
    let cont = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");

    let (mut g, mut h) = if pa.degree_in(var) >= pb.degree_in(var) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let pp = loop {
        let r = pseudo_rem(&g, &h, var);
        if r.is_zero() {
            break primitive_part(&h, var);
        }
        if r.degree_in(var) == 0 {
            break CoefPoly::one(g.table().clone(), g.conductor());
        }
        g = h;
        h = primitive_part(&r, var);
    };
    cont.mul(&pp).unit_normalize().expect("nonzero gcd")
}

/// gcd of several polynomials.
pub fn gcd_many<'a, I: IntoIterator<Item = &'a CoefPoly>>(polys: I) -> Option<CoefPoly> {
    let mut it = polys.into_iter();
    let first = it.next()?;
    let mut acc = normalize_or_zero(first);
    for p in it {
        if acc.is_one() {
            break;
        }
        acc = gcd(&acc, p);
    }
    Some(acc)
}

/// Content with respect to one variable: gcd of the univariate coefficients.
pub fn content(f: &CoefPoly, var: usize) -> CoefPoly {
    let coeffs = f.as_univariate(var);
    gcd_many(coeffs.values()).unwrap_or_else(|| CoefPoly::zero(f.table().clone(), f.conductor()))
}

pub fn primitive_part(f: &CoefPoly, var: usize) -> CoefPoly {
    let c = content(f, var);
    if c.is_one() {
        f.clone()
    } else {
        f.exact_div(&c).expect("content divides")
    }
}

/// Pseudo-remainder of f by g in `var`: lc(g)^(df-dg+1) * f reduced by g.
fn pseudo_rem(f: &CoefPoly, g: &CoefPoly, var: usize) -> CoefPoly {
    let dg = g.degree_in(var);
    debug_assert!(dg > 0);
    let guni = g.as_univariate(var);
    let glead = guni.get(&dg).expect("leading coefficient");
    let mut r = f.clone();
    loop {
        let dr = r.degree_in(var);
        if r.is_zero() || dr < dg {
            return r;
        }
        let runi = r.as_univariate(var);
        let rlead = runi.get(&dr).expect("leading coefficient");
        // lc(g)*r - lc(r)*x^(dr-dg)*g kills the leading term.
        let shift = CoefPoly::var_pow(r.table().clone(), var, dr - dg, r.conductor());
        r = r.mul(glead).sub(&g.mul(rlead).mul(&shift));
        debug_assert!(r.is_zero() || r.degree_in(var) < dr);
    }
}

fn normalize_or_zero(p: &CoefPoly) -> CoefPoly {
    p.unit_normalize()
        .unwrap_or_else(|_| CoefPoly::zero(p.table().clone(), p.conductor()))
}
