//! Multivariate gcd over the integers by recursive primitive remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Polynomial};

/// Gcd with positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let g = gcd_raw(a, b);
    if g.leading_coefficient().is_negative() {
        g.neg()
    } else {
        g
    }
}

fn gcd_raw(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a == b {
        return a.clone();
    }
    if a.is_monomial() || b.is_monomial() || a.is_constant() || b.is_constant() {
        let m = a.monomial_content().gcd(&b.monomial_content());
        return Polynomial::monomial(m, a.content().gcd(&b.content()));
    }
    // pull out common monomial and integer factors first
    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    let m = ma.gcd(&mb);
    let a = a.div_monomial(&ma).expect("monomial content divides");
    let b = b.div_monomial(&mb).expect("monomial content divides");
    let c = a.content().gcd(&b.content());
    let outer = Polynomial::monomial(m, c);
    let core = multivariate(&primitive(&a), &primitive(&b));
    outer.mul(&core)
}

fn primitive(p: &Polynomial) -> Polynomial {
    let c = p.content();
    if c.is_one() || c.is_zero() {
        p.clone()
    } else {
        p.div_scalar(&c).expect("content divides")
    }
}

/// Both inputs primitive over the integers and free of monomial factors.
fn multivariate(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a.exact_div(b).is_some() {
        return b.clone();
    }
    if b.exact_div(a).is_some() {
        return a.clone();
    }
    if let Some(g) = heuristic(a, b, 0) {
        return g;
    }
    let v = (0..n).find(|&v| a.uses_var(v) || b.uses_var(v)).expect("non-constant");
    match (a.uses_var(v), b.uses_var(v)) {
        (true, false) => return gcd_raw(&content_in(a, v), b),
        (false, true) => return gcd_raw(a, &content_in(b, v)),
        _ => {}
    }
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let c = gcd_raw(&ca, &cb);
    let (mut p, mut q) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
    loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if !r.uses_var(v) {
            // the remainder is a unit in the variable v
            return c;
        }
        p = q;
        q = primitive_in(&r, v);
    }
    c.mul(&primitive_in(&q, v))
}

/// Evaluation/interpolation gcd: substitute a large
/// integer for one variable, recurse, lift the result back ξ-adically and
/// accept it only if it divides both inputs.
fn heuristic(a: &Polynomial, b: &Polynomial, depth: usize) -> Option<Polynomial> {
    let n = a.nvars();
    let c = a.content().gcd(&b.content());
    let (a, b) = (primitive(a), primitive(b));
    if a.is_constant() || b.is_constant() {
        return Some(Polynomial::constant(n, c));
    }
    if depth > n {
        return None;
    }
    let v = (0..n).rev().find(|&v| a.uses_var(v) || b.uses_var(v))?;
    let norm = |p: &Polynomial| p.terms().iter().map(|(_, c)| c.abs()).max().unwrap_or_default();
    let bound = norm(&a).min(norm(&b));
    let mut xi: BigInt = bound * 2u32 + 29u32;
    for _ in 0..6 {
        let (ea, eb) = (a.substitute(v, &xi), b.substitute(v, &xi));
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(gamma) = heuristic(&ea, &eb, depth + 1) {
                let g = primitive(&lift(&gamma, v, &xi));
                if !g.is_zero() && a.exact_div(&g).is_some() && b.exact_div(&g).is_some() {
                    return Some(g.scale(&c));
                }
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

/// Rebuilds a polynomial in `v` from its value at `v = xi` using symmetric residues.
fn lift(gamma: &Polynomial, v: usize, xi: &BigInt) -> Polynomial {
    let n = gamma.nvars();
    let half = xi / 2u32;
    let mut rest = gamma.clone();
    let mut out: Vec<(Vec<u32>, BigInt)> = Vec::new();
    let mut power = 0u32;
    while !rest.is_zero() {
        let mut digit: Vec<(Vec<u32>, BigInt)> = Vec::new();
        for (m, c) in rest.terms() {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                digit.push((m.exps().to_vec(), r));
            }
        }
        let d = Polynomial::from_terms(n, digit.clone());
        for (mut e, c) in digit {
            e[v] = power;
            out.push((e, c));
        }
        rest = rest.sub(&d).div_scalar(xi).expect("residues removed");
        power += 1;
    }
    Polynomial::from_terms(n, out)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let coeffs = p.to_univariate(v);
    let mut g = Polynomial::zero(p.nvars());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    let q = p.exact_div(&c).expect("content divides");
    if q.leading_coefficient().is_negative() {
        q.neg()
    } else {
        q
    }
}

/// Pseudo-remainder of `p` by `q` in variable `v`.
fn prem(p: &Polynomial, q: &Polynomial, v: usize) -> Polynomial {
    let n = p.nvars();
    let dq = q.degree_in(v);
    let qc = q.to_univariate(v);
    let lq = qc[dq as usize].clone();
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lr = r.to_univariate(v)[dr as usize].clone();
        let mut exps = vec![0; n];
        exps[v] = dr - dq;
        let shift = Monomial::new(exps);
        r = r.mul(&lq).sub(&q.mul(&lr).mul_term(&shift, &BigInt::one()));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    fn c(v: i64) -> Polynomial {
        Polynomial::constant(3, v)
    }

    #[test]
    fn common_linear_factor() {
        let f = x(0).add(&x(1));
        let a = f.mul(&x(2).add(&c(1)));
        let b = f.mul(&x(0).sub(&c(2)));
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn coprime_inputs() {
        let a = x(0).pow(2).sub(&c(1));
        let b = x(1).add(&c(1));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn integer_and_monomial_parts() {
        let a = x(0).mul(&x(1)).scale(&BigInt::from(6));
        let b = x(0).pow(2).scale(&BigInt::from(4)).add(&x(0).mul(&x(2)).scale(&BigInt::from(2)));
        assert_eq!(gcd(&a, &b).to_string(), "2*x1");
    }

    #[test]
    fn sign_is_normalised() {
        let a = x(0).neg().sub(&c(1));
        assert_eq!(gcd(&a, &a.mul(&x(1).add(&c(3)))).to_string(), "x1 + 1");
    }

    #[test]
    fn gcd_of_powers() {
        let f = x(0).add(&x(1)).add(&x(2));
        let g = x(0).sub(&x(2)).add(&c(1));
        let a = f.pow(3).mul(&g);
        let b = f.pow(2).mul(&g.pow(2)).mul(&x(1).add(&c(2)));
        assert_eq!(gcd(&a, &b), f.pow(2).mul(&g));
    }
}
