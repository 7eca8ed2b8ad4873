use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::gcd::gcd;
use super::poly::Polynomial;
use super::SymalgError;

/// `num / den` in lowest terms with the leading coefficient of `den` positive.
/// Equal values have equal representations, so derived `Eq`/`Hash` are exact.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, SymalgError> {
        if den.is_zero() {
            return Err(SymalgError::DivisionByZero);
        }
        Ok(normalize(num, den))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let n = p.nvars();
        RationalFunction { num: p, den: Polynomial::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFunction::from_polynomial(Polynomial::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        RationalFunction::from_polynomial(Polynomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        RationalFunction::from_polynomial(Polynomial::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RationalFunction::from_polynomial(Polynomial::var(nvars, i))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &RationalFunction) -> RationalFunction {
        self.combine(o, true)
    }

    fn combine(&self, o: &RationalFunction, negate: bool) -> RationalFunction {
        let join = |a: &Polynomial, b: &Polynomial| if negate { a.sub(b) } else { a.add(b) };
        if self.den == o.den {
            return normalize(join(&self.num, &o.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let sd = self.den.exact_div(&g).expect("gcd divides");
        let od = o.den.exact_div(&g).expect("gcd divides");
        let num = join(&self.num.mul(&od), &o.num.mul(&sd));
        // any common factor of num and den already divides g
        let h = gcd(&num, &g);
        let den = self.den.mul(&od);
        if h.is_one() {
            return sign_fixed(num, den);
        }
        sign_fixed(num.exact_div(&h).expect("gcd divides"), den.exact_div(&h).expect("gcd divides"))
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero(self.nvars());
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = o.den.exact_div(&g1).expect("gcd divides");
        let c = o.num.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        sign_fixed(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<RationalFunction, SymalgError> {
        if self.is_zero() {
            return Err(SymalgError::DivisionByZero);
        }
        Ok(sign_fixed(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RationalFunction) -> Result<RationalFunction, SymalgError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> RationalFunction {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Denominator is a single term.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    /// Denominator is a single term with coefficient 1.
    pub fn is_laurent_monic(&self) -> bool {
        self.is_laurent() && self.den.leading_coefficient().is_one()
    }

    /// Replaces variable `i` by variable `map[i]` in a ring of `nvars` variables.
    pub fn rename(&self, map: &[usize], nvars: usize) -> RationalFunction {
        normalize(self.num.rename(map, nvars), self.den.rename(map, nvars))
    }

    /// Value at an integer point, `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[BigInt]) -> Option<(BigInt, BigInt)> {
        let (n, d) = (self.num.eval(point), self.den.eval(point));
        if d == BigInt::from(0) {
            return None;
        }
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / &g, d / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Some((n, d))
    }

    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(usize) -> String) -> impl fmt::Display + 'a {
        Rendered { r: self, names }
    }
}

struct Rendered<'a> {
    r: &'a RationalFunction,
    names: &'a dyn Fn(usize) -> String,
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.den.is_one() {
            return self.r.num.fmt_with(f, self.names);
        }
        write!(f, "(")?;
        self.r.num.fmt_with(f, self.names)?;
        write!(f, ")/(")?;
        self.r.den.fmt_with(f, self.names)?;
        write!(f, ")")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |i: usize| format!("x{}", i + 1);
        Rendered { r: self, names: &names }.fmt(f)
    }
}

fn sign_fixed(num: Polynomial, den: Polynomial) -> RationalFunction {
    if den.leading_coefficient().is_negative() {
        RationalFunction { num: num.neg(), den: den.neg() }
    } else {
        RationalFunction { num, den }
    }
}

fn normalize(num: Polynomial, den: Polynomial) -> RationalFunction {
    let n = num.nvars();
    if num.is_zero() {
        return RationalFunction { num, den: Polynomial::one(n) };
    }
    let g = gcd(&num, &den);
    if g.is_one() {
        return sign_fixed(num, den);
    }
    sign_fixed(num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
}

/// `(∏ in_vars + ∏ out_vars) / z_k`; empty products are 1.
pub fn exchange_step(
    z_k: &RationalFunction,
    in_vars: &[&RationalFunction],
    out_vars: &[&RationalFunction],
) -> Result<RationalFunction, SymalgError> {
    let n = z_k.nvars();
    let prod = |vs: &[&RationalFunction]| vs.iter().fold(RationalFunction::one(n), |acc, v| acc.mul(v));
    prod(in_vars).add(&prod(out_vars)).div(z_k)
}
