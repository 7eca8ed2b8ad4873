use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exponent vector of fixed arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; nvars] }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { degree: exps.iter().sum(), exps }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial { degree: self.degree + o.degree, exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect() }
    }

    fn divides(&self, o: &Monomial) -> bool {
        self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial { degree: o.degree - self.degree, exps: o.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect() }
    }

    pub(crate) fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&o.exps).map(|(a, b)| *a.min(b)).collect())
    }
}

/// Graded lexicographic order; `Greater` means earlier in a polynomial.
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree.cmp(&o.degree).then_with(|| self.exps.cmp(&o.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial over the integers with terms sorted by decreasing grlex order
/// and no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, BigInt)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Polynomial::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range");
        Polynomial { nvars, terms: vec![(Monomial::var(nvars, i), BigInt::one())] }
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let nvars = m.exps.len();
        let c = c.into();
        if c.is_zero() {
            return Polynomial::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(m, c)] }
    }

    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, BigInt)>) -> Self {
        let mut t: Vec<(Monomial, BigInt)> = terms
            .into_iter()
            .map(|(e, c)| {
                assert_eq!(e.len(), nvars, "exponent vector arity");
                (Monomial::new(e), c)
            })
            .collect();
        t.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, BigInt)> = Vec::with_capacity(t.len());
        for (m, c) in t {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(BigInt::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0.degree)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exps[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exps[v] > 0)
    }

    /// Gcd of the integer coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some((m, _)) => it.fold(m.clone(), |g, (m, _)| g.gcd(m)),
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.combine(o, true)
    }

    fn combine(&self, o: &Polynomial, negate: bool) -> Polynomial {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &o.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &self.terms[i].1 - &o.terms[j].1 } else { &self.terms[i].1 + &o.terms[j].1 };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { nvars: self.nvars, terms: out }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, o.nvars);
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut raw: Vec<(Monomial, BigInt)> = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                raw.push((ma.mul(mb), ca * cb));
            }
        }
        raw.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, BigInt)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars: self.nvars, terms: out }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        // multiplying by a monomial preserves the grlex order
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides every coefficient by `c`; `None` unless all are divisible.
    pub fn div_scalar(&self, c: &BigInt) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, a) in &self.terms {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.push((m.clone(), q));
        }
        Some(Polynomial { nvars: self.nvars, terms })
    }

    /// Divides every term by the monomial `m`, which must divide all of them.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (a, c) in &self.terms {
            if !m.divides(a) {
                return None;
            }
            terms.push((m.quotient_of(a), c.clone()));
        }
        Some(Polynomial { nvars: self.nvars, terms })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Polynomial::zero(self.nvars));
        }
        if d.terms.len() == 1 {
            let (m, c) = &d.terms[0];
            return self.div_monomial(m)?.div_scalar(c);
        }
        let (dm, dc) = &d.terms[0];
        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((rm, rc)) = rem.pop_last() {
            if !dm.divides(&rm) {
                return None;
            }
            let (qc, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let qm = dm.quotient_of(&rm);
            for (m, c) in &d.terms[1..] {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.entry(key) {
                    Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        // quotient terms were produced in decreasing order
        Some(Polynomial { nvars: self.nvars, terms: quot })
    }

    /// Coefficients in variable `v`, index = power of `v`.
    pub(crate) fn to_univariate(&self, v: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exps[v] as usize;
            let mut exps = m.exps.clone();
            exps[v] = 0;
            buckets[e].push((Monomial::new(exps), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_by(|a, b| b.0.cmp(&a.0));
                Polynomial { nvars: self.nvars, terms: t }
            })
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn from_univariate(nvars: usize, v: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut acc = Polynomial::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0; nvars];
            exps[v] = e as u32;
            acc = acc.add(&c.mul_term(&Monomial::new(exps), &BigInt::one()));
        }
        acc
    }

    /// Replaces variable `i` by variable `map[i]` in a ring of `nvars` variables.
    pub fn rename(&self, map: &[usize], nvars: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; nvars];
                for (i, &e) in m.exps.iter().enumerate() {
                    exps[map[i]] += e;
                }
                (exps, c.clone())
            })
            .collect();
        Polynomial::from_terms(nvars, terms)
    }

    /// Substitutes the integer `x` for variable `v`.
    pub fn substitute(&self, v: usize, x: &BigInt) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                let e = std::mem::take(&mut exps[v]);
                (exps, c * num_traits::pow(x.clone(), e as usize))
            })
            .collect();
        Polynomial::from_terms(self.nvars, terms)
    }

    /// Value at an integer point.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    pub(crate) fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(abs.to_string());
            }
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(names(i)),
                    _ => parts.push(format!("{}^{e}", names(i))),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|i| format!("x{}", i + 1))
    }
}
