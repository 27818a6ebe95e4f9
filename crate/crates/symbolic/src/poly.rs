//! Sparse multivariate polynomials over an exact field.
//!
//! Variables are plain indices; the mapping to names lives in [`crate::Chart`].
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose order is graded
//! lexicographic, so the last entry is always the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{format_scalar, Scalar};

pub type Var = u32;

/// A power product `x_{v1}^{e1} ... x_{vk}^{ek}`, stored as `(var, exp)` pairs
/// sorted by variable with every exponent positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Build from arbitrary pairs; zero exponents are dropped, repeats merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Drop variable `v`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        (e, Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect()))
    }

    pub fn with_exponent(&self, v: Var, e: u32) -> Monomial {
        self.mul(&Monomial::from_pairs([(v, e)]))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with `x_0 > x_1 > ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C: Scalar> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Poly<C> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<C: Scalar> Poly<C> {
    pub fn constant(c: C) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        Self::term(C::one(), Monomial::var(v))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Poly::default();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.first_key_value().map(|(m, c)| m.is_one() && c.is_one()) == Some(true)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_zero() {
            Some(C::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.last_key_value()
    }

    pub fn leading_coeff(&self) -> C {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Variables that occur, ascending.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.pairs().iter().map(|&(v, _)| v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::default();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(n, a)| (n.mul(m), a.clone())).collect() }
    }

    /// Divide by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&(C::one() / lc))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::constant(C::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == 0 {
                continue;
            }
            let m2 = if e > 1 { rest.with_exponent(v, e - 1) } else { rest };
            out.add_term(m2, c.clone() * C::from_i64(e as i64));
        }
        out
    }

    /// Evaluate with `values[v]` substituted for every variable `v`.
    pub fn eval(&self, values: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t = t * num_traits::pow(values[v as usize].clone(), e as usize);
            }
            acc = acc + t;
        }
        acc
    }

    /// Replace each variable `v` by `subs(v)`; `None` keeps the variable.
    pub fn compose(&self, subs: &dyn Fn(Var) -> Option<Poly<C>>) -> Self {
        let mut cache: BTreeMap<(Var, u32), Poly<C>> = BTreeMap::new();
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for &(v, e) in m.pairs() {
                let f = cache
                    .entry((v, e))
                    .or_insert_with(|| match subs(v) {
                        Some(p) => p.pow(e),
                        None => Poly::term(C::one(), Monomial::from_pairs([(v, e)])),
                    })
                    .clone();
                t = &t * &f;
            }
            out = out + t;
        }
        out
    }

    /// Coefficients with respect to `v`: `result[k]` multiplies `v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly<C>> {
        let mut out = vec![Poly::default(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly<C>) -> Option<Poly<C>> {
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        if lm.is_one() {
            return Some(self.scale(&(C::one() / lc)));
        }
        let mut rem = self.clone();
        let mut quot = Poly::default();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c.clone() / lc.clone();
            rem = rem - d.mul_monomial(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Render with variable names supplied by `name`.
    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(Var) -> String) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, name }
    }
}

pub struct PolyDisplay<'a, C: Scalar> {
    poly: &'a Poly<C>,
    name: &'a dyn Fn(Var) -> String,
}

pub(crate) fn format_monomial(m: &Monomial, name: &dyn Fn(Var) -> String) -> String {
    m.pairs()
        .iter()
        .map(|&(v, e)| if e == 1 { name(v) } else { format!("{}^{}", name(v), e) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Sign and magnitude of a single polynomial term in grammar syntax.
pub(crate) fn format_term<C: Scalar>(m: &Monomial, c: &C, name: &dyn Fn(Var) -> String) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let body = if m.is_one() {
        format_scalar(&a)
    } else if a.is_one() {
        format_monomial(m, name)
    } else {
        format!("{}*{}", format_scalar(&a), format_monomial(m, name))
    };
    (neg, body)
}

impl<C: Scalar> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            let (neg, body) = format_term(m, c, self.name);
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl<C: Scalar> Zero for Poly<C> {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Scalar> One for Poly<C> {
    fn one() -> Self {
        Poly::constant(C::one())
    }
}

impl<C: Scalar> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Scalar> Add<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Scalar> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(mut self) -> Poly<C> {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -self.clone()
    }
}

impl<C: Scalar> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(mut self, rhs: Poly<C>) -> Poly<C> {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<C: Scalar> Sub<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Scalar> Mul<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn x(v: Var) -> P {
        P::var(v)
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_pairs([(0, 2)]);
        let b = Monomial::from_pairs([(0, 1), (1, 1)]);
        let c = Monomial::from_pairs([(1, 2)]);
        let d = Monomial::from_pairs([(0, 1)]);
        assert!(a > b && b > c && c > d && d > Monomial::one());
    }

    #[test]
    fn monomial_division() {
        let a = Monomial::from_pairs([(0, 2), (2, 1)]);
        let b = Monomial::from_pairs([(0, 1)]);
        assert_eq!(a.div(&b), Some(Monomial::from_pairs([(0, 1), (2, 1)])));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.div(&Monomial::var(1)), None);
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = &x(0) + &x(1);
        let m = &x(0) - &x(1);
        let prod = &p * &m;
        assert_eq!(prod, &x(0).pow(2) - &x(1).pow(2));
        assert!((&prod - &prod).is_zero());
        assert_eq!(prod.div_exact(&p), Some(m.clone()));
        assert_eq!((&prod + &P::constant(q(1))).div_exact(&p), None);
    }

    #[test]
    fn derivative_and_eval() {
        // x0^3 x1 + 2 x1
        let p = &(&x(0).pow(3) * &x(1)) + &x(1).scale(&q(2));
        assert_eq!(p.derivative(0), (&x(0).pow(2) * &x(1)).scale(&q(3)));
        assert_eq!(p.eval(&[q(2), q(3)]), q(30));
    }

    #[test]
    fn compose_substitutes() {
        let p = &x(0).pow(2) + &x(1);
        let r = p.compose(&|v| if v == 0 { Some(&x(1) + &P::constant(q(1))) } else { None });
        assert_eq!(r, &(&x(1).pow(2) + &x(1).scale(&q(3))) + &P::constant(q(1)));
    }

    #[test]
    fn display_grammar() {
        let name = |v: Var| format!("x{}", v + 1);
        let p = &(&x(0).pow(2).scale(&q(-3)) + &x(1).scale(&BigRational::new(1.into(), 2.into())))
            + &P::constant(q(-1));
        assert_eq!(p.display_with(&name).to_string(), "-3*x1^2 + 1/2*x2 - 1");
        assert_eq!(P::zero().display_with(&name).to_string(), "0");
    }
}
