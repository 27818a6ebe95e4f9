//! Rational functions in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::SymbolicError;
use crate::gcd::gcd;
use crate::poly::{Poly, Var};
use crate::scalar::{Field, Scalar};

/// `num / den` with `gcd(num, den) = 1` and `den` monic in graded-lex order.
/// Zero is `0 / 1`. Two values are equal iff their fields are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc<C: Scalar> {
    num: Poly<C>,
    den: Poly<C>,
}

impl<C: Scalar> RatFunc<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<C>, den: Poly<C>) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if den.is_constant() {
            let d = den.leading_coeff();
            return RatFunc { num: num.scale(&(C::one() / d)), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = C::one() / lc;
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(Poly::var(v))
    }

    pub fn numer(&self) -> &Poly<C> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        if rhs.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<Self, SymbolicError> {
        RatFunc::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        // gcd(num, den) = 1 is preserved by powers.
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn derivative(&self, v: Var) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(self.num.derivative(v));
        }
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        Self::reduce(n, &self.den * &self.den)
    }

    /// Evaluate at a point (`values[v]` for variable `v`).
    pub fn eval(&self, values: &[C]) -> Result<C, SymbolicError> {
        let d = self.den.eval(values);
        if d.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(self.num.eval(values) / d)
    }

    /// Substitute `subs(v)` for each variable `v` (`None` keeps it).
    pub fn compose(&self, subs: &dyn Fn(Var) -> Option<RatFunc<C>>) -> Result<Self, SymbolicError> {
        let mut vars = self.num.variables();
        vars.extend(self.den.variables());
        vars.sort_unstable();
        vars.dedup();
        let images: Vec<(Var, Option<RatFunc<C>>)> = vars.iter().map(|&v| (v, subs(v))).collect();
        let lookup = |v: Var| images.iter().find(|(w, _)| *w == v).and_then(|(_, r)| r.clone());
        if images.iter().all(|(_, r)| r.as_ref().is_none_or(|r| r.is_polynomial())) {
            let ps = |v: Var| lookup(v).map(|r| r.num);
            return RatFunc::new(self.num.compose(&ps), self.den.compose(&ps));
        }
        let n = eval_poly_rational(&self.num, &lookup);
        let d = eval_poly_rational(&self.den, &lookup);
        n.checked_div(&d)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(Var) -> String) -> RatFuncDisplay<'a, C> {
        RatFuncDisplay { f: self, name }
    }
}

fn eval_poly_rational<C: Scalar>(p: &Poly<C>, lookup: &dyn Fn(Var) -> Option<RatFunc<C>>) -> RatFunc<C> {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut t = RatFunc::constant(c.clone());
        for &(v, e) in m.pairs() {
            let base = lookup(v).unwrap_or_else(|| RatFunc::var(v));
            t = &t * &base.pow(e);
        }
        acc = &acc + &t;
    }
    acc
}

pub struct RatFuncDisplay<'a, C: Scalar> {
    f: &'a RatFunc<C>,
    name: &'a dyn Fn(Var) -> String,
}

impl<C: Scalar> fmt::Display for RatFuncDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_polynomial() {
            write!(f, "{}", self.f.num.display_with(self.name))
        } else {
            write!(f, "({})/({})", self.f.num.display_with(self.name), self.f.den.display_with(self.name))
        }
    }
}

impl<C: Scalar> Zero for RatFunc<C> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Scalar> One for RatFunc<C> {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl<C: Scalar> Add<&RatFunc<C>> for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn add(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::reduce(n, &self.den * &rhs.den)
    }
}

impl<C: Scalar> Sub<&RatFunc<C>> for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn sub(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        self + &(-rhs)
    }
}

impl<C: Scalar> Mul<&RatFunc<C>> for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn mul(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<C: Scalar> Neg for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<C: Scalar> Neg for RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<C: Scalar> Add for RatFunc<C> {
    type Output = RatFunc<C>;
    fn add(self, rhs: RatFunc<C>) -> RatFunc<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for RatFunc<C> {
    type Output = RatFunc<C>;
    fn sub(self, rhs: RatFunc<C>) -> RatFunc<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Mul for RatFunc<C> {
    type Output = RatFunc<C>;
    fn mul(self, rhs: RatFunc<C>) -> RatFunc<C> {
        &self * &rhs
    }
}

impl<C: Scalar> Add<&RatFunc<C>> for RatFunc<C> {
    type Output = RatFunc<C>;
    fn add(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        &self + rhs
    }
}

impl<C: Scalar> Sub<&RatFunc<C>> for RatFunc<C> {
    type Output = RatFunc<C>;
    fn sub(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        &self - rhs
    }
}

impl<C: Scalar> Mul<&RatFunc<C>> for RatFunc<C> {
    type Output = RatFunc<C>;
    fn mul(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        &self * rhs
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] for a `Result`.
impl<C: Scalar> Div for RatFunc<C> {
    type Output = RatFunc<C>;
    fn div(self, rhs: RatFunc<C>) -> RatFunc<C> {
        self.checked_div(&rhs).expect("division by the zero rational function")
    }
}

impl<C: Scalar> Field for RatFunc<C> {
    fn inverse(&self) -> Option<Self> {
        self.recip().ok()
    }

    fn pivot_cost(&self) -> usize {
        let size = |p: &Poly<C>| if p.is_constant() { 0 } else { p.len() * (1 + p.total_degree() as usize) };
        size(self.numer()) + size(self.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type R = RatFunc<BigRational>;

    fn x(v: Var) -> R {
        R::var(v)
    }

    fn c(n: i64) -> R {
        R::constant(BigRational::from_integer(n.into()))
    }

    #[test]
    fn self_quotient_is_one() {
        assert_eq!(x(0).checked_div(&x(0)).unwrap(), R::one());
    }

    #[test]
    fn canonical_denominator_is_monic() {
        // (2x) / (4x + 6) = x / (2x + 3) = (1/2 x) / (x + 3/2)
        let r = x(0).scale(&BigRational::from_integer(2.into()))
            .checked_div(&(&x(0).scale(&BigRational::from_integer(4.into())) + &c(6)))
            .unwrap();
        assert!(r.denom().leading_coeff() == BigRational::from_integer(1.into()));
        let s = x(0).checked_div(&(&x(0).scale(&BigRational::from_integer(2.into())) + &c(3))).unwrap();
        assert_eq!(r, s);
    }

    #[test]
    fn sums_cancel() {
        // 1/(x-1) - 1/(x+1) = 2/(x^2-1)
        let a = c(1).checked_div(&(&x(0) - &c(1))).unwrap();
        let b = c(1).checked_div(&(&x(0) + &c(1))).unwrap();
        let lhs = &a - &b;
        let rhs = c(2).checked_div(&(&x(0).pow(2) - &c(1))).unwrap();
        assert_eq!(lhs, rhs);
        assert!((&(&lhs - &rhs)).is_zero());
    }

    #[test]
    fn divide_by_zero_is_error() {
        assert_eq!(x(0).checked_div(&(&x(1) - &x(1))), Err(SymbolicError::DivisionByZero));
    }

    #[test]
    fn quotient_rule() {
        // d/dx (1/x) = -1/x^2
        let r = c(1).checked_div(&x(0)).unwrap();
        assert_eq!(r.derivative(0), c(-1).checked_div(&x(0).pow(2)).unwrap());
    }

    #[test]
    fn compose_with_rational_images() {
        // x0 * x1 with x0 -> 1/x1
        let p = &x(0) * &x(1);
        let r = p
            .compose(&|v| if v == 0 { Some(c(1).checked_div(&x(1)).unwrap()) } else { None })
            .unwrap();
        assert_eq!(r, R::one());
    }
}
