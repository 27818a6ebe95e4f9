//! Scalar expressions on a chart.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::SymbolicError;
use crate::poly::Var;
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;

/// A rational function in the variables of a chart.
///
/// The arithmetic operators panic if the two operands live on different
/// charts; the `try_*` methods return [`SymbolicError::ChartMismatch`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expr<C: Scalar> {
    chart: Chart,
    value: RatFunc<C>,
}

impl<C: Scalar> Expr<C> {
    pub fn new(chart: &Chart, value: RatFunc<C>) -> Self {
        Expr { chart: chart.clone(), value }
    }

    pub fn zero(chart: &Chart) -> Self {
        Self::new(chart, RatFunc::zero())
    }

    pub fn one(chart: &Chart) -> Self {
        Self::new(chart, RatFunc::one())
    }

    pub fn constant(chart: &Chart, c: C) -> Self {
        Self::new(chart, RatFunc::constant(c))
    }

    pub fn int(chart: &Chart, n: i64) -> Self {
        Self::constant(chart, C::from_i64(n))
    }

    pub fn var(chart: &Chart, name: &str) -> Result<Self, SymbolicError> {
        Ok(Self::new(chart, RatFunc::var(chart.index_of(name)?)))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn value(&self) -> &RatFunc<C> {
        &self.value
    }

    pub fn into_value(self) -> RatFunc<C> {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn as_constant(&self) -> Option<C> {
        self.value.as_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.value.is_polynomial()
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(&self.chart, self.value.scale(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(&self.chart, self.value.pow(e))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(&rhs.chart)?;
        Ok(Self::new(&self.chart, &self.value + &rhs.value))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(&rhs.chart)?;
        Ok(Self::new(&self.chart, &self.value * &rhs.value))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(&rhs.chart)?;
        Ok(Self::new(&self.chart, self.value.checked_div(&rhs.value)?))
    }

    /// Partial derivative with respect to the named variable.
    pub fn partial(&self, name: &str) -> Result<Self, SymbolicError> {
        let v = self.chart.index_of(name)?;
        Ok(self.partial_index(v))
    }

    pub fn partial_index(&self, v: Var) -> Self {
        Self::new(&self.chart, self.value.derivative(v))
    }

    /// Evaluate at a point given as one value per chart variable.
    pub fn eval(&self, point: &[C]) -> Result<C, SymbolicError> {
        if point.len() != self.chart.num_vars() {
            return Err(SymbolicError::DimensionMismatch { expected: self.chart.num_vars(), got: point.len() });
        }
        self.value.eval(point)
    }

    /// Substitute expressions (on a common source chart) for variables by
    /// name. Variables without an entry must also exist on the source chart,
    /// where they are carried over by name.
    pub fn substitute(&self, source: &Chart, subs: &HashMap<String, Expr<C>>) -> Result<Self, SymbolicError> {
        let mut images: Vec<Option<RatFunc<C>>> = Vec::with_capacity(self.chart.num_vars());
        for v in 0..self.chart.num_vars() as Var {
            let name = self.chart.var_name(v);
            let image = match subs.get(name) {
                Some(e) => {
                    source.ensure_same(&e.chart)?;
                    e.value.clone()
                }
                None => match source.index_of(name) {
                    Ok(w) => RatFunc::var(w),
                    Err(_) => {
                        if self.value.variables().contains(&v) {
                            return Err(SymbolicError::MissingSubstitution(name.to_string()));
                        }
                        RatFunc::zero()
                    }
                },
            };
            images.push(Some(image));
        }
        let value = self.value.compose(&|v| images[v as usize].clone())?;
        Ok(Self::new(source, value))
    }

    /// Re-express on another chart by matching variable names.
    pub fn transfer(&self, target: &Chart) -> Result<Self, SymbolicError> {
        self.substitute(target, &HashMap::new())
    }

    pub fn variables(&self) -> Vec<&str> {
        self.value.variables().into_iter().map(|v| self.chart.var_name(v)).collect()
    }
}

impl<C: Scalar> fmt::Display for Expr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.chart.namer();
        write!(f, "{}", self.value.display_with(&name))
    }
}

impl<C: Scalar> Add<&Expr<C>> for &Expr<C> {
    type Output = Expr<C>;
    fn add(self, rhs: &Expr<C>) -> Expr<C> {
        self.try_add(rhs).expect("chart mismatch")
    }
}

impl<C: Scalar> Sub<&Expr<C>> for &Expr<C> {
    type Output = Expr<C>;
    fn sub(self, rhs: &Expr<C>) -> Expr<C> {
        self.chart.ensure_same(&rhs.chart).expect("chart mismatch");
        Expr::new(&self.chart, &self.value - &rhs.value)
    }
}

impl<C: Scalar> Mul<&Expr<C>> for &Expr<C> {
    type Output = Expr<C>;
    fn mul(self, rhs: &Expr<C>) -> Expr<C> {
        self.try_mul(rhs).expect("chart mismatch")
    }
}

impl<C: Scalar> Neg for &Expr<C> {
    type Output = Expr<C>;
    fn neg(self) -> Expr<C> {
        Expr::new(&self.chart, -&self.value)
    }
}

impl<C: Scalar> Add for Expr<C> {
    type Output = Expr<C>;
    fn add(self, rhs: Expr<C>) -> Expr<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for Expr<C> {
    type Output = Expr<C>;
    fn sub(self, rhs: Expr<C>) -> Expr<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Mul for Expr<C> {
    type Output = Expr<C>;
    fn mul(self, rhs: Expr<C>) -> Expr<C> {
        &self * &rhs
    }
}

impl<C: Scalar> Neg for Expr<C> {
    type Output = Expr<C>;
    fn neg(self) -> Expr<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type E = Expr<BigRational>;

    #[test]
    fn partials_and_eval() {
        let c = Chart::new("c", &["x", "y"]).unwrap();
        let x = E::var(&c, "x").unwrap();
        let y = E::var(&c, "y").unwrap();
        let f = &(&x * &x) * &y;
        assert_eq!(f.partial("x").unwrap(), &(&x * &y).scale(&BigRational::from_integer(2.into())) + &E::zero(&c));
        let v = f.eval(&[BigRational::from_integer(3.into()), BigRational::from_integer(2.into())]).unwrap();
        assert_eq!(v, BigRational::from_integer(18.into()));
        assert_eq!(f.to_string(), "x^2*y");
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let a = Chart::new("a", &["x"]).unwrap();
        let b = Chart::new("b", &["x"]).unwrap();
        let ea = E::var(&a, "x").unwrap();
        let eb = E::var(&b, "x").unwrap();
        assert!(matches!(ea.try_add(&eb), Err(SymbolicError::ChartMismatch { .. })));
        assert_eq!(eb.transfer(&a).unwrap(), ea);
    }

    #[test]
    fn substitution_across_charts() {
        let target = Chart::new("t", &["u", "v"]).unwrap();
        let source = Chart::new("s", &["s"]).unwrap();
        let s = E::var(&source, "s").unwrap();
        let f = &E::var(&target, "u").unwrap() * &E::var(&target, "v").unwrap();
        let mut subs = HashMap::new();
        subs.insert("u".to_string(), s.clone());
        subs.insert("v".to_string(), &s + &E::one(&source));
        assert_eq!(f.substitute(&source, &subs).unwrap(), &(&s * &s) + &s);
        subs.remove("v");
        assert_eq!(f.substitute(&source, &subs), Err(SymbolicError::MissingSubstitution("v".into())));
    }
}
