//! Differential forms with rational-function coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::SymbolicError;
use crate::expr::Expr;
use crate::poly::Var;
use crate::ratfunc::RatFunc;
use crate::scalar::Scalar;

/// Strictly increasing list of coordinate indices, `dx^{i1} ∧ ... ∧ dx^{ik}`.
pub type MultiIndex = Vec<Var>;

/// Sum of terms `c_I dx^I`, stored sparsely with strictly increasing `I` and
/// no zero coefficients. Forms need not be homogeneous.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form<C: Scalar> {
    chart: Chart,
    terms: BTreeMap<MultiIndex, RatFunc<C>>,
}

/// Sign of the permutation that sorts `a ++ b`, or `None` if they share an index.
fn merge_sign(a: &[Var], b: &[Var]) -> Option<(bool, MultiIndex)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] moves past the remaining a's.
            if (a.len() - i) % 2 == 1 {
                odd = !odd;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((odd, out))
}

impl<C: Scalar> Form<C> {
    pub fn zero(chart: &Chart) -> Self {
        Form { chart: chart.clone(), terms: BTreeMap::new() }
    }

    /// The 0-form given by a scalar expression.
    pub fn scalar(e: &Expr<C>) -> Self {
        let mut f = Self::zero(e.chart());
        f.push(Vec::new(), e.value().clone());
        f
    }

    /// `dx` for the named coordinate.
    pub fn dx(chart: &Chart, name: &str) -> Result<Self, SymbolicError> {
        let v = chart.index_of(name)?;
        if !chart.is_coord(v) {
            return Ok(Self::zero(chart));
        }
        Ok(Self::basis(chart, vec![v]))
    }

    /// `dx^{I}` for an arbitrary list of coordinate indices (sorted with sign).
    pub fn basis(chart: &Chart, indices: Vec<Var>) -> Self {
        let mut f = Self::zero(chart);
        let mut sorted: Vec<Var> = Vec::new();
        let mut odd = false;
        for v in indices {
            match merge_sign(&sorted, &[v]) {
                None => return f,
                Some((s, m)) => {
                    odd ^= s;
                    sorted = m;
                }
            }
        }
        let c = if odd { -RatFunc::one() } else { RatFunc::one() };
        f.push(sorted, c);
        f
    }

    /// Build from `(indices, coefficient)` pairs; indices may be unsorted.
    pub fn from_terms(chart: &Chart, terms: impl IntoIterator<Item = (Vec<Var>, RatFunc<C>)>) -> Self {
        let mut f = Self::zero(chart);
        for (idx, c) in terms {
            let b = Self::basis(chart, idx);
            for (i, s) in b.terms {
                f.push(i, &s * &c);
            }
        }
        f
    }

    fn push(&mut self, idx: MultiIndex, c: RatFunc<C>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RatFunc<C>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `dx^I` (with `I` given strictly increasing).
    pub fn coefficient(&self, idx: &[Var]) -> Expr<C> {
        Expr::new(&self.chart, self.terms.get(idx).cloned().unwrap_or_else(RatFunc::zero))
    }

    /// Coefficient of `d(names[0]) ∧ d(names[1]) ∧ ...` including the sign
    /// from reordering.
    pub fn coefficient_of(&self, names: &[&str]) -> Result<Expr<C>, SymbolicError> {
        let idx: Vec<Var> = names.iter().map(|n| self.chart.index_of(n)).collect::<Result<_, _>>()?;
        let b = Self::basis(&self.chart, idx);
        match b.terms.into_iter().next() {
            None => Ok(Expr::zero(&self.chart)),
            Some((i, s)) => Ok(Expr::new(&self.chart, &s * &self.coefficient(&i).into_value())),
        }
    }

    /// The scalar value if this is a 0-form.
    pub fn as_scalar(&self) -> Option<Expr<C>> {
        if self.terms.keys().all(|k| k.is_empty()) {
            Some(self.coefficient(&[]))
        } else {
            None
        }
    }

    /// Degree if homogeneous; the zero form reports `Some(0)`.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        Form {
            chart: self.chart.clone(),
            terms: self.terms.iter().filter(|(i, _)| i.len() == k).map(|(i, c)| (i.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc<C>) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        Form { chart: self.chart.clone(), terms: self.terms.iter().map(|(i, a)| (i.clone(), a * c)).collect() }
    }

    pub fn scale_const(&self, c: &C) -> Self {
        self.scale(&RatFunc::constant(c.clone()))
    }

    /// Multiply by a scalar expression on the same chart.
    pub fn mul_expr(&self, e: &Expr<C>) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(e.chart())?;
        Ok(self.scale(e.value()))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(&rhs.chart)?;
        let mut out = self.clone();
        for (i, c) in &rhs.terms {
            out.push(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(&rhs.chart)?;
        let mut out = Self::zero(&self.chart);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &rhs.terms {
                if let Some((odd, idx)) = merge_sign(ia, ib) {
                    let c = ca * cb;
                    out.push(idx, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative. Parameters are constants.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(&self.chart);
        let coords = self.chart.dim() as Var;
        for (idx, c) in &self.terms {
            for v in c.variables() {
                if v >= coords || idx.contains(&v) {
                    continue;
                }
                let dc = c.derivative(v);
                if let Some((odd, m)) = merge_sign(&[v], idx) {
                    out.push(m, if odd { -dc } else { dc });
                }
            }
        }
        out
    }

    /// Replace every coordinate differential `dx^j` by `images[j]` while
    /// leaving coefficients untouched. Images live on this form's chart.
    pub fn map_differentials(&self, images: &[Form<C>]) -> Result<Self, SymbolicError> {
        if images.len() != self.chart.dim() {
            return Err(SymbolicError::DimensionMismatch { expected: self.chart.dim(), got: images.len() });
        }
        for im in images {
            self.chart.ensure_same(&im.chart)?;
        }
        let mut out = Self::zero(&self.chart);
        for (idx, c) in &self.terms {
            let mut acc = Form::scalar(&Expr::new(&self.chart, c.clone()));
            for &v in idx {
                acc = acc.wedge(&images[v as usize])?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }

    /// Pull back along a substitution (coordinates and parameters of this
    /// form's chart expressed on the substitution's source chart).
    pub fn pullback(&self, sub: &Substitution<C>) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(&sub.target)?;
        let mut out = Self::zero(&sub.source);
        for (idx, c) in &self.terms {
            let coeff = c.compose(&|v| Some(sub.images[v as usize].value().clone()))?;
            let mut acc = Form::scalar(&Expr::new(&sub.source, coeff));
            for &v in idx {
                acc = acc.wedge(&sub.differentials[v as usize])?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }

    /// Interior product `v ⌟ self`.
    pub fn interior(&self, v: &VectorField<C>) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(&v.chart)?;
        let mut out = Self::zero(&self.chart);
        for (idx, c) in &self.terms {
            for (pos, &j) in idx.iter().enumerate() {
                let comp = &v.components[j as usize];
                if comp.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let t = c * comp;
                out.push(rest, if pos % 2 == 1 { -t } else { t });
            }
        }
        Ok(out)
    }

    /// Names of the differentials in a multi-index.
    pub fn index_names(&self, idx: &[Var]) -> Vec<&str> {
        idx.iter().map(|&v| self.chart.var_name(v)).collect()
    }
}

impl<C: Scalar> fmt::Display for Form<C> {
    /// Prints in the expression grammar; each basis element is
    /// parenthesised so that `/\` never captures a neighbouring sum.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = self.chart.namer();
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut first = true;
        for idx in keys {
            let c = &self.terms[idx];
            let basis = match idx.len() {
                0 => String::new(),
                1 => format!("d({})", name(idx[0])),
                _ => format!(
                    "({})",
                    idx.iter().map(|&v| format!("d({})", name(v))).collect::<Vec<_>>().join(" /\\ ")
                ),
            };
            let (neg, body) = if idx.is_empty() {
                (false, c.display_with(&name).to_string())
            } else if c.is_polynomial() && c.numer().len() == 1 {
                let (m, k) = c.numer().leading_term().expect("nonzero");
                let (neg, mag) = crate::poly::format_term(m, k, &name);
                if mag == "1" {
                    (neg, basis)
                } else {
                    (neg, format!("{mag}*{basis}"))
                }
            } else if c.is_polynomial() {
                (false, format!("({})*{basis}", c.display_with(&name)))
            } else {
                (false, format!("{}*{basis}", c.display_with(&name)))
            };
            let body = if idx.is_empty() && !first && c.numer().len() > 1 { format!("({body})") } else { body };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl<C: Scalar> Add<&Form<C>> for &Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: &Form<C>) -> Form<C> {
        self.try_add(rhs).expect("chart mismatch")
    }
}

impl<C: Scalar> Sub<&Form<C>> for &Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: &Form<C>) -> Form<C> {
        self.try_add(&-rhs).expect("chart mismatch")
    }
}

impl<C: Scalar> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form { chart: self.chart.clone(), terms: self.terms.iter().map(|(i, c)| (i.clone(), -c)).collect() }
    }
}

impl<C: Scalar> Add for Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: Form<C>) -> Form<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: Form<C>) -> Form<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        -&self
    }
}

/// A vector field: one component per chart coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField<C: Scalar> {
    chart: Chart,
    components: Vec<RatFunc<C>>,
}

impl<C: Scalar> VectorField<C> {
    pub fn new(chart: &Chart, components: Vec<Expr<C>>) -> Result<Self, SymbolicError> {
        if components.len() != chart.dim() {
            return Err(SymbolicError::DimensionMismatch { expected: chart.dim(), got: components.len() });
        }
        let mut cs = Vec::with_capacity(components.len());
        for e in components {
            chart.ensure_same(e.chart())?;
            cs.push(e.into_value());
        }
        Ok(VectorField { chart: chart.clone(), components: cs })
    }

    /// The coordinate field `∂/∂name`.
    pub fn coordinate(chart: &Chart, name: &str) -> Result<Self, SymbolicError> {
        let v = chart.index_of(name)? as usize;
        if v >= chart.dim() {
            return Err(SymbolicError::UnknownVariable(name.to_string()));
        }
        let mut cs = vec![RatFunc::zero(); chart.dim()];
        cs[v] = RatFunc::one();
        Ok(VectorField { chart: chart.clone(), components: cs })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn component(&self, i: usize) -> Expr<C> {
        Expr::new(&self.chart, self.components[i].clone())
    }

    pub fn scale(&self, e: &Expr<C>) -> Result<Self, SymbolicError> {
        self.chart.ensure_same(e.chart())?;
        Ok(VectorField { chart: self.chart.clone(), components: self.components.iter().map(|c| c * e.value()).collect() })
    }
}

/// A map from a source chart into a target chart, given by an expression on
/// the source for every target variable.
#[derive(Clone, Debug)]
pub struct Substitution<C: Scalar> {
    source: Chart,
    target: Chart,
    images: Vec<Expr<C>>,
    differentials: Vec<Form<C>>,
}

impl<C: Scalar> Substitution<C> {
    /// Every target coordinate must have an entry. Target parameters without
    /// an entry map to same-named source variables.
    pub fn new(source: &Chart, target: &Chart, map: &HashMap<String, Expr<C>>) -> Result<Self, SymbolicError> {
        let mut images = Vec::with_capacity(target.num_vars());
        for v in 0..target.num_vars() as Var {
            let name = target.var_name(v);
            let e = match map.get(name) {
                Some(e) => {
                    source.ensure_same(e.chart())?;
                    e.clone()
                }
                None if !target.is_coord(v) && source.index_of(name).is_ok() => Expr::var(source, name)?,
                None => return Err(SymbolicError::MissingSubstitution(name.to_string())),
            };
            images.push(e);
        }
        let differentials = images[..target.dim()].iter().map(|e| Form::scalar(e).d()).collect();
        Ok(Substitution { source: source.clone(), target: target.clone(), images, differentials })
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn image(&self, name: &str) -> Result<&Expr<C>, SymbolicError> {
        Ok(&self.images[self.target.index_of(name)? as usize])
    }

    /// Pull back a scalar expression on the target chart.
    pub fn pullback_expr(&self, e: &Expr<C>) -> Result<Expr<C>, SymbolicError> {
        self.target.ensure_same(e.chart())?;
        let v = e.value().compose(&|v| Some(self.images[v as usize].value().clone()))?;
        Ok(Expr::new(&self.source, v))
    }
}

/// Pull back a sequence of forms along one substitution.
pub fn pullback<C: Scalar>(forms: &[Form<C>], sub: &Substitution<C>) -> Result<Vec<Form<C>>, SymbolicError> {
    forms.iter().map(|f| f.pullback(sub)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type F = Form<BigRational>;
    type E = Expr<BigRational>;

    fn chart() -> Chart {
        Chart::new("c", &["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn wedge_alternates() {
        let c = chart();
        let d1 = F::dx(&c, "x1").unwrap();
        let d2 = F::dx(&c, "x2").unwrap();
        assert!(d1.wedge(&d1).unwrap().is_zero());
        assert_eq!(d1.wedge(&d2).unwrap(), -d2.wedge(&d1).unwrap());
    }

    #[test]
    fn wedge_bilinear_example() {
        // (x1 dx2) ∧ (x2 dx1) = -x1 x2 dx1∧dx2
        let c = chart();
        let x1 = E::var(&c, "x1").unwrap();
        let x2 = E::var(&c, "x2").unwrap();
        let a = F::dx(&c, "x2").unwrap().mul_expr(&x1).unwrap();
        let b = F::dx(&c, "x1").unwrap().mul_expr(&x2).unwrap();
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.coefficient_of(&["x1", "x2"]).unwrap(), -(&x1 * &x2));
        assert_eq!(w.num_terms(), 1);
    }

    #[test]
    fn d_squared_vanishes() {
        let c = chart();
        let x1 = E::var(&c, "x1").unwrap();
        let x2 = E::var(&c, "x2").unwrap();
        let f = F::scalar(&(&(&x1 * &x2) * &x2));
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn interior_contraction_example() {
        // (x1 ∂/∂x2) ⌟ (dx1∧dx2) = -x1 dx1
        let c = chart();
        let x1 = E::var(&c, "x1").unwrap();
        let v = VectorField::coordinate(&c, "x2").unwrap().scale(&x1).unwrap();
        let w = F::dx(&c, "x1").unwrap().wedge(&F::dx(&c, "x2").unwrap()).unwrap();
        let r = w.interior(&v).unwrap();
        assert_eq!(r, -F::dx(&c, "x1").unwrap().mul_expr(&x1).unwrap());
        assert!(F::scalar(&x1).interior(&v).unwrap().is_zero());
    }

    #[test]
    fn basis_sorts_with_sign() {
        let c = chart();
        let f = F::basis(&c, vec![2, 0, 1]);
        // dx3∧dx1∧dx2 = dx1∧dx2∧dx3 (cyclic, even)
        assert_eq!(f.coefficient(&[0, 1, 2]), E::one(&c));
        assert_eq!(F::basis(&c, vec![1, 0]).coefficient(&[0, 1]), E::int(&c, -1));
    }

    #[test]
    fn parameters_are_constant() {
        let c = Chart::with_params("c", &["x"], &["a"]).unwrap();
        let a = E::var(&c, "a").unwrap();
        let x = E::var(&c, "x").unwrap();
        let f = F::scalar(&(&a * &x));
        assert_eq!(f.d(), F::dx(&c, "x").unwrap().mul_expr(&a).unwrap());
        assert!(F::dx(&c, "a").unwrap().is_zero());
    }

    #[test]
    fn pullback_of_identity() {
        let c = chart();
        let mut map = HashMap::new();
        for n in ["x1", "x2", "x3"] {
            map.insert(n.to_string(), E::var(&c, n).unwrap());
        }
        let s = Substitution::new(&c, &c, &map).unwrap();
        let d1 = F::dx(&c, "x1").unwrap();
        assert_eq!(d1.pullback(&s).unwrap(), d1);
        map.remove("x3");
        assert!(matches!(Substitution::new(&c, &c, &map), Err(SymbolicError::MissingSubstitution(_))));
    }

    #[test]
    fn display_shapes() {
        let c = chart();
        let x1 = E::var(&c, "x1").unwrap();
        let d1 = F::dx(&c, "x1").unwrap();
        let d2 = F::dx(&c, "x2").unwrap();
        let w = &d1.wedge(&d2).unwrap().mul_expr(&-(&x1)).unwrap() + &d1.mul_expr(&(&x1 + &E::one(&c))).unwrap();
        assert_eq!(w.to_string(), "(x1 + 1)*d(x1) - x1*(d(x1) /\\ d(x2))");
    }
}
