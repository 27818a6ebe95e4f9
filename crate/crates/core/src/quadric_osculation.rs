//! Osculating quadrics `u = a0 + Σ a_i x^i + ½ Σ a_ij x^i x^j`, families of
//! them, the null-vector condition and the symmetric (n+1)-differential.

use std::collections::HashMap;
use std::fmt;

use legpath_symbolic::{Chart, DifferentialForm, Expression, Matrix, RationalFunction, Q};
use num_traits::Zero;

use crate::error::{invariant, CoreError, Result};

/// Coefficients `(a0, a, A)` with `A` symmetric. Entries live on a chart:
/// constants for a single quadric, functions of the parameters for a family.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricCoefficients {
    chart: Chart,
    a0: Expression,
    a: Vec<Expression>,
    aa: Vec<Vec<Expression>>,
}

/// A family is the same record with non-constant entries on a parameter chart.
pub type QuadricFamily = QuadricCoefficients;

impl QuadricCoefficients {
    pub fn new(chart: &Chart, a0: Expression, a: Vec<Expression>, aa: Vec<Vec<Expression>>) -> Result<Self> {
        let n = a.len();
        if aa.len() != n || aa.iter().any(|r| r.len() != n) {
            return Err(invariant("A", format!("expected a {n}x{n} matrix")));
        }
        let all = std::iter::once(&a0).chain(a.iter()).chain(aa.iter().flatten());
        if all.into_iter().any(|e| e.chart() != chart) {
            return Err(invariant("a0/a/A", "entries must live on the parameter chart"));
        }
        for i in 0..n {
            for j in i + 1..n {
                if aa[i][j] != aa[j][i] {
                    return Err(invariant(
                        format!("A[{}][{}] vs A[{}][{}]", i + 1, j + 1, j + 1, i + 1),
                        "A must be symmetric",
                    ));
                }
            }
        }
        Ok(QuadricCoefficients { chart: chart.clone(), a0, a, aa })
    }

    /// A single quadric with rational entries, on a chart with no variables.
    pub fn from_rationals(a0: Q, a: Vec<Q>, aa: Vec<Vec<Q>>) -> Result<Self> {
        let chart = Chart::new("point", &[] as &[&str])?;
        let c = |v: Q| Expression::constant(&chart, v);
        let aa = aa.into_iter().map(|r| r.into_iter().map(c).collect()).collect();
        Self::new(&chart, c(a0), a.into_iter().map(c).collect(), aa)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn a0(&self) -> &Expression {
        &self.a0
    }

    pub fn a(&self, i: usize) -> &Expression {
        &self.a[i]
    }

    pub fn aa(&self, i: usize, j: usize) -> &Expression {
        &self.aa[i][j]
    }

    /// True if every entry is a constant.
    pub fn is_constant(&self) -> bool {
        self.entries().iter().all(|e| e.as_constant().is_some())
    }

    fn entries(&self) -> Vec<&Expression> {
        std::iter::once(&self.a0).chain(self.a.iter()).chain(self.aa.iter().flatten()).collect()
    }

    /// `(a0, a, A)` as rationals, if constant.
    pub fn as_rationals(&self) -> Option<(Q, Vec<Q>, Vec<Vec<Q>>)> {
        let a0 = self.a0.as_constant()?;
        let a = self.a.iter().map(Expression::as_constant).collect::<Option<_>>()?;
        let aa = self.aa.iter().map(|r| r.iter().map(Expression::as_constant).collect::<Option<_>>()).collect::<Option<_>>()?;
        Some((a0, a, aa))
    }

    /// `u` and `p_i` of the quadric at the point `v` (expressions on the
    /// quadric's chart).
    pub fn evaluate(&self, v: &[Expression]) -> (Expression, Vec<Expression>) {
        let n = self.n();
        let half = Expression::constant(&self.chart, legpath_symbolic::q(1, 2));
        let mut u = self.a0.clone();
        let mut p = Vec::with_capacity(n);
        for i in 0..n {
            u = &u + &(&self.a[i] * &v[i]);
            let mut pi = self.a[i].clone();
            for j in 0..n {
                let t = &self.aa[i][j] * &v[j];
                pi = &pi + &t;
                u = &u + &(&half * &(&t * &v[i]));
            }
            p.push(pi);
        }
        (u, p)
    }
}

fn x_names(chart: &Chart) -> &[String] {
    chart.coords()
}

/// Hessian-matching quadric of `f` at `x0` (rational point). Entries are
/// constants on `f`'s chart.
pub fn osculating_quadric(f: &Expression, x0: &[Q]) -> Result<QuadricCoefficients> {
    let chart = f.chart();
    let names = x_names(chart);
    let n = names.len();
    if x0.len() != n {
        return Err(CoreError::Precondition(format!("expected a point with {n} coordinates")));
    }
    if !f.chart().params().is_empty() {
        return Err(CoreError::Precondition("osculating_quadric needs a parameter-free function".into()));
    }
    let family = osculating_family(f)?;
    let at = |e: &Expression| -> Result<Expression> { Ok(Expression::constant(chart, e.eval(x0)?)) };
    let a0 = at(&family.a0)?;
    let a = family.a.iter().map(at).collect::<Result<_>>()?;
    let aa = family.aa.iter().map(|r| r.iter().map(at).collect::<Result<_>>()).collect::<Result<_>>()?;
    QuadricCoefficients::new(chart, a0, a, aa)
}

/// The osculating quadric at a moving point, parametrised by the `x`-chart.
pub fn osculating_family(f: &Expression) -> Result<QuadricFamily> {
    if !f.is_polynomial() {
        return Err(CoreError::Precondition("f must be a polynomial".into()));
    }
    let chart = f.chart();
    let names = x_names(chart);
    let n = names.len();
    let xs: Vec<Expression> = names.iter().map(|s| Expression::var(chart, s)).collect::<std::result::Result<_, _>>()?;
    let grad: Vec<Expression> = names.iter().map(|s| f.partial(s)).collect::<std::result::Result<_, _>>()?;
    let mut aa = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for s in names {
            aa[i].push(grad[i].partial(s)?);
        }
    }
    let mut a = Vec::with_capacity(n);
    for i in 0..n {
        let mut ai = grad[i].clone();
        for j in 0..n {
            ai = &ai - &(&aa[i][j] * &xs[j]);
        }
        a.push(ai);
    }
    let half = Expression::constant(chart, legpath_symbolic::q(1, 2));
    let mut a0 = f.clone();
    for i in 0..n {
        a0 = &a0 - &(&a[i] * &xs[i]);
        for j in 0..n {
            a0 = &a0 - &(&half * &(&aa[i][j] * &(&xs[i] * &xs[j])));
        }
    }
    QuadricCoefficients::new(chart, a0, a, aa)
}

/// Rows of `(2da0, daᵗ; da, dA)·(1, X)ᵗ`.
#[derive(Clone, Debug, PartialEq)]
pub struct NullCheck {
    pub rows: Vec<DifferentialForm>,
}

impl NullCheck {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(DifferentialForm::is_zero)
    }

    /// First nonzero row and its index.
    pub fn first_failure(&self) -> Option<(usize, &DifferentialForm)> {
        self.rows.iter().enumerate().find(|(_, r)| !r.is_zero())
    }
}

fn d0(e: &Expression) -> DifferentialForm {
    DifferentialForm::scalar(e).d()
}

pub fn null_vector_check(family: &QuadricFamily, x: &[Expression]) -> Result<NullCheck> {
    let n = family.n();
    if x.len() != n {
        return Err(CoreError::Precondition(format!("expected {n} entries in X")));
    }
    if x.iter().any(|e| e.chart() != &family.chart) {
        return Err(CoreError::Precondition("X must live on the family's chart".into()));
    }
    let mut rows = Vec::with_capacity(n + 1);
    let mut r0 = d0(&family.a0).scale_const(&legpath_symbolic::q(2, 1));
    for j in 0..n {
        r0 = &r0 + &d0(&family.a[j]).mul_expr(&x[j])?;
    }
    rows.push(r0);
    for i in 0..n {
        let mut r = d0(&family.a[i]);
        for j in 0..n {
            r = &r + &d0(&family.aa[i][j]).mul_expr(&x[j])?;
        }
        rows.push(r);
    }
    Ok(NullCheck { rows })
}

/// A polynomial in the parameter differentials, held on a chart that adds a
/// commuting symbol `d<name>` for every parameter coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricDifferential {
    pub chart: Chart,
    pub value: Expression,
}

impl SymmetricDifferential {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for SymmetricDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn symmetric_differential(family: &QuadricFamily) -> Result<SymmetricDifferential> {
    let chart = &family.chart;
    let coords = chart.coords();
    let mut ext_coords: Vec<String> = coords.to_vec();
    ext_coords.extend(coords.iter().map(|s| format!("d{s}")));
    let ext = Chart::with_params(&format!("{}_sym", chart.name()), &ext_coords, chart.params())?;
    let differential = |e: &Expression| -> Result<RationalFunction> {
        let lifted = e.transfer(&ext)?;
        let mut acc = Expression::zero(&ext);
        for s in coords {
            let ds = Expression::var(&ext, &format!("d{s}"))?;
            acc = &acc + &(&lifted.partial(s)? * &ds);
        }
        Ok(acc.into_value())
    };
    let n = family.n();
    let mut m = Matrix::zeros(n + 1, n + 1);
    m[(0, 0)] = differential(&family.a0)?.scale(&legpath_symbolic::q(2, 1));
    for i in 0..n {
        let da = differential(&family.a[i])?;
        m[(0, i + 1)] = da.clone();
        m[(i + 1, 0)] = da;
        for j in 0..n {
            m[(i + 1, j + 1)] = differential(&family.aa[i][j])?;
        }
    }
    Ok(SymmetricDifferential { value: Expression::new(&ext, m.det()), chart: ext })
}

/// The hypersurface traced by the quadrics of a family at the points `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct Developable {
    pub u: Expression,
    pub p: Vec<Expression>,
}

pub fn developable_from_family(family: &QuadricFamily, v: &[Expression]) -> Result<Developable> {
    let check = null_vector_check(family, v)?;
    if let Some((row, residue)) = check.first_failure() {
        return Err(CoreError::Precondition(format!("V is not a null vector: row {row} gives {residue}")));
    }
    let chart = &family.chart;
    let coords = chart.coords();
    if coords.len() != v.len() {
        return Err(CoreError::Precondition(format!(
            "V needs as many entries ({}) as the family has parameters ({})",
            v.len(),
            coords.len()
        )));
    }
    let jac = Matrix::from_fn(v.len(), coords.len(), |i, j| v[i].partial(&coords[j]).expect("coordinate").into_value());
    if jac.det().is_zero() {
        return Err(CoreError::Precondition("the Jacobian of V is degenerate".into()));
    }
    let (u, p) = family.evaluate(v);
    Ok(Developable { u, p })
}

/// The identity map `x ↦ x` on a chart, as a point vector.
pub fn identity_point(chart: &Chart) -> Result<Vec<Expression>> {
    Ok(chart.coords().iter().map(|s| Expression::var(chart, s)).collect::<std::result::Result<_, _>>()?)
}

/// Re-key a family onto the parameter names `t1..tn` (the file format's
/// convention when a family is given explicitly).
pub fn rename_parameters(family: &QuadricFamily, names: &[String]) -> Result<QuadricFamily> {
    let old = family.chart.coords();
    if names.len() != old.len() {
        return Err(CoreError::Precondition("parameter count mismatch".into()));
    }
    let target = Chart::with_params(family.chart.name(), names, family.chart.params())?;
    let map: HashMap<String, Expression> = old
        .iter()
        .zip(names)
        .map(|(o, n)| Ok((o.clone(), Expression::var(&target, n)?)))
        .collect::<Result<_>>()?;
    let s = |e: &Expression| -> Result<Expression> { Ok(e.substitute(&target, &map)?) };
    QuadricCoefficients::new(
        &target,
        s(&family.a0)?,
        family.a.iter().map(s).collect::<Result<_>>()?,
        family.aa.iter().map(|r| r.iter().map(s).collect::<Result<_>>()).collect::<Result<_>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use legpath_symbolic::{parse_expr, q};

    fn xchart(n: usize) -> Chart {
        crate::contact_jets::base_chart(n, &[] as &[&str]).unwrap()
    }

    fn e(c: &Chart, s: &str) -> Expression {
        parse_expr(c, s).unwrap()
    }

    #[test]
    fn self_osculation() {
        let c = xchart(2);
        let f = e(&c, "(x1^2 + x2^2)/2");
        let quad = osculating_quadric(&f, &[q(3, 1), q(-1, 2)]).unwrap();
        assert!(quad.a0().is_zero() && quad.a(0).is_zero() && quad.a(1).is_zero());
        assert!(quad.aa(0, 0).is_one() && quad.aa(1, 1).is_one() && quad.aa(0, 1).is_zero());
    }

    #[test]
    fn hand_taylor_expansion() {
        // f = x1^2 x2 at (1,1): f = 1, ∇f = (2, 1), Hess = [[2,2],[2,0]].
        // a = ∇f - A x0 = (2 - 4, 1 - 2) = (-2, -1);
        // a0 = 1 - (-2 - 1) - ½(2 + 2 + 2 + 0) = 1.
        let c = xchart(2);
        let f = e(&c, "x1^2*x2");
        let quad = osculating_quadric(&f, &[q(1, 1), q(1, 1)]).unwrap();
        let (a0, a, aa) = quad.as_rationals().unwrap();
        assert_eq!(a0, q(1, 1));
        assert_eq!(a, vec![q(-2, 1), q(-1, 1)]);
        assert_eq!(aa, vec![vec![q(2, 1), q(2, 1)], vec![q(2, 1), q(0, 1)]]);
        // p_i = a_i + Σ a_ij x^j at x0 equals ∇f(x0).
        let x0 = vec![Expression::int(&c, 1), Expression::int(&c, 1)];
        let (u, p) = quad.evaluate(&x0);
        assert!(u.is_one());
        assert_eq!(p[0], Expression::int(&c, 2));
        assert!(p[1].is_one());
    }

    #[test]
    fn family_entries() {
        let c = xchart(2);
        let fam = osculating_family(&e(&c, "x1^2*x2")).unwrap();
        assert_eq!(fam.aa(0, 0), &e(&c, "2*x2"));
        assert_eq!(fam.aa(0, 1), &e(&c, "2*x1"));
        assert!(fam.aa(1, 1).is_zero());
        assert!(!fam.is_constant());
        assert!(osculating_family(&e(&c, "(x1^2 + x2^2)/2")).unwrap().is_constant());
    }

    #[test]
    fn null_checks() {
        let c = xchart(2);
        let fam = osculating_family(&e(&c, "x1^2*x2 + x2^3")).unwrap();
        assert!(null_vector_check(&fam, &identity_point(&c).unwrap()).unwrap().passed());

        let t = Chart::new("t", &["t1", "t2"]).unwrap();
        let zero = Expression::zero(&t);
        let one = Expression::one(&t);
        let fam = QuadricCoefficients::new(
            &t,
            e(&t, "t1"),
            vec![zero.clone(), zero.clone()],
            vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one]],
        )
        .unwrap();
        let check = null_vector_check(&fam, &[e(&t, "t1*t2"), e(&t, "t2^2")]).unwrap();
        let (row, residue) = check.first_failure().unwrap();
        assert_eq!(row, 0);
        assert_eq!(residue, &DifferentialForm::dx(&t, "t1").unwrap().scale_const(&q(2, 1)));
        assert!(check.rows[1].is_zero() && check.rows[2].is_zero());
    }

    #[test]
    fn symmetric_differential_examples() {
        let t = Chart::new("t", &["t"]).unwrap();
        let tt = e(&t, "t");
        let zero = Expression::zero(&t);
        let fam = QuadricCoefficients::new(
            &t,
            tt.clone(),
            vec![zero.clone(), zero.clone()],
            vec![vec![tt.clone(), zero.clone()], vec![zero.clone(), tt.clone()]],
        )
        .unwrap();
        let sd = symmetric_differential(&fam).unwrap();
        assert_eq!(sd.value, e(&sd.chart, "2*dt^3"));

        let one = Expression::one(&t);
        let fam = QuadricCoefficients::new(
            &t,
            tt,
            vec![zero.clone(), zero.clone()],
            vec![vec![one.clone(), zero.clone()], vec![zero, one]],
        )
        .unwrap();
        assert!(symmetric_differential(&fam).unwrap().is_zero());

        let c = xchart(2);
        assert!(symmetric_differential(&osculating_family(&e(&c, "x1^2*x2")).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn developable_round_trip() {
        let c = xchart(2);
        let f = e(&c, "x1^2*x2 - 3*x1*x2^3 + 5");
        let fam = osculating_family(&f).unwrap();
        let dev = developable_from_family(&fam, &identity_point(&c).unwrap()).unwrap();
        assert_eq!(dev.u, f);
        assert_eq!(dev.p[0], f.partial("x1").unwrap());
        assert_eq!(dev.p[1], f.partial("x2").unwrap());

        let flat = osculating_family(&e(&c, "(x1^2 + x2^2)/2")).unwrap();
        let dev = developable_from_family(&flat, &identity_point(&c).unwrap()).unwrap();
        assert_eq!(dev.u, e(&c, "(x1^2 + x2^2)/2"));
        let singular = [e(&c, "x1 + x2"), e(&c, "2*x1 + 2*x2")];
        assert!(matches!(developable_from_family(&flat, &singular), Err(CoreError::Precondition(_))));
    }

    #[test]
    fn rejects_nonsymmetric() {
        let r = QuadricCoefficients::from_rationals(
            q(0, 1),
            vec![q(0, 1); 2],
            vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(1, 1)]],
        );
        match r {
            Err(CoreError::Invariant { path, .. }) => assert_eq!(path, "A[1][2] vs A[2][1]"),
            other => panic!("{other:?}"),
        }
    }
}
