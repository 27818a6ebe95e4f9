//! Symplectic `R^{2n+2}` with `ϖ = Σ dx^A ∧ dy^A`, the contact form `v ⌟ ϖ`
//! on lines, Lagrangian planes and the hyperquadric dictionary.

use legpath_symbolic::{q, Chart, DifferentialForm, Expression, Matrix, Vector, Q};
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::quadric_osculation::QuadricCoefficients;

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSpace {
    n: usize,
    chart: Chart,
    varpi: DifferentialForm,
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::Precondition("n must be positive".into()));
        }
        let mut names: Vec<String> = (0..=n).map(|a| format!("x{a}")).collect();
        names.extend((0..=n).map(|a| format!("y{a}")));
        let chart = Chart::new(&format!("R{}", 2 * n + 2), &names)?;
        let mut varpi = DifferentialForm::zero(&chart);
        for a in 0..=n {
            let dx = DifferentialForm::dx(&chart, &format!("x{a}"))?;
            let dy = DifferentialForm::dx(&chart, &format!("y{a}"))?;
            varpi = &varpi + &dx.wedge(&dy)?;
        }
        Ok(SymplecticSpace { n, chart, varpi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2n + 2`.
    pub fn dim(&self) -> usize {
        2 * self.n + 2
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn varpi(&self) -> &DifferentialForm {
        &self.varpi
    }

    /// `ϖ^{n+1}`, nonzero.
    pub fn volume(&self) -> DifferentialForm {
        let mut acc = self.varpi.clone();
        for _ in 0..self.n {
            acc = acc.wedge(&self.varpi).expect("same chart");
        }
        acc
    }

    /// `ϖ(v, w) = Σ_A (v_{x^A} w_{y^A} - v_{y^A} w_{x^A})`; vectors are
    /// ordered `(x^0..x^n, y^0..y^n)`.
    pub fn pairing(&self, v: &[Q], w: &[Q]) -> Q {
        let m = self.n + 1;
        (0..m).fold(Q::zero(), |acc, a| acc + &v[a] * &w[m + a] - &v[m + a] * &w[a])
    }
}

/// `v ⌟ ϖ` for a constant vector `v`.
pub fn contact_form_at_line(v: &[Q], space: &SymplecticSpace) -> Result<DifferentialForm> {
    if v.len() != space.dim() {
        return Err(CoreError::Precondition(format!("expected a vector of length {}", space.dim())));
    }
    if v.iter().all(Zero::is_zero) {
        return Err(CoreError::Precondition("v must be nonzero".into()));
    }
    let comps = v.iter().map(|c| Expression::constant(&space.chart, c.clone())).collect();
    let field = Vector::new(&space.chart, comps)?;
    Ok(space.varpi.interior(&field)?)
}

/// A subspace of `R^{2n+2}` given by independent rational spanning vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSubspace {
    n: usize,
    basis: Vec<Vec<Q>>,
}

impl LinearSubspace {
    pub fn new(space: &SymplecticSpace, basis: Vec<Vec<Q>>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != space.dim()) {
            return Err(CoreError::Precondition(format!("basis vectors must have length {}", space.dim())));
        }
        if !basis.is_empty() && Matrix::from_rows(basis.clone()).rank() < basis.len() {
            return Err(CoreError::Precondition("basis vectors are linearly dependent".into()));
        }
        Ok(LinearSubspace { n: space.n, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `n` of the ambient `R^{2n+2}`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        if self.basis.is_empty() {
            return v.iter().all(Zero::is_zero);
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.basis.len()
    }

    /// Equality of subspaces by mutual containment.
    pub fn same_as(&self, other: &LinearSubspace) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|v| self.contains(v))
    }
}

pub fn is_lagrangian(plane: &LinearSubspace, space: &SymplecticSpace) -> Result<bool> {
    if plane.dim() != space.n + 1 || plane.n != space.n {
        return Err(CoreError::Precondition(format!("a Lagrangian plane has dimension {}", space.n + 1)));
    }
    let b = &plane.basis;
    Ok((0..b.len()).all(|i| (i + 1..b.len()).all(|j| space.pairing(&b[i], &b[j]).is_zero())))
}

/// The plane `Y^0 = 2 a0 X^0 + Σ a_i X^i`, `Y^i = a_i X^0 + Σ M_ij X^j`,
/// spanned by the images of the `X`-axes. `m` need not be symmetric.
pub fn graph_plane(space: &SymplecticSpace, a0: &Q, a: &[Q], m: &Matrix<Q>) -> Result<LinearSubspace> {
    let n = space.n;
    if a.len() != n || m.rows() != n || m.cols() != n {
        return Err(CoreError::Precondition(format!("coefficients must have size {n}")));
    }
    let size = space.dim();
    let mut basis = Vec::with_capacity(n + 1);
    for col in 0..=n {
        let mut v = vec![Q::zero(); size];
        v[col] = q(1, 1);
        if col == 0 {
            v[n + 1] = a0 * q(2, 1);
            for i in 0..n {
                v[n + 2 + i] = a[i].clone();
            }
        } else {
            v[n + 1] = a[col - 1].clone();
            for i in 0..n {
                v[n + 2 + i] = m[(i, col - 1)].clone();
            }
        }
        basis.push(v);
    }
    LinearSubspace::new(space, basis)
}

pub fn quadric_to_lagrangian(quadric: &QuadricCoefficients, space: &SymplecticSpace) -> Result<LinearSubspace> {
    let (a0, a, aa) = quadric
        .as_rationals()
        .ok_or_else(|| CoreError::Precondition("quadric coefficients must be rational constants".into()))?;
    graph_plane(space, &a0, &a, &Matrix::from_rows(aa))
}

/// Residual 1-form of an identity check; zero when it holds.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartIdentity {
    pub lhs: DifferentialForm,
    pub rhs: DifferentialForm,
}

impl ChartIdentity {
    pub fn residual(&self) -> DifferentialForm {
        &self.lhs - &self.rhs
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The contact chart `x1..xn, u, p1..pn` of `RP^{2n+1}`.
pub fn contact_chart(n: usize) -> Result<Chart> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.push("u".into());
    names.extend((1..=n).map(|i| format!("p{i}")));
    Ok(Chart::new(&format!("contact{n}"), &names)?)
}

/// The embedding `X^0 = 1, X^i = x^i, Y^0 = 2u - Σ x^i p_i, Y^i = p_i`.
pub fn chart_embedding(n: usize) -> Result<(Chart, Vec<Expression>, Vec<Expression>)> {
    let chart = contact_chart(n)?;
    let var = |s: String| Expression::var(&chart, &s);
    let mut xs = vec![Expression::one(&chart)];
    let mut ys = Vec::new();
    let mut y0 = var("u".into())?.scale(&q(2, 1));
    for i in 1..=n {
        xs.push(var(format!("x{i}"))?);
        y0 = &y0 - &(&var(format!("x{i}"))? * &var(format!("p{i}"))?);
    }
    ys.push(y0);
    for i in 1..=n {
        ys.push(var(format!("p{i}"))?);
    }
    Ok((chart, xs, ys))
}

/// `Σ_A (X^A dY^A - Y^A dX^A) = 2 (du - Σ p_i dx^i)` on the contact chart.
pub fn verify_chart_identity(n: usize) -> Result<ChartIdentity> {
    if n == 0 {
        return Err(CoreError::Precondition("n must be positive".into()));
    }
    let (chart, xs, ys) = chart_embedding(n)?;
    let mut lhs = DifferentialForm::zero(&chart);
    for (x, y) in xs.iter().zip(&ys) {
        let dy = DifferentialForm::scalar(y).d();
        let dx = DifferentialForm::scalar(x).d();
        lhs = &lhs + &(&dy.mul_expr(x)? - &dx.mul_expr(y)?);
    }
    Ok(ChartIdentity { lhs, rhs: contact_theta0(&chart, n)?.scale_const(&q(2, 1)) })
}

fn contact_theta0(chart: &Chart, n: usize) -> Result<DifferentialForm> {
    let mut t = DifferentialForm::dx(chart, "u")?;
    for i in 1..=n {
        let p = Expression::var(chart, &format!("p{i}"))?;
        t = &t - &DifferentialForm::dx(chart, &format!("x{i}"))?.mul_expr(&p)?;
    }
    Ok(t)
}

/// `θ0 ∧ (dθ0)^n` for `θ0 = du - Σ p dx` on the contact chart.
pub fn chart_contact_volume(n: usize) -> Result<DifferentialForm> {
    let chart = contact_chart(n)?;
    let t = contact_theta0(&chart, n)?;
    let dt = t.d();
    let mut acc = t;
    for _ in 0..n {
        acc = acc.wedge(&dt)?;
    }
    Ok(acc)
}

/// Residuals of the two plane equations at the embedded point of the
/// quadric over `x0`; all zero when the point lies on the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Incidence {
    pub residuals: Vec<Expression>,
}

impl Incidence {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(Expression::is_zero)
    }
}

/// The point `(1, x0, 2u - x0·p, p)` with `u, p` from the quadric at `x0`
/// satisfies the plane equations. `x0` lives on the quadric's chart, so
/// symbolic coefficients and points are allowed.
pub fn quadric_plane_incidence(quadric: &QuadricCoefficients, x0: &[Expression]) -> Result<Incidence> {
    let n = quadric.n();
    if x0.len() != n {
        return Err(CoreError::Precondition(format!("expected a point with {n} coordinates")));
    }
    let chart = quadric.chart();
    if x0.iter().any(|e| e.chart() != chart) {
        return Err(CoreError::Precondition("the point must live on the quadric's chart".into()));
    }
    let (u, p) = quadric.evaluate(x0);
    let one = Expression::one(chart);
    let mut y0 = u.scale(&q(2, 1));
    for i in 0..n {
        y0 = &y0 - &(&x0[i] * &p[i]);
    }
    let mut residuals = Vec::with_capacity(n + 1);
    let mut r0 = &y0 - &(&quadric.a0().scale(&q(2, 1)) * &one);
    for i in 0..n {
        r0 = &r0 - &(quadric.a(i) * &x0[i]);
    }
    residuals.push(r0);
    for i in 0..n {
        let mut r = &p[i] - quadric.a(i);
        for j in 0..n {
            r = &r - &(quadric.aa(i, j) * &x0[j]);
        }
        residuals.push(r);
    }
    Ok(Incidence { residuals })
}

/// The embedded point as a rational vector (for constant data).
pub fn embedded_point(quadric: &QuadricCoefficients, x0: &[Q]) -> Result<Vec<Q>> {
    let chart = quadric.chart();
    let pt: Vec<Expression> = x0.iter().map(|c| Expression::constant(chart, c.clone())).collect();
    let (u, p) = quadric.evaluate(&pt);
    let konst = |e: &Expression| e.as_constant().ok_or_else(|| CoreError::Precondition("quadric must be constant".into()));
    let u = konst(&u)?;
    let p: Vec<Q> = p.iter().map(konst).collect::<Result<_>>()?;
    let mut y0 = u * q(2, 1);
    for i in 0..x0.len() {
        y0 -= &x0[i] * &p[i];
    }
    let mut v = vec![q(1, 1)];
    v.extend(x0.iter().cloned());
    v.push(y0);
    v.extend(p);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use legpath_symbolic::parse_form;

    fn unit(space: &SymplecticSpace, k: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); space.dim()];
        v[k] = q(1, 1);
        v
    }

    #[test]
    fn contact_forms_on_lines() {
        let s = SymplecticSpace::new(1).unwrap();
        let c = s.chart();
        // e_{x0} ⌟ (dx0∧dy0 + dx1∧dy1) = dy0; e_{y0} gives -dx0.
        assert_eq!(contact_form_at_line(&unit(&s, 0), &s).unwrap(), parse_form::<Q>(c, "d(y0)").unwrap());
        assert_eq!(contact_form_at_line(&unit(&s, 2), &s).unwrap(), parse_form::<Q>(c, "-d(x0)").unwrap());
        let v: Vec<Q> = unit(&s, 0).iter().map(|x| x * q(2, 1)).collect();
        assert_eq!(contact_form_at_line(&v, &s).unwrap(), parse_form::<Q>(c, "2*d(y0)").unwrap());
        assert!(contact_form_at_line(&vec![Q::zero(); 4], &s).is_err());
        assert!(!s.volume().is_zero());
    }

    #[test]
    fn lagrangian_examples() {
        let s = SymplecticSpace::new(1).unwrap();
        let e = LinearSubspace::new(&s, vec![unit(&s, 0), unit(&s, 1)]).unwrap();
        assert!(is_lagrangian(&e, &s).unwrap());
        let bad = LinearSubspace::new(&s, vec![unit(&s, 0), unit(&s, 2)]).unwrap();
        assert!(!is_lagrangian(&bad, &s).unwrap());
        let line = LinearSubspace::new(&s, vec![unit(&s, 0)]).unwrap();
        assert!(is_lagrangian(&line, &s).is_err());
    }

    #[test]
    fn identity_quadric_plane() {
        // q = (0, 0, I), n = 2: span{e_x0, e_x1 + e_y1, e_x2 + e_y2}.
        let s = SymplecticSpace::new(2).unwrap();
        let id = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        let quad = QuadricCoefficients::from_rationals(q(0, 1), vec![q(0, 1); 2], id).unwrap();
        let plane = quadric_to_lagrangian(&quad, &s).unwrap();
        let add = |a: Vec<Q>, b: Vec<Q>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let expected = LinearSubspace::new(
            &s,
            vec![unit(&s, 0), add(unit(&s, 1), unit(&s, 4)), add(unit(&s, 2), unit(&s, 5))],
        )
        .unwrap();
        assert!(plane.same_as(&expected));
        assert!(is_lagrangian(&plane, &s).unwrap());
        let zero = QuadricCoefficients::from_rationals(q(0, 1), vec![q(0, 1); 2], vec![vec![q(0, 1); 2]; 2]).unwrap();
        let e = LinearSubspace::new(&s, vec![unit(&s, 0), unit(&s, 1), unit(&s, 2)]).unwrap();
        assert!(quadric_to_lagrangian(&zero, &s).unwrap().same_as(&e));
    }

    #[test]
    fn nonsymmetric_graph_is_not_lagrangian() {
        let s = SymplecticSpace::new(2).unwrap();
        let m = Matrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(1, 1)]]);
        let plane = graph_plane(&s, &q(0, 1), &[q(0, 1), q(0, 1)], &m).unwrap();
        assert!(!is_lagrangian(&plane, &s).unwrap());
    }

    #[test]
    fn chart_identity() {
        for n in 1..=3 {
            let id = verify_chart_identity(n).unwrap();
            assert!(id.holds(), "n = {n}: {}", id.residual());
            assert!(!chart_contact_volume(n).unwrap().is_zero());
        }
    }

    #[test]
    fn incidence_examples() {
        let s = SymplecticSpace::new(2).unwrap();
        let id = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        let quad = QuadricCoefficients::from_rationals(q(0, 1), vec![q(0, 1); 2], id).unwrap();
        let plane = quadric_to_lagrangian(&quad, &s).unwrap();
        for x0 in [[q(0, 1), q(0, 1)], [q(1, 1), q(0, 1)]] {
            let pt: Vec<Expression> = x0.iter().map(|c| Expression::constant(quad.chart(), c.clone())).collect();
            assert!(quadric_plane_incidence(&quad, &pt).unwrap().holds());
            assert!(plane.contains(&embedded_point(&quad, &x0).unwrap()));
        }
        assert_eq!(embedded_point(&quad, &[q(0, 1), q(0, 1)]).unwrap(), unit(&s, 0));
    }
}
