//! sp(n+1)-valued 1-forms `Φ = (φ, π; η, -φᵗ)`, their curvature
//! `Ω = dΦ + Φ∧Φ`, Maurer–Cartan forms and the algebraic curvature identities.

use std::fmt;

use legpath_symbolic::{q, Chart, DifferentialForm, Expression, Matrix, RationalFunction, Q};
use num_traits::{One, Zero};

use crate::coframe::Coframe;
use crate::error::{invariant, CoreError, Result};
use crate::report_io::Check;

type RF = RationalFunction;

/// Dense matrix of differential forms on one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix {
    chart: Chart,
    rows: usize,
    cols: usize,
    data: Vec<DifferentialForm>,
}

impl FormMatrix {
    pub fn zeros(chart: &Chart, rows: usize, cols: usize) -> Self {
        FormMatrix { chart: chart.clone(), rows, cols, data: vec![DifferentialForm::zero(chart); rows * cols] }
    }

    pub fn from_fn(chart: &Chart, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> DifferentialForm) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FormMatrix { chart: chart.clone(), rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(chart: &Chart, rows: Vec<Vec<DifferentialForm>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        FormMatrix { chart: chart.clone(), rows: r, cols: c, data }
    }

    /// A column vector.
    pub fn column(chart: &Chart, entries: Vec<DifferentialForm>) -> Self {
        let rows = entries.len();
        FormMatrix { chart: chart.clone(), rows, cols: 1, data: entries }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &DifferentialForm {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: DifferentialForm) {
        self.data[i * self.cols + j] = f;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &DifferentialForm)> {
        self.data.iter().enumerate().map(move |(k, f)| (k / self.cols, k % self.cols, f))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(DifferentialForm::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.chart, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&DifferentialForm) -> DifferentialForm) -> Self {
        FormMatrix { chart: self.chart.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale_const(&self, c: &Q) -> Self {
        self.map(|f| f.scale_const(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|f| -f)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        Self::from_fn(&self.chart, self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        Self::from_fn(&self.chart, self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    /// Matrix product with wedge as the entry product.
    pub fn wedge(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(&self.chart, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = DifferentialForm::zero(&self.chart);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.wedge(b)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn d(&self) -> Self {
        self.map(DifferentialForm::d)
    }

    /// `M · self` for a matrix of functions `M`.
    pub fn left_mul(&self, m: &Matrix<RF>) -> Self {
        assert_eq!(m.cols(), self.rows, "dimension mismatch");
        Self::from_fn(&self.chart, m.rows(), self.cols, |i, j| {
            (0..self.rows).fold(DifferentialForm::zero(&self.chart), |acc, k| {
                if m[(i, k)].is_zero() {
                    acc
                } else {
                    &acc + &self.get(k, j).scale(&m[(i, k)])
                }
            })
        })
    }

    /// `self · M` for a matrix of functions `M`.
    pub fn right_mul(&self, m: &Matrix<RF>) -> Self {
        self.transpose().left_mul(&m.transpose()).transpose()
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(&self.chart, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `(a, b; c, d)`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows, "dimension mismatch");
        assert_eq!(c.rows, d.rows, "dimension mismatch");
        assert_eq!(a.cols, c.cols, "dimension mismatch");
        assert_eq!(b.cols, d.cols, "dimension mismatch");
        Self::from_fn(&a.chart, a.rows + c.rows, a.cols + b.cols, |i, j| {
            let top = i < a.rows;
            let left = j < a.cols;
            match (top, left) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            }
        })
    }
}

impl fmt::Display for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `J M + Mᵗ J` with `J = (0, I; -I, 0)`; zero iff `M` lies in sp.
pub fn sp_defect(m: &FormMatrix) -> FormMatrix {
    let h = m.rows / 2;
    let jm = FormMatrix::from_blocks(
        &m.block(h, 0, h, h),
        &m.block(h, h, h, h),
        &m.block(0, 0, h, h).neg(),
        &m.block(0, h, h, h).neg(),
    );
    let mt = m.transpose();
    let mtj = FormMatrix::from_blocks(
        &mt.block(0, h, h, h).neg(),
        &mt.block(0, 0, h, h),
        &mt.block(h, h, h, h).neg(),
        &mt.block(h, 0, h, h),
    );
    jm.add(&mtj)
}

/// Block normalization of `Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `φ = (-½ρ, -½βᵗ; ω, -(αᵗ - ½ρ))`, `π = (-¼ψ, ½μᵗ; ½μ, γ)`.
    PathGeometry,
    /// `φ = (-ρ, -½βᵗ; ω, α)`, `π = (ψ, -½μᵗ; -½μ, γ)`, where the β, μ and
    /// ψ slots hold `φ0`, `π0` and `π0⁰`.
    NormalSymplectic,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::PathGeometry => "path",
            Convention::NormalSymplectic => "normal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "path" => Some(Convention::PathGeometry),
            "normal" => Some(Convention::NormalSymplectic),
            _ => None,
        }
    }
}

/// Named connection components, all 1-forms on one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionBlocks {
    pub chart: Chart,
    pub theta0: DifferentialForm,
    pub theta: Vec<DifferentialForm>,
    pub big_theta: Vec<Vec<DifferentialForm>>,
    pub omega: Vec<DifferentialForm>,
    pub rho: DifferentialForm,
    pub alpha: Vec<Vec<DifferentialForm>>,
    pub beta: Vec<DifferentialForm>,
    pub mu: Vec<DifferentialForm>,
    pub gamma: Vec<Vec<DifferentialForm>>,
    pub psi: DifferentialForm,
}

impl ConnectionBlocks {
    pub fn zero(chart: &Chart, n: usize) -> Self {
        let z = DifferentialForm::zero(chart);
        let v = vec![z.clone(); n];
        let m = vec![v.clone(); n];
        ConnectionBlocks {
            chart: chart.clone(),
            theta0: z.clone(),
            theta: v.clone(),
            big_theta: m.clone(),
            omega: v.clone(),
            rho: z.clone(),
            alpha: m.clone(),
            beta: v.clone(),
            mu: v,
            gamma: m,
            psi: z,
        }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    /// Every named entry with its 1-based path, e.g. `Theta[1][2]`.
    pub fn named_entries(&self) -> Vec<(String, &DifferentialForm)> {
        let mut out = vec![("theta0".to_string(), &self.theta0)];
        let vecs: [(&str, &Vec<DifferentialForm>); 2] = [("theta", &self.theta), ("omega", &self.omega)];
        let mats: [(&str, &Vec<Vec<DifferentialForm>>); 3] =
            [("Theta", &self.big_theta), ("alpha", &self.alpha), ("gamma", &self.gamma)];
        for (name, v) in vecs {
            for (i, f) in v.iter().enumerate() {
                out.push((format!("{name}[{}]", i + 1), f));
            }
        }
        out.push(("rho".into(), &self.rho));
        for (name, v) in [("beta", &self.beta), ("mu", &self.mu)] {
            for (i, f) in v.iter().enumerate() {
                out.push((format!("{name}[{}]", i + 1), f));
            }
        }
        for (name, m) in mats {
            for (i, r) in m.iter().enumerate() {
                for (j, f) in r.iter().enumerate() {
                    out.push((format!("{name}[{}][{}]", i + 1, j + 1), f));
                }
            }
        }
        out.push(("psi".into(), &self.psi));
        out
    }

    /// Shapes, charts, degrees and the symmetry of `Θ` and `γ`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let sizes_ok = self.omega.len() == n
            && self.beta.len() == n
            && self.mu.len() == n
            && [&self.big_theta, &self.alpha, &self.gamma].iter().all(|m| m.len() == n && m.iter().all(|r| r.len() == n));
        if !sizes_ok {
            return Err(invariant("blocks", format!("inconsistent block sizes for n = {n}")));
        }
        for (name, f) in self.named_entries() {
            if f.chart() != &self.chart {
                return Err(invariant(name, "not on the connection chart"));
            }
            if !f.is_zero() && f.degree() != Some(1) {
                return Err(invariant(name, "entries must be 1-forms"));
            }
        }
        for (label, m) in [("Theta", &self.big_theta), ("gamma", &self.gamma)] {
            for i in 0..n {
                for j in i + 1..n {
                    if m[i][j] != m[j][i] {
                        return Err(invariant(
                            format!("{label}[{}][{}] vs {label}[{}][{}]", i + 1, j + 1, j + 1, i + 1),
                            "block must be symmetric",
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn fm(chart: &Chart, m: &[Vec<DifferentialForm>]) -> FormMatrix {
    FormMatrix::from_rows(chart, m.to_vec())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpValuedOneForm {
    pub convention: Convention,
    pub eta: FormMatrix,
    pub phi: FormMatrix,
    pub pi: FormMatrix,
}

impl SpValuedOneForm {
    /// `Φ = (φ, π; η, -φᵗ)`.
    pub fn full(&self) -> FormMatrix {
        FormMatrix::from_blocks(&self.phi, &self.pi, &self.eta, &self.phi.transpose().neg())
    }

    pub fn n(&self) -> usize {
        self.eta.rows - 1
    }

    pub fn chart(&self) -> &Chart {
        self.eta.chart()
    }

    /// Split a full `2(n+1)` matrix; fails unless it lies in sp.
    pub fn from_full(m: &FormMatrix, convention: Convention) -> Result<Self> {
        if m.rows != m.cols || m.rows % 2 != 0 || m.rows < 4 {
            return Err(CoreError::Precondition("expected a 2(n+1) square matrix with n >= 1".into()));
        }
        if !sp_defect(m).is_zero() {
            return Err(invariant("Phi", "not sp-valued: J*Phi + Phi^t*J != 0"));
        }
        let h = m.rows / 2;
        Ok(SpValuedOneForm {
            convention,
            phi: m.block(0, 0, h, h),
            pi: m.block(0, h, h, h),
            eta: m.block(h, 0, h, h),
        })
    }
}

pub fn assemble_phi(blocks: &ConnectionBlocks, convention: Convention) -> Result<SpValuedOneForm> {
    blocks.validate()?;
    let n = blocks.n();
    let c = &blocks.chart;
    let half = q(1, 2);
    let mut eta = FormMatrix::zeros(c, n + 1, n + 1);
    eta.set(0, 0, blocks.theta0.scale_const(&q(2, 1)));
    for i in 0..n {
        eta.set(0, i + 1, blocks.theta[i].clone());
        eta.set(i + 1, 0, blocks.theta[i].clone());
        for j in 0..n {
            eta.set(i + 1, j + 1, blocks.big_theta[i][j].clone());
        }
    }
    let alpha = fm(c, &blocks.alpha);
    let mut phi = FormMatrix::zeros(c, n + 1, n + 1);
    let mut pi = FormMatrix::zeros(c, n + 1, n + 1);
    match convention {
        Convention::PathGeometry => {
            phi.set(0, 0, blocks.rho.scale_const(&-half.clone()));
            let at = alpha.transpose();
            for i in 0..n {
                phi.set(0, i + 1, blocks.beta[i].scale_const(&-half.clone()));
                phi.set(i + 1, 0, blocks.omega[i].clone());
                for j in 0..n {
                    let mut e = -at.get(i, j);
                    if i == j {
                        e = &e + &blocks.rho.scale_const(&half);
                    }
                    phi.set(i + 1, j + 1, e);
                }
            }
            pi.set(0, 0, blocks.psi.scale_const(&q(-1, 4)));
            for i in 0..n {
                pi.set(0, i + 1, blocks.mu[i].scale_const(&half));
                pi.set(i + 1, 0, blocks.mu[i].scale_const(&half));
                for j in 0..n {
                    pi.set(i + 1, j + 1, blocks.gamma[i][j].clone());
                }
            }
        }
        Convention::NormalSymplectic => {
            phi.set(0, 0, -&blocks.rho);
            for i in 0..n {
                phi.set(0, i + 1, blocks.beta[i].scale_const(&-half.clone()));
                phi.set(i + 1, 0, blocks.omega[i].clone());
                for j in 0..n {
                    phi.set(i + 1, j + 1, blocks.alpha[i][j].clone());
                }
            }
            pi.set(0, 0, blocks.psi.clone());
            for i in 0..n {
                pi.set(0, i + 1, blocks.mu[i].scale_const(&-half.clone()));
                pi.set(i + 1, 0, blocks.mu[i].scale_const(&-half.clone()));
                for j in 0..n {
                    pi.set(i + 1, j + 1, blocks.gamma[i][j].clone());
                }
            }
        }
    }
    Ok(SpValuedOneForm { convention, eta, phi, pi })
}

/// `Ω = dΦ + Φ∧Φ` as a full matrix of 2-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureForm {
    pub convention: Convention,
    pub omega: FormMatrix,
}

impl CurvatureForm {
    fn h(&self) -> usize {
        self.omega.rows / 2
    }

    pub fn n(&self) -> usize {
        self.h() - 1
    }

    pub fn omega_phi(&self) -> FormMatrix {
        self.omega.block(0, 0, self.h(), self.h())
    }

    pub fn omega_pi(&self) -> FormMatrix {
        self.omega.block(0, self.h(), self.h(), self.h())
    }

    pub fn omega_eta(&self) -> FormMatrix {
        self.omega.block(self.h(), 0, self.h(), self.h())
    }

    pub fn is_zero(&self) -> bool {
        self.omega.is_zero()
    }

    /// The `Θ`-block of `Ω_η` (`T` in the path-geometry convention).
    pub fn torsion(&self) -> FormMatrix {
        let n = self.n();
        self.omega_eta().block(1, 1, n, n)
    }
}

pub fn curvature(phi: &SpValuedOneForm) -> Result<CurvatureForm> {
    let m = phi.full();
    let omega = m.d().add(&m.wedge(&m)?);
    Ok(CurvatureForm { convention: phi.convention, omega })
}

/// `dΩ - (Ω∧Φ - Φ∧Ω)`, zero by the Bianchi identity.
pub fn bianchi_defect(phi: &SpValuedOneForm, omega: &CurvatureForm) -> Result<FormMatrix> {
    let m = phi.full();
    let rhs = omega.omega.wedge(&m)?.sub(&m.wedge(&omega.omega)?);
    Ok(omega.omega.d().sub(&rhs))
}

/// The standard symplectic form `J = (0, I; -I, 0)` of size `2h`.
pub fn standard_j(h: usize) -> Matrix<RF> {
    Matrix::from_fn(2 * h, 2 * h, |i, j| {
        if i < h && j == i + h {
            RF::one()
        } else if i >= h && j + h == i {
            -RF::one()
        } else {
            RF::zero()
        }
    })
}

/// A matrix of functions on a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub chart: Chart,
    pub g: Matrix<RF>,
}

impl GroupElement {
    pub fn new(chart: &Chart, g: Matrix<RF>) -> Self {
        GroupElement { chart: chart.clone(), g }
    }

    /// `gᵗ J g - J`.
    pub fn symplectic_defect(&self) -> Matrix<RF> {
        let j = standard_j(self.g.rows() / 2);
        self.g.transpose().mul(&j).mul(&self.g).sub(&j)
    }

    /// `g⁻¹ = -J gᵗ J` for symplectic `g`.
    pub fn symplectic_inverse(&self) -> Matrix<RF> {
        let j = standard_j(self.g.rows() / 2);
        j.mul(&self.g.transpose()).mul(&j).scale(&-RF::one())
    }

    pub fn entry(&self, i: usize, j: usize) -> Expression {
        Expression::new(&self.chart, self.g[(i, j)].clone())
    }
}

/// `Φ = g⁻¹ dg`.
pub fn maurer_cartan_form(g: &GroupElement, convention: Convention) -> Result<SpValuedOneForm> {
    let size = g.g.rows();
    if size != g.g.cols() || size % 2 != 0 || size < 4 {
        return Err(CoreError::Precondition("g must be a 2(n+1) square matrix with n >= 1".into()));
    }
    if !g.symplectic_defect().is_zero() {
        return Err(CoreError::Precondition("g is not symplectic: g^t J g != J".into()));
    }
    let dg = FormMatrix::from_fn(&g.chart, size, size, |i, j| DifferentialForm::scalar(&g.entry(i, j)).d());
    let phi = dg.left_mul(&g.symplectic_inverse());
    SpValuedOneForm::from_full(&phi, convention)
}

/// Named curvature components read back from the blocks of `Ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureComponents {
    /// Entries that must vanish for the block shape, with their labels.
    pub shape: Vec<(String, DifferentialForm)>,
    pub t: FormMatrix,
    pub alpha: FormMatrix,
    pub gamma: FormMatrix,
    /// `Ω_β` (path) or `Ω_φ0` (normal).
    pub beta: Vec<DifferentialForm>,
    /// `Ω_μ` (path) or `Ω_π0` (normal).
    pub mu: Vec<DifferentialForm>,
    /// `Ω_ψ` (path) or `Ω_π0⁰` (normal).
    pub psi: DifferentialForm,
}

pub fn components(omega: &CurvatureForm) -> CurvatureComponents {
    let n = omega.n();
    let (e, p, s) = (omega.omega_eta(), omega.omega_phi(), omega.omega_pi());
    let mut shape = Vec::new();
    for j in 0..=n {
        shape.push((format!("Omega_eta[1][{}]", j + 1), e.get(0, j).clone()));
    }
    for i in 0..=n {
        shape.push((format!("Omega_phi[{}][1]", i + 1), p.get(i, 0).clone()));
    }
    let t = e.block(1, 1, n, n);
    let gamma = s.block(1, 1, n, n);
    let lower = p.block(1, 1, n, n);
    match omega.convention {
        Convention::PathGeometry => CurvatureComponents {
            shape,
            t,
            alpha: lower.transpose().neg(),
            gamma,
            beta: (0..n).map(|i| p.get(0, i + 1).scale_const(&q(-2, 1))).collect(),
            mu: (0..n).map(|i| s.get(i + 1, 0).scale_const(&q(2, 1))).collect(),
            psi: s.get(0, 0).scale_const(&q(-4, 1)),
        },
        Convention::NormalSymplectic => CurvatureComponents {
            shape,
            t,
            alpha: lower,
            gamma,
            beta: (0..n).map(|i| p.get(0, i + 1).scale_const(&q(-2, 1))).collect(),
            mu: (0..n).map(|i| s.get(i + 1, 0).scale_const(&q(-2, 1))).collect(),
            psi: s.get(0, 0).clone(),
        },
    }
}

fn wedge_sum(terms: &[(&DifferentialForm, &DifferentialForm)], chart: &Chart) -> Result<DifferentialForm> {
    let mut acc = DifferentialForm::zero(chart);
    for (a, b) in terms {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc = &acc + &a.wedge(b)?;
    }
    Ok(acc)
}

fn forms_check(name: &str, forms: &[DifferentialForm]) -> Check {
    let bad: Vec<String> = forms.iter().enumerate().filter(|(_, f)| !f.is_zero()).map(|(i, f)| format!("[{}] {f}", i + 1)).collect();
    if bad.is_empty() {
        Check::pass(name)
    } else {
        Check::fail(name, bad.join("; "))
    }
}

/// The algebraic identities satisfied by the curvature, the block shape of
/// `Ω`, and `Ω ≡ 0 mod θ0, θ, ω`. Checks are sorted by name.
pub fn check_curvature_identities(omega: &CurvatureForm, blocks: &ConnectionBlocks) -> Result<Vec<Check>> {
    blocks.validate()?;
    let n = blocks.n();
    if omega.n() != n {
        return Err(CoreError::Precondition("curvature and blocks disagree on n".into()));
    }
    let c = &blocks.chart;
    let k = components(omega);
    let mut checks = Vec::new();
    let shape: Vec<String> =
        k.shape.iter().filter(|(_, f)| !f.is_zero()).map(|(name, f)| format!("{name} = {f}")).collect();
    checks.push(if shape.is_empty() { Check::pass("block_shape") } else { Check::fail("block_shape", shape.join("; ")) });

    match omega.convention {
        Convention::PathGeometry => {
            let mut i1 = Vec::new();
            let mut i2 = Vec::new();
            for i in 0..n {
                let mut t1 = vec![(&k.beta[i], &blocks.theta0)];
                let mut t2 = vec![(&k.mu[i], &blocks.theta0)];
                for j in 0..n {
                    t1.push((k.alpha.get(i, j), &blocks.theta[j]));
                    t1.push((k.t.get(i, j), &blocks.omega[j]));
                    t2.push((k.gamma.get(i, j), &blocks.theta[j]));
                    t2.push((k.alpha.get(j, i), &blocks.omega[j]));
                }
                i1.push(wedge_sum(&t1, c)?);
                i2.push(wedge_sum(&t2, c)?);
            }
            let mut t3 = vec![(&k.psi, &blocks.theta0)];
            let neg_mu: Vec<DifferentialForm> = k.mu.iter().map(|f| -f).collect();
            for j in 0..n {
                t3.push((&neg_mu[j], &blocks.theta[j]));
                t3.push((&k.beta[j], &blocks.omega[j]));
            }
            checks.push(forms_check("identity_beta_alpha_T", &i1));
            checks.push(forms_check("identity_mu_gamma_alpha", &i2));
            checks.push(forms_check("identity_psi_mu_beta", &[wedge_sum(&t3, c)?]));
        }
        Convention::NormalSymplectic => {
            let psi4 = k.psi.scale_const(&q(-4, 1));
            let mut t = vec![(&psi4, &blocks.theta0)];
            for j in 0..n {
                t.push((&k.beta[j], &blocks.omega[j]));
                t.push((&k.mu[j], &blocks.theta[j]));
            }
            checks.push(forms_check("identity_phi0_pi0_pi00", &[wedge_sum(&t, c)?]));
        }
    }

    let mut named = vec![("theta0".to_string(), blocks.theta0.clone())];
    for i in 0..n {
        named.push((format!("theta{}", i + 1), blocks.theta[i].clone()));
    }
    for i in 0..n {
        named.push((format!("omega{}", i + 1), blocks.omega[i].clone()));
    }
    for i in 0..n {
        for j in i..n {
            named.push((format!("Theta{}{}", i + 1, j + 1), blocks.big_theta[i][j].clone()));
        }
    }
    let frame = Coframe::complete(c, named)?;
    let ideal: Vec<usize> = (0..=2 * n).collect();
    let mut residues = Vec::new();
    for (i, j, f) in omega.omega.entries() {
        let r = frame.residue_mod(f, &ideal)?;
        if !r.is_zero() {
            residues.push(format!("Omega[{}][{}] = {r}", i + 1, j + 1));
        }
    }
    checks.push(if residues.is_empty() {
        Check::pass("omega_mod_theta0_theta_omega")
    } else {
        Check::fail("omega_mod_theta0_theta_omega", residues.join("; "))
    });
    checks.push(forms_check("sp_membership", &sp_defect(&omega.omega).data));
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(checks)
}

/// Blocks of the flat model on the jet chart: `θ0, θ_i, Θ_ij` of the
/// quadric system, `ω = dx`, all other components zero.
pub fn flat_blocks(jet: &crate::contact_jets::JetChart) -> ConnectionBlocks {
    let n = jet.n();
    let ideal = crate::contact_jets::contact_ideal(&crate::contact_jets::PathSystem::zero(jet));
    let mut b = ConnectionBlocks::zero(jet.chart(), n);
    b.theta0 = ideal.theta0().clone();
    for i in 0..n {
        b.theta[i] = ideal.theta(i).clone();
        b.omega[i] = jet.dx(i);
        for j in 0..n {
            b.big_theta[i][j] = ideal.big_theta(i, j).clone();
        }
    }
    b
}

/// A constant-coefficient sp matrix `(A, B; C, -Aᵗ)` with `B, C` symmetric.
pub fn sp_constant(a: &Matrix<Q>, b: &Matrix<Q>, c: &Matrix<Q>) -> Matrix<Q> {
    let h = a.rows();
    Matrix::from_fn(2 * h, 2 * h, |i, j| match (i < h, j < h) {
        (true, true) => a[(i, j)].clone(),
        (true, false) => b[(i, j - h)].clone(),
        (false, true) => c[(i - h, j)].clone(),
        (false, false) => -a[(j - h, i - h)].clone(),
    })
}

/// `M · f` for a constant matrix and a single form.
pub fn constant_times(m: &Matrix<Q>, f: &DifferentialForm) -> FormMatrix {
    FormMatrix::from_fn(f.chart(), m.rows(), m.cols(), |i, j| f.scale_const(&m[(i, j)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact_jets::JetChart;
    use legpath_symbolic::{parse_expr, parse_form};

    fn rf(c: &Chart, s: &str) -> RF {
        parse_expr::<Q>(c, s).unwrap().into_value()
    }

    fn sample_constant() -> Matrix<Q> {
        let a = Matrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(-1, 1)]]);
        let b = Matrix::from_rows(vec![vec![q(3, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        let c = Matrix::from_rows(vec![vec![q(0, 1), q(5, 1)], vec![q(5, 1), q(2, 1)]]);
        sp_constant(&a, &b, &c)
    }

    #[test]
    fn zero_and_flat_blocks() {
        let jet = JetChart::new(2).unwrap();
        let phi = assemble_phi(&ConnectionBlocks::zero(jet.chart(), 2), Convention::PathGeometry).unwrap();
        assert!(phi.full().is_zero());

        let blocks = flat_blocks(&jet);
        for conv in [Convention::PathGeometry, Convention::NormalSymplectic] {
            let phi = assemble_phi(&blocks, conv).unwrap();
            assert!(sp_defect(&phi.full()).is_zero());
            let omega = curvature(&phi).unwrap();
            assert!(omega.is_zero(), "{}", omega.omega);
            assert!(check_curvature_identities(&omega, &blocks).unwrap().iter().all(|c| c.pass));
        }
    }

    #[test]
    fn transcribed_eta() {
        let jet = JetChart::new(2).unwrap();
        let mut b = ConnectionBlocks::zero(jet.chart(), 2);
        b.theta0 = jet.theta0();
        b.theta = vec![jet.dp(0), jet.dp(1)];
        let phi = assemble_phi(&b, Convention::PathGeometry).unwrap();
        assert_eq!(phi.eta.get(0, 0), &jet.theta0().scale_const(&q(2, 1)));
        assert_eq!(phi.eta.get(0, 2), &jet.dp(1));
        assert_eq!(phi.eta.get(2, 0), &jet.dp(1));
        assert!(phi.phi.is_zero() && phi.pi.is_zero());
    }

    #[test]
    fn constant_and_linear_potentials() {
        let c = Chart::new("c", &["x1", "x2"]).unwrap();
        let m = sample_constant();
        let dx1 = DifferentialForm::dx(&c, "x1").unwrap();
        let dx2 = DifferentialForm::dx(&c, "x2").unwrap();
        let phi = SpValuedOneForm::from_full(&constant_times(&m, &dx1), Convention::PathGeometry).unwrap();
        assert!(curvature(&phi).unwrap().is_zero());

        // Φ = x1 C dx2 with C² dx2∧dx2 = 0, so Ω = C dx1∧dx2.
        let x1 = parse_expr::<Q>(&c, "x1").unwrap();
        let phi = SpValuedOneForm::from_full(&constant_times(&m, &dx2.mul_expr(&x1).unwrap()), Convention::PathGeometry)
            .unwrap();
        let omega = curvature(&phi).unwrap();
        assert_eq!(omega.omega, constant_times(&m, &dx1.wedge(&dx2).unwrap()));
        assert!(bianchi_defect(&phi, &omega).unwrap().is_zero());
    }

    #[test]
    fn maurer_cartan_unipotent() {
        let c = Chart::new("c", &["x1", "x2"]).unwrap();
        let s = [["x1^2", "x2"], ["x2", "x1*x2"]];
        let g = Matrix::from_fn(4, 4, |i, j| {
            if i == j {
                RF::one()
            } else if i >= 2 && j < 2 {
                rf(&c, s[i - 2][j])
            } else {
                RF::zero()
            }
        });
        let g = GroupElement::new(&c, g);
        assert!(g.symplectic_defect().is_zero());
        assert_eq!(g.symplectic_inverse(), g.g.inverse().unwrap());
        let phi = maurer_cartan_form(&g, Convention::PathGeometry).unwrap();
        // Φ = (0, 0; dS, 0).
        assert!(phi.phi.is_zero() && phi.pi.is_zero());
        assert_eq!(phi.eta.get(0, 0), &parse_form::<Q>(&c, "2*x1*d(x1)").unwrap());
        assert_eq!(phi.eta.get(1, 1), &parse_form::<Q>(&c, "x2*d(x1) + x1*d(x2)").unwrap());
        assert!(curvature(&phi).unwrap().is_zero());

        let id = GroupElement::new(&c, Matrix::identity(4));
        assert!(maurer_cartan_form(&id, Convention::PathGeometry).unwrap().full().is_zero());

        let mut bad = Matrix::<RF>::identity(4);
        bad[(0, 0)] = rf(&c, "2");
        assert!(maurer_cartan_form(&GroupElement::new(&c, bad), Convention::PathGeometry).is_err());
    }

    #[test]
    fn perturbed_gamma_reports_violations() {
        // γ11 += x1 dx2. Then Ω_γ11 = dx1∧dx2, Ω_φ[a][1] gains γ11∧η[1][a],
        // so the first two identities and the block shape fail while the
        // third identity and the congruence mod θ0, θ, ω still hold.
        let jet = JetChart::new(2).unwrap();
        let mut blocks = flat_blocks(&jet);
        let x1 = jet.x(0);
        blocks.gamma[0][0] = jet.dx(1).mul_expr(&x1).unwrap();
        let phi = assemble_phi(&blocks, Convention::PathGeometry).unwrap();
        let omega = curvature(&phi).unwrap();
        let k = components(&omega);
        assert_eq!(k.gamma.get(0, 0), &jet.dx(0).wedge(&jet.dx(1)).unwrap());
        let verdicts: Vec<(String, bool)> =
            check_curvature_identities(&omega, &blocks).unwrap().into_iter().map(|c| (c.name, c.pass)).collect();
        let expect = [
            ("block_shape", false),
            ("identity_beta_alpha_T", false),
            ("identity_mu_gamma_alpha", false),
            ("identity_psi_mu_beta", true),
            ("omega_mod_theta0_theta_omega", true),
            ("sp_membership", true),
        ];
        assert_eq!(verdicts, expect.iter().map(|(n, p)| (n.to_string(), *p)).collect::<Vec<_>>());
    }

    #[test]
    fn degenerate_coframe_is_an_error() {
        let jet = JetChart::new(2).unwrap();
        let mut blocks = flat_blocks(&jet);
        blocks.omega[1] = blocks.omega[0].clone();
        let omega = curvature(&assemble_phi(&blocks, Convention::PathGeometry).unwrap()).unwrap();
        assert!(matches!(check_curvature_identities(&omega, &blocks), Err(CoreError::CoframeDegenerate(_))));
    }

    #[test]
    fn asymmetric_blocks_rejected() {
        let jet = JetChart::new(2).unwrap();
        let mut blocks = flat_blocks(&jet);
        blocks.gamma[0][1] = jet.dx(0);
        assert!(matches!(assemble_phi(&blocks, Convention::PathGeometry), Err(CoreError::Invariant { .. })));
    }
}
