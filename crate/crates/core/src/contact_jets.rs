//! Second-order jet charts, the contact ideal of a path system, canonical
//! lifts of hypersurfaces and Frobenius certification.

use std::collections::HashMap;

use legpath_symbolic::{Chart, ChartMap, DifferentialForm, Expression};

use crate::coframe::Coframe;
use crate::error::{invariant, CoreError, Result};

/// Position of `(i, j)`, `i <= j`, in the packed upper triangle of an n×n
/// symmetric matrix (row-major).
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Number of entries in the packed upper triangle.
pub fn sym_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// The chart `x1..xn, u, p1..pn, p11, p12, .., pnn` (only `i <= j`), plus
/// optional symbolic constants.
#[derive(Clone, Debug, PartialEq)]
pub struct JetChart {
    n: usize,
    chart: Chart,
}

impl JetChart {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_params(n, &[] as &[&str])
    }

    pub fn with_params<S: AsRef<str>>(n: usize, params: &[S]) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::Precondition("n must be positive".into()));
        }
        let mut names = Vec::new();
        names.extend((1..=n).map(|i| format!("x{i}")));
        names.push("u".to_string());
        names.extend((1..=n).map(|i| format!("p{i}")));
        for i in 1..=n {
            for j in i..=n {
                names.push(Self::second_name(n, i, j));
            }
        }
        let chart = Chart::with_params(&format!("jet{n}"), &names, params)?;
        Ok(JetChart { n, chart })
    }

    fn second_name(n: usize, i: usize, j: usize) -> String {
        if n >= 10 {
            format!("p{i}_{j}")
        } else {
            format!("p{i}{j}")
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Coordinate names, 0-based indices.
    pub fn x_name(&self, i: usize) -> String {
        format!("x{}", i + 1)
    }

    pub fn p_name(&self, i: usize) -> String {
        format!("p{}", i + 1)
    }

    /// Name of `p_ij`; symmetric in `i, j`.
    pub fn pp_name(&self, i: usize, j: usize) -> String {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        Self::second_name(self.n, i + 1, j + 1)
    }

    fn var(&self, name: &str) -> Expression {
        Expression::var(&self.chart, name).expect("jet variable")
    }

    fn d(&self, name: &str) -> DifferentialForm {
        DifferentialForm::dx(&self.chart, name).expect("jet variable")
    }

    pub fn x(&self, i: usize) -> Expression {
        self.var(&self.x_name(i))
    }

    pub fn u(&self) -> Expression {
        self.var("u")
    }

    pub fn p(&self, i: usize) -> Expression {
        self.var(&self.p_name(i))
    }

    pub fn pp(&self, i: usize, j: usize) -> Expression {
        self.var(&self.pp_name(i, j))
    }

    pub fn dx(&self, i: usize) -> DifferentialForm {
        self.d(&self.x_name(i))
    }

    pub fn du(&self) -> DifferentialForm {
        self.d("u")
    }

    pub fn dp(&self, i: usize) -> DifferentialForm {
        self.d(&self.p_name(i))
    }

    pub fn dpp(&self, i: usize, j: usize) -> DifferentialForm {
        self.d(&self.pp_name(i, j))
    }

    /// The Darboux contact form `du - Σ p_k dx^k`.
    pub fn theta0(&self) -> DifferentialForm {
        let mut f = self.du();
        for k in 0..self.n {
            f = &f - &self.dx(k).mul_expr(&self.p(k)).expect("same chart");
        }
        f
    }

    /// `θ_0 ∧ (dθ_0)^n`, nonzero for a contact form.
    pub fn contact_volume(&self) -> DifferentialForm {
        let t = self.theta0();
        let dt = t.d();
        let mut acc = t;
        for _ in 0..self.n {
            acc = acc.wedge(&dt).expect("same chart");
        }
        acc
    }
}

/// A path system: functions `F_ijk = F_jik` on the jet chart.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSystem {
    jet: JetChart,
    /// `f[sym_index(i, j) * n + k]`.
    f: Vec<Expression>,
}

impl PathSystem {
    /// The quadric system `F ≡ 0`.
    pub fn zero(jet: &JetChart) -> Self {
        let n = jet.n;
        PathSystem { jet: jet.clone(), f: vec![Expression::zero(jet.chart()); sym_len(n) * n] }
    }

    /// Build from a full `F[i][j][k]` (0-based). Fails unless `F_ijk = F_jik`.
    pub fn new(jet: &JetChart, f: impl Fn(usize, usize, usize) -> Expression) -> Result<Self> {
        let n = jet.n;
        let mut sys = Self::zero(jet);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = f(i, j, k);
                    if v.chart() != jet.chart() {
                        return Err(invariant(format!("F[{}][{}][{}]", i + 1, j + 1, k + 1), "not on the jet chart"));
                    }
                    if j < i {
                        if v != sys.get(i, j, k) {
                            return Err(invariant(
                                format!("F[{}][{}][{}] vs F[{}][{}][{}]", i + 1, j + 1, k + 1, j + 1, i + 1, k + 1),
                                "F must be symmetric in its first two indices",
                            ));
                        }
                    } else {
                        sys.f[sym_index(n, i, j) * n + k] = v;
                    }
                }
            }
        }
        Ok(sys)
    }

    /// Set `F_ijk` (and hence `F_jik`).
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Expression) -> Result<()> {
        if value.chart() != self.jet.chart() {
            return Err(invariant(format!("F[{}][{}][{}]", i + 1, j + 1, k + 1), "not on the jet chart"));
        }
        let n = self.jet.n;
        self.f[sym_index(n, i, j) * n + k] = value;
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Expression {
        let n = self.jet.n;
        self.f[sym_index(n, i, j) * n + k].clone()
    }

    pub fn jet(&self) -> &JetChart {
        &self.jet
    }

    pub fn n(&self) -> usize {
        self.jet.n
    }

    /// True if `F_ijk` is symmetric in all three indices.
    pub fn is_totally_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.get(i, j, k) == self.get(i, k, j))))
    }

    /// Nonzero entries with `i <= j`, 0-based.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, Expression)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }
}

/// Generators `θ_0`, `θ_i` and `Θ_ij` (`i <= j`).
#[derive(Clone, Debug, PartialEq)]
pub struct ContactIdeal {
    system: PathSystem,
    theta0: DifferentialForm,
    theta: Vec<DifferentialForm>,
    big_theta: Vec<DifferentialForm>,
}

pub fn contact_ideal(system: &PathSystem) -> ContactIdeal {
    let jet = &system.jet;
    let n = jet.n;
    let theta = (0..n)
        .map(|i| {
            let mut f = jet.dp(i);
            for k in 0..n {
                f = &f - &jet.dx(k).mul_expr(&jet.pp(i, k)).expect("same chart");
            }
            f
        })
        .collect();
    let mut big_theta = Vec::with_capacity(sym_len(n));
    for i in 0..n {
        for j in i..n {
            let mut f = jet.dpp(i, j);
            for k in 0..n {
                f = &f - &jet.dx(k).mul_expr(&system.get(i, j, k)).expect("same chart");
            }
            big_theta.push(f);
        }
    }
    ContactIdeal { system: system.clone(), theta0: jet.theta0(), theta, big_theta }
}

impl ContactIdeal {
    pub fn system(&self) -> &PathSystem {
        &self.system
    }

    pub fn theta0(&self) -> &DifferentialForm {
        &self.theta0
    }

    pub fn theta(&self, i: usize) -> &DifferentialForm {
        &self.theta[i]
    }

    pub fn big_theta(&self, i: usize, j: usize) -> &DifferentialForm {
        &self.big_theta[sym_index(self.system.n(), i, j)]
    }

    /// Generators in the order θ0, θ1..θn, Θ11, Θ12, .., Θnn with their names.
    pub fn generators(&self) -> Vec<(String, &DifferentialForm)> {
        let n = self.system.n();
        let mut out = vec![("theta0".to_string(), &self.theta0)];
        for i in 0..n {
            out.push((format!("theta{}", i + 1), &self.theta[i]));
        }
        for i in 0..n {
            for j in i..n {
                out.push((format!("Theta{}{}", i + 1, j + 1), self.big_theta(i, j)));
            }
        }
        out
    }

    /// Reduce a form modulo the ideal by `du → Σ p_k dx^k`,
    /// `dp_i → Σ p_ik dx^k`, `dp_ij → Σ F_ijk dx^k`.
    pub fn reduce(&self, f: &DifferentialForm) -> Result<DifferentialForm> {
        let jet = &self.system.jet;
        let n = jet.n;
        let chart = jet.chart();
        let combo = |coeff: &dyn Fn(usize) -> Expression| {
            let mut acc = DifferentialForm::zero(chart);
            for k in 0..n {
                acc = &acc + &jet.dx(k).mul_expr(&coeff(k)).expect("same chart");
            }
            acc
        };
        let mut images = Vec::with_capacity(chart.dim());
        for k in 0..n {
            images.push(jet.dx(k));
        }
        images.push(combo(&|k| jet.p(k)));
        for i in 0..n {
            images.push(combo(&|k| jet.pp(i, k)));
        }
        for i in 0..n {
            for j in i..n {
                images.push(combo(&|k| self.system.get(i, j, k)));
            }
        }
        Ok(f.map_differentials(&images)?)
    }

    /// The coframe `θ0, θ_i, Θ_ij, ω^i = dx^i` on the jet chart.
    pub fn coframe(&self) -> Result<Coframe> {
        let n = self.system.n();
        let jet = &self.system.jet;
        let mut named = Vec::new();
        for (name, f) in self.generators() {
            named.push((name, f.clone()));
        }
        for i in 0..n {
            named.push((format!("omega{}", i + 1), jet.dx(i)));
        }
        Coframe::complete(jet.chart(), named)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FrobeniusCertificate {
    Pass,
    /// `residue` is the reduced `d(generator)`, a 2-form in the `dx^k ∧ dx^l`.
    Fail { generator: String, residue: DifferentialForm },
}

impl FrobeniusCertificate {
    pub fn passed(&self) -> bool {
        matches!(self, FrobeniusCertificate::Pass)
    }
}

pub fn frobenius_check(ideal: &ContactIdeal) -> Result<FrobeniusCertificate> {
    for (name, g) in ideal.generators() {
        let r = ideal.reduce(&g.d())?;
        if !r.is_zero() {
            return Ok(FrobeniusCertificate::Fail { generator: name, residue: r });
        }
    }
    Ok(FrobeniusCertificate::Pass)
}

/// One named congruence with its residue (zero when it holds).
#[derive(Clone, Debug, PartialEq)]
pub struct Congruence {
    pub name: String,
    pub residue: DifferentialForm,
}

impl Congruence {
    pub fn holds(&self) -> bool {
        self.residue.is_zero()
    }
}

/// The structure congruences of the ideal:
/// `dθ0 + Σ θ_k∧ω^k ≡ 0 mod θ0`, `dθ_i + Σ Θ_ik∧ω^k ≡ 0 mod θ0, θ` and
/// `dΘ_ij ≡ 0 mod θ0, θ, Θ`. Each residue is the part outside the ideal,
/// written back in coordinates.
pub fn structure_congruences(ideal: &ContactIdeal) -> Result<Vec<Congruence>> {
    let n = ideal.system.n();
    let jet = &ideal.system.jet;
    let frame = ideal.coframe()?;
    let idx = |name: &str| frame.index_of(name).expect("coframe element");
    let mod0 = vec![idx("theta0")];
    let mut mod1 = mod0.clone();
    mod1.extend((1..=n).map(|i| idx(&format!("theta{i}"))));
    let mut mod2 = mod1.clone();
    for i in 1..=n {
        for j in i..=n {
            mod2.push(idx(&format!("Theta{i}{j}")));
        }
    }
    let mut out = Vec::new();
    let mut lhs = ideal.theta0.d();
    for k in 0..n {
        lhs = &lhs + &ideal.theta[k].wedge(&jet.dx(k))?;
    }
    out.push(Congruence { name: "dtheta0".into(), residue: frame.residue_mod(&lhs, &mod0)? });
    for i in 0..n {
        let mut lhs = ideal.theta[i].d();
        for k in 0..n {
            lhs = &lhs + &ideal.big_theta(i, k).wedge(&jet.dx(k))?;
        }
        out.push(Congruence { name: format!("dtheta{}", i + 1), residue: frame.residue_mod(&lhs, &mod1)? });
    }
    for i in 0..n {
        for j in i..n {
            let lhs = ideal.big_theta(i, j).d();
            out.push(Congruence {
                name: format!("dTheta{}{}", i + 1, j + 1),
                residue: frame.residue_mod(&lhs, &mod2)?,
            });
        }
    }
    Ok(out)
}

/// Canonical lift of the graph `u = f(x)`: a map from `f`'s chart into the
/// jet chart.
#[derive(Clone, Debug)]
pub struct Lift {
    pub map: ChartMap,
}

impl Lift {
    pub fn source(&self) -> &Chart {
        self.map.source()
    }

    pub fn image(&self, name: &str) -> Result<&Expression> {
        Ok(self.map.image(name)?)
    }
}

/// `f` must be a polynomial on a chart whose coordinates are exactly
/// `x1..xn`; its parameters, if any, are carried to same-named jet parameters.
pub fn lift_hypersurface(f: &Expression, jet: &JetChart) -> Result<Lift> {
    let n = jet.n;
    let expected: Vec<String> = (0..n).map(|i| jet.x_name(i)).collect();
    if f.chart().coords() != expected.as_slice() {
        return Err(CoreError::Precondition(format!(
            "hypersurface must be given on a chart with coordinates {expected:?}"
        )));
    }
    if !f.is_polynomial() {
        return Err(CoreError::Precondition("hypersurface function must be a polynomial".into()));
    }
    let src = f.chart();
    let grad: Vec<Expression> = (0..n).map(|i| f.partial(&jet.x_name(i))).collect::<std::result::Result<_, _>>()?;
    let mut map = HashMap::new();
    for i in 0..n {
        map.insert(jet.x_name(i), Expression::var(src, &jet.x_name(i))?);
        map.insert(jet.p_name(i), grad[i].clone());
        for j in i..n {
            map.insert(jet.pp_name(i, j), grad[i].partial(&jet.x_name(j))?);
        }
    }
    map.insert("u".to_string(), f.clone());
    Ok(Lift { map: ChartMap::new(src, jet.chart(), &map)? })
}

/// The chart `x1..xn` (with optional parameters) on which hypersurfaces are
/// given.
pub fn base_chart<S: AsRef<str>>(n: usize, params: &[S]) -> Result<Chart> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    Ok(Chart::with_params(&format!("base{n}"), &names, params)?)
}

/// `Σ_k (∂_k∂_i∂_j f − F_ijk∘lift) dx^k`, the expected pullback of `Θ_ij`.
pub fn expected_theta_pullback(f: &Expression, system: &PathSystem, lift: &Lift, i: usize, j: usize) -> Result<DifferentialForm> {
    let jet = system.jet();
    let src = lift.source();
    let mut out = DifferentialForm::zero(src);
    let fij = f.partial(&jet.x_name(i))?.partial(&jet.x_name(j))?;
    for k in 0..jet.n() {
        let third = fij.partial(&jet.x_name(k))?;
        let fk = lift.map.pullback_expr(&system.get(i, j, k))?;
        let dxk = DifferentialForm::dx(src, &jet.x_name(k))?;
        out = &out + &dxk.mul_expr(&(&third - &fk))?;
    }
    Ok(out)
}

/// True if every entry of `residues` vanishes.
pub fn all_zero(forms: &[DifferentialForm]) -> bool {
    forms.iter().all(DifferentialForm::is_zero)
}
