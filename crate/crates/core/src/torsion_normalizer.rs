//! Gauge transformations of the torsion tensor and the P-tensor, and the
//! contraction solutions that normalize them.
//!
//! Component names used throughout (indices 0-based in code):
//! `ta[i][j][k] = T_ij^k`, `tb[i][j][k][l] = T_ij,kl`, `tc[i][j][k][l] = T_ij^{kl}`,
//! `td[k][i][j][l][m] = T^k_ij,lm`; `pa[i][j] = P^i_j`, `pb[i][j][k] = P^i_jk`,
//! `pc[i][j][k] = P^{i,jk}`, `pd[i][k][l][m] = P^i_k,lm`.

use legpath_symbolic::{Field, Matrix, Q};
use num_traits::{One, Zero};

use crate::error::{invariant, CoreError, Result};
use crate::report_io::Check;

fn two<F: Field>() -> F {
    F::one() + &F::one()
}

fn half<F: Field>() -> F {
    two::<F>().inverse().expect("characteristic 0")
}

fn delta<F: Field>(a: usize, b: usize) -> F {
    if a == b {
        F::one()
    } else {
        F::zero()
    }
}

/// Dense `n^rank` array.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<F> {
    n: usize,
    rank: usize,
    data: Vec<F>,
}

impl<F: Field> Tensor<F> {
    pub fn zeros(n: usize, rank: usize) -> Self {
        Tensor { n, rank, data: vec![F::zero(); n.pow(rank as u32)] }
    }

    pub fn from_fn(n: usize, rank: usize, mut f: impl FnMut(&[usize]) -> F) -> Self {
        let mut t = Self::zeros(n, rank);
        for (k, idx) in indices(n, rank).enumerate() {
            t.data[k] = f(&idx);
        }
        t
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank, "index rank");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.n, "index out of range");
            acc * self.n + i
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, idx: &[usize]) -> &F {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: F) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Nonzero entries in index order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &F)> {
        indices(self.n, self.rank).zip(self.data.iter()).filter(|(_, v)| !v.is_zero())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Tensor<G> {
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    /// First index tuple where `t[idx] != sign * t[swap(idx)]`.
    fn symmetry_violation(&self, a: usize, b: usize, antisymmetric: bool) -> Option<(Vec<usize>, Vec<usize>)> {
        for idx in indices(self.n, self.rank) {
            let mut sw = idx.clone();
            sw.swap(a, b);
            let other = self.get(&sw).clone();
            let other = if antisymmetric { -other } else { other };
            if *self.get(&idx) != other {
                return Some((idx, sw));
            }
        }
        None
    }
}

/// All index tuples of `n^rank` in row-major order.
pub fn indices(n: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 { 0 } else { n.pow(rank as u32) };
    (0..total).map(move |mut k| {
        let mut idx = vec![0; rank];
        for slot in idx.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        idx
    })
}

fn path(name: &str, idx: &[usize]) -> String {
    let mut s = name.to_string();
    for i in idx {
        s.push_str(&format!("[{}]", i + 1));
    }
    s
}

fn check_sym<F: Field>(name: &str, t: &Tensor<F>, a: usize, b: usize, anti: bool) -> Result<()> {
    match t.symmetry_violation(a, b, anti) {
        None => Ok(()),
        Some((x, y)) => Err(invariant(
            format!("{} vs {}", path(name, &x), path(name, &y)),
            if anti { "must be antisymmetric" } else { "must be symmetric" },
        )),
    }
}

/// Torsion components `T_ij^k`, `T_ij,kl`, `T_ij^{kl}` and `T^k_ij,lm`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionTensor<F> {
    pub ta: Tensor<F>,
    pub tb: Tensor<F>,
    pub tc: Tensor<F>,
    pub td: Tensor<F>,
}

pub type Torsion = TorsionTensor<Q>;

impl<F: Field> TorsionTensor<F> {
    pub fn zero(n: usize) -> Self {
        TorsionTensor { ta: Tensor::zeros(n, 3), tb: Tensor::zeros(n, 4), tc: Tensor::zeros(n, 4), td: Tensor::zeros(n, 5) }
    }

    pub fn n(&self) -> usize {
        self.ta.n
    }

    /// Symmetric in `ij` for every component, symmetric in `kl` for `T_ij,kl`,
    /// antisymmetric in `kl` for `T_ij^{kl}`, symmetric in `lm` for `T^k_ij,lm`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 || [self.tb.n, self.tc.n, self.td.n].iter().any(|&m| m != n) {
            return Err(CoreError::Precondition("torsion components disagree on n".into()));
        }
        check_sym("ta", &self.ta, 0, 1, false)?;
        check_sym("tb", &self.tb, 0, 1, false)?;
        check_sym("tb", &self.tb, 2, 3, false)?;
        check_sym("tc", &self.tc, 0, 1, false)?;
        check_sym("tc", &self.tc, 2, 3, true)?;
        check_sym("td", &self.td, 1, 2, false)?;
        check_sym("td", &self.td, 3, 4, false)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> TorsionTensor<G> {
        TorsionTensor { ta: self.ta.map(f), tb: self.tb.map(f), tc: self.tc.map(f), td: self.td.map(f) }
    }

    pub fn is_zero(&self) -> bool {
        self.ta.is_zero() && self.tb.is_zero() && self.tc.is_zero() && self.td.is_zero()
    }
}

/// `p`, `c^i`, `c^i_j` and `c^i_jk = c^i_kj`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeParameters<F> {
    pub p: F,
    pub c1: Vec<F>,
    pub c2: Tensor<F>,
    pub c3: Tensor<F>,
}

impl<F: Field> GaugeParameters<F> {
    pub fn zero(n: usize) -> Self {
        GaugeParameters { p: F::zero(), c1: vec![F::zero(); n], c2: Tensor::zeros(n, 2), c3: Tensor::zeros(n, 3) }
    }

    pub fn n(&self) -> usize {
        self.c1.len()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.c1.iter().all(|v| v.is_zero()) && self.c2.is_zero() && self.c3.is_zero()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.c2.n != n || self.c3.n != n {
            return Err(CoreError::Precondition("gauge parameters disagree on n".into()));
        }
        check_sym("c3", &self.c3, 1, 2, false)
    }

    pub fn neg(&self) -> Self {
        GaugeParameters {
            p: -self.p.clone(),
            c1: self.c1.iter().map(|v| -v.clone()).collect(),
            c2: self.c2.map(|v| -v.clone()),
            c3: self.c3.map(|v| -v.clone()),
        }
    }

    /// Coordinates `p, c^i, c^i_j, c^i_jk (j <= k)`.
    pub fn to_vector(&self) -> Vec<F> {
        let n = self.n();
        let mut v = vec![self.p.clone()];
        v.extend(self.c1.iter().cloned());
        v.extend(self.c2.data.iter().cloned());
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    v.push(self.c3.get(&[i, j, k]).clone());
                }
            }
        }
        v
    }

    pub fn from_vector(n: usize, v: &[F]) -> Self {
        assert_eq!(v.len(), gauge_dim(n), "gauge vector length");
        let mut g = Self::zero(n);
        g.p = v[0].clone();
        g.c1 = v[1..=n].to_vec();
        g.c2.data = v[n + 1..n + 1 + n * n].to_vec();
        let mut pos = n + 1 + n * n;
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    g.c3.set(&[i, j, k], v[pos].clone());
                    g.c3.set(&[i, k, j], v[pos].clone());
                    pos += 1;
                }
            }
        }
        g
    }
}

pub fn gauge_dim(n: usize) -> usize {
    1 + n + n * n + n * n * (n + 1) / 2
}

/// The transformed torsion under the gauge change `g`.
pub fn apply_gauge<F: Field>(t: &TorsionTensor<F>, g: &GaugeParameters<F>) -> Result<TorsionTensor<F>> {
    t.validate()?;
    g.validate()?;
    let n = t.n();
    if g.n() != n {
        return Err(CoreError::Precondition("gauge and torsion disagree on n".into()));
    }
    let h = half::<F>();
    let c1 = |i: usize| &g.c1[i];
    let c2 = |i: usize, j: usize| g.c2.get(&[i, j]);
    let c3 = |i: usize, j: usize, k: usize| g.c3.get(&[i, j, k]);
    let ta = Tensor::from_fn(n, 3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        let s = c1(i).clone() * &delta(j, k) + &(c1(j).clone() * &delta(i, k));
        t.ta.get(x).clone() - &(h.clone() * &s)
    });
    let tc = Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        let s = c2(i, k).clone() * &delta(j, l) - &(c2(i, l).clone() * &delta(j, k)) + &(c2(j, k).clone() * &delta(i, l))
            - &(c2(j, l).clone() * &delta(i, k));
        t.tc.get(x).clone() - &(h.clone() * &s)
    });
    let tb = Tensor::from_fn(n, 4, |x| {
        let (i, j, k, l) = (x[0], x[1], x[2], x[3]);
        let s = c2(i, k).clone() * &delta(j, l) + &(c2(i, l).clone() * &delta(j, k)) + &(c2(j, k).clone() * &delta(i, l))
            + &(c2(j, l).clone() * &delta(i, k));
        let pt = g.p.clone() * &(delta::<F>(i, k) * &delta(j, l) + &(delta::<F>(i, l) * &delta(j, k)));
        t.tb.get(x).clone() - &(h.clone() * &s) + &(h.clone() * &pt)
    });
    let td = Tensor::from_fn(n, 5, |x| {
        let (k, i, j, l, m) = (x[0], x[1], x[2], x[3], x[4]);
        let s = c3(i, k, l).clone() * &delta(j, m) + &(c3(i, k, m).clone() * &delta(j, l)) + &(c3(j, k, l).clone() * &delta(i, m))
            + &(c3(j, k, m).clone() * &delta(i, l));
        t.td.get(x).clone() - &(h.clone() * &s)
    });
    Ok(TorsionTensor { ta, tb, tc, td })
}

/// The first normalization conditions as named values, all zero when they hold.
pub fn first_conditions<F: Field>(t: &TorsionTensor<F>) -> Vec<(String, F)> {
    let n = t.n();
    let mut out = Vec::new();
    for i in 0..n {
        out.push((format!("T_ii^i[i={}]", i + 1), t.ta.get(&[i, i, i]).clone()));
    }
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            out.push((format!("T_ii^ki[i={},k={}]", i + 1, k + 1), t.tc.get(&[i, i, k, i]).clone()));
        }
    }
    for i in 0..n {
        out.push((format!("T_ii,ii[i={}]", i + 1), t.tb.get(&[i, i, i, i]).clone()));
    }
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            for m in (k..n).filter(|&m| m != i) {
                let v = t.td.get(&[k, i, i, i, m]).clone() + t.td.get(&[m, i, i, i, k]);
                out.push((format!("T^k_ii,im+T^m_ii,ik[i={},k={},m={}]", i + 1, k + 1, m + 1), v));
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            out.push((format!("T^k_ii,ii[i={},k={}]", i + 1, k + 1), t.td.get(&[k, i, i, i, i]).clone()));
        }
    }
    out
}

fn conditions_check<F: Field>(name: &str, conds: &[(String, F)], show: impl Fn(&F) -> String) -> Check {
    let bad: Vec<String> = conds.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| format!("{k} = {}", show(v))).collect();
    if bad.is_empty() {
        Check::pass(name)
    } else {
        Check::fail(name, bad.join("; "))
    }
}

pub fn first_normalization_check<F: Field>(t: &TorsionTensor<F>, show: impl Fn(&F) -> String) -> Check {
    conditions_check("first_normalization", &first_conditions(t), show)
}

/// Gauge parameters (with `p = 0`) solving the contraction system.
pub fn solve_first_normalization<F: Field>(t: &TorsionTensor<F>) -> Result<GaugeParameters<F>> {
    t.validate()?;
    let n = t.n();
    let h = half::<F>();
    let mut g = GaugeParameters::zero(n);
    for i in 0..n {
        g.c1[i] = t.ta.get(&[i, i, i]).clone();
        for k in 0..n {
            let v = if k == i { h.clone() * t.tb.get(&[i, i, i, i]) } else { t.tc.get(&[i, i, k, i]).clone() };
            g.c2.set(&[i, k], v);
        }
        for k in 0..n {
            let v = h.clone() * t.td.get(&[k, i, i, i, i]);
            g.c3.set(&[i, k, i], v.clone());
            g.c3.set(&[i, i, k], v);
        }
        for k in (0..n).filter(|&k| k != i) {
            for m in (0..n).filter(|&m| m != i) {
                let v = h.clone() * &(t.td.get(&[k, i, i, i, m]).clone() + t.td.get(&[m, i, i, i, k]));
                g.c3.set(&[i, k, m], v);
            }
        }
    }
    let after = apply_gauge(t, &g)?;
    if let Some((name, _)) = first_conditions(&after).into_iter().find(|(_, v)| !v.is_zero()) {
        return Err(invariant(name, "normalization condition fails after substitution"));
    }
    Ok(g)
}

/// Basis of the gauge directions that leave every first normalization
/// condition unchanged, from the nullspace of the linear condition map.
pub fn first_free_directions(n: usize) -> Result<Vec<GaugeParameters<Q>>> {
    let zero = Torsion::zero(n);
    let dim = gauge_dim(n);
    let mut columns = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut e = vec![Q::zero(); dim];
        e[k] = Q::one();
        let g = GaugeParameters::from_vector(n, &e);
        let conds = first_conditions(&apply_gauge(&zero, &g)?);
        columns.push(conds.into_iter().map(|(_, v)| v).collect::<Vec<_>>());
    }
    let rows = columns[0].len();
    let m = Matrix::from_fn(rows, dim, |r, c| columns[c][r].clone());
    Ok(m.nullspace().into_iter().map(|v| GaugeParameters::from_vector(n, &v)).collect())
}

/// The residual gauge `(p, c^i_j = ½ p δ_ij)`.
pub fn residual_gauge<F: Field>(n: usize, p: F) -> GaugeParameters<F> {
    let mut g = GaugeParameters::zero(n);
    let hp = half::<F>() * &p;
    for i in 0..n {
        g.c2.set(&[i, i], hp.clone());
    }
    g.p = p;
    g
}

/// Applies the residual gauge to a normalized tensor and checks that the
/// conditions still hold. Errors if the input is not normalized.
pub fn residual_gauge_preserves<F: Field>(t: &TorsionTensor<F>, p: F, show: impl Fn(&F) -> String) -> Result<Check> {
    t.validate()?;
    if let Some((name, _)) = first_conditions(t).into_iter().find(|(_, v)| !v.is_zero()) {
        return Err(CoreError::Precondition(format!("torsion is not normalized: {name} != 0")));
    }
    let after = apply_gauge(t, &residual_gauge(t.n(), p))?;
    Ok(conditions_check("residual_gauge_preserves", &first_conditions(&after), show))
}

/// `P^i_j`, `P^i_jk`, `P^{i,jk}` and `P^i_k,lm`.
#[derive(Clone, Debug, PartialEq)]
pub struct PTensor<F> {
    pub pa: Tensor<F>,
    pub pb: Tensor<F>,
    pub pc: Tensor<F>,
    pub pd: Tensor<F>,
}

pub type PTensorQ = PTensor<Q>;

impl<F: Field> PTensor<F> {
    pub fn zero(n: usize) -> Self {
        PTensor { pa: Tensor::zeros(n, 2), pb: Tensor::zeros(n, 3), pc: Tensor::zeros(n, 3), pd: Tensor::zeros(n, 4) }
    }

    pub fn n(&self) -> usize {
        self.pa.n
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 || [self.pb.n, self.pc.n, self.pd.n].iter().any(|&m| m != n) {
            return Err(CoreError::Precondition("P-tensor components disagree on n".into()));
        }
        check_sym("pb", &self.pb, 1, 2, false)?;
        check_sym("pc", &self.pc, 1, 2, true)?;
        check_sym("pd", &self.pd, 2, 3, false)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> PTensor<G> {
        PTensor { pa: self.pa.map(f), pb: self.pb.map(f), pc: self.pc.map(f), pd: self.pd.map(f) }
    }
}

/// `t`, `h^i` and `h_ij = h_ji`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondGaugeParameters<F> {
    pub t: F,
    pub h1: Vec<F>,
    pub h2: Tensor<F>,
}

impl<F: Field> SecondGaugeParameters<F> {
    pub fn zero(n: usize) -> Self {
        SecondGaugeParameters { t: F::zero(), h1: vec![F::zero(); n], h2: Tensor::zeros(n, 2) }
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero() && self.h1.iter().all(|v| v.is_zero()) && self.h2.is_zero()
    }

    pub fn validate(&self) -> Result<()> {
        if self.h2.n != self.h1.len() {
            return Err(CoreError::Precondition("second gauge parameters disagree on n".into()));
        }
        check_sym("h2", &self.h2, 0, 1, false)
    }
}

/// The transformed P-tensor under `(t, h)` with fiber parameter `p`.
pub fn apply_second_gauge<F: Field>(pt: &PTensor<F>, g: &SecondGaugeParameters<F>, p: &F) -> Result<PTensor<F>> {
    pt.validate()?;
    g.validate()?;
    let n = pt.n();
    if g.h1.len() != n {
        return Err(CoreError::Precondition("gauge and P-tensor disagree on n".into()));
    }
    let h = half::<F>();
    let quarter = h.clone() * &h;
    let shift = quarter * &(p.clone() * p) - &(h.clone() * &g.t);
    let pa = Tensor::from_fn(n, 2, |x| pt.pa.get(x).clone() - &(shift.clone() * &delta(x[0], x[1])));
    let pb = Tensor::from_fn(n, 3, |x| {
        let (i, j, k) = (x[0], x[1], x[2]);
        let s = delta::<F>(i, j) * &g.h1[k] + &(delta::<F>(i, k) * &g.h1[j]);
        pt.pb.get(x).clone() + &(h.clone() * &s)
    });
    let pd = Tensor::from_fn(n, 4, |x| {
        let (i, k, l, m) = (x[0], x[1], x[2], x[3]);
        let s = delta::<F>(i, m) * g.h2.get(&[l, k]) + &(delta::<F>(i, l) * g.h2.get(&[m, k]));
        pt.pd.get(x).clone() - &(h.clone() * &s)
    });
    Ok(PTensor { pa, pb, pc: pt.pc.clone(), pd })
}

/// The second normalization conditions as named values.
pub fn second_conditions<F: Field>(pt: &PTensor<F>) -> Vec<(String, F)> {
    let n = pt.n();
    let trace = (0..n).fold(F::zero(), |acc, i| acc + pt.pa.get(&[i, i]));
    let mut out = vec![("sum P^i_i".to_string(), trace)];
    for i in 0..n {
        out.push((format!("P^i_ii[i={}]", i + 1), pt.pb.get(&[i, i, i]).clone()));
    }
    for i in 0..n {
        for k in i..n {
            let v = pt.pd.get(&[i, k, i, i]).clone() + pt.pd.get(&[k, i, k, k]);
            out.push((format!("P^i_k,ii+P^k_i,kk[i={},k={}]", i + 1, k + 1), v));
        }
    }
    out
}

pub fn second_normalization_check<F: Field>(pt: &PTensor<F>, show: impl Fn(&F) -> String) -> Check {
    conditions_check("second_normalization", &second_conditions(pt), show)
}

/// Solution at `p = 0`: `h^i = -P^i_ii`, `h_ik = ½(P^i_k,ii + P^k_i,kk)`,
/// `t = -2 ΣP^i_i / n`.
pub fn solve_second_normalization<F: Field>(pt: &PTensor<F>) -> Result<SecondGaugeParameters<F>> {
    pt.validate()?;
    let n = pt.n();
    let h = half::<F>();
    let mut g = SecondGaugeParameters::zero(n);
    for i in 0..n {
        g.h1[i] = -pt.pb.get(&[i, i, i]).clone();
        for k in 0..n {
            let v = h.clone() * &(pt.pd.get(&[i, k, i, i]).clone() + pt.pd.get(&[k, i, k, k]));
            g.h2.set(&[i, k], v);
        }
    }
    let mut nf = F::zero();
    for _ in 0..n {
        nf = nf + &F::one();
    }
    let trace = (0..n).fold(F::zero(), |acc, i| acc + pt.pa.get(&[i, i]));
    g.t = -(two::<F>() * &trace * &nf.inverse().expect("n >= 1"));
    let after = apply_second_gauge(pt, &g, &F::zero())?;
    if let Some((name, _)) = second_conditions(&after).into_iter().find(|(_, v)| !v.is_zero()) {
        return Err(invariant(name, "normalization condition fails after substitution"));
    }
    Ok(g)
}

/// The residual `t = ½ p²`, `h = 0` that accompanies `ψ* = ψ + ½p²θ0`.
pub fn second_residual_gauge<F: Field>(n: usize, p: &F) -> SecondGaugeParameters<F> {
    let mut g = SecondGaugeParameters::zero(n);
    g.t = half::<F>() * &(p.clone() * p);
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use legpath_symbolic::{q, RationalFunction};

    #[test]
    fn indices_row_major() {
        let all: Vec<Vec<usize>> = indices(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn zero_gauge_is_identity() {
        let mut t = Torsion::zero(2);
        t.ta.set(&[0, 1, 1], q(3, 1));
        t.ta.set(&[1, 0, 1], q(3, 1));
        assert_eq!(apply_gauge(&t, &GaugeParameters::zero(2)).unwrap(), t);
    }

    #[test]
    fn c1_example() {
        let mut g = GaugeParameters::zero(2);
        g.c1[0] = q(1, 1);
        let t = apply_gauge(&Torsion::zero(2), &g).unwrap();
        assert_eq!(t.ta.get(&[0, 0, 0]), &q(-1, 1));
        assert_eq!(t.ta.get(&[0, 1, 1]), &q(-1, 2));
        assert_eq!(t.ta.get(&[1, 0, 1]), &q(-1, 2));
        assert_eq!(t.ta.entries().count(), 3);
        assert!(t.tb.is_zero() && t.tc.is_zero() && t.td.is_zero());
    }

    #[test]
    fn single_component_solution() {
        let mut t = Torsion::zero(2);
        t.ta.set(&[0, 0, 0], q(5, 1));
        let g = solve_first_normalization(&t).unwrap();
        let mut expect = GaugeParameters::zero(2);
        expect.c1[0] = q(5, 1);
        assert_eq!(g, expect);
        assert!(apply_gauge(&t, &g).unwrap().ta.get(&[0, 0, 0]).is_zero());
        assert!(solve_first_normalization(&Torsion::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn free_direction_is_the_p_gauge() {
        for n in [1, 2, 3] {
            let free = first_free_directions(n).unwrap();
            assert_eq!(free.len(), 1);
            let g = &free[0];
            let scale = g.p.clone();
            assert!(!scale.is_zero());
            assert_eq!(g, &residual_gauge(n, scale));
        }
    }

    #[test]
    fn residual_gauge_leaves_torsion_fixed() {
        let mut t = Torsion::zero(2);
        t.tc.set(&[0, 1, 0, 1], q(2, 1));
        t.tc.set(&[1, 0, 0, 1], q(2, 1));
        t.tc.set(&[0, 1, 1, 0], q(-2, 1));
        t.tc.set(&[1, 0, 1, 0], q(-2, 1));
        assert_eq!(apply_gauge(&t, &residual_gauge(2, q(3, 1))).unwrap(), t);
    }

    #[test]
    fn symbolic_p_residual() {
        let c = legpath_symbolic::Chart::new("p", &["p"]).unwrap();
        let p = legpath_symbolic::parse_expr::<Q>(&c, "p").unwrap().into_value();
        let t: TorsionTensor<RationalFunction> = Torsion::zero(2).map(|v| RationalFunction::constant(v.clone()));
        let check = residual_gauge_preserves(&t, p, |v| format!("{v:?}")).unwrap();
        assert!(check.pass);
    }

    #[test]
    fn unnormalized_input_rejected() {
        let mut t = Torsion::zero(2);
        t.tb.set(&[0, 0, 0, 0], q(1, 1));
        assert!(matches!(residual_gauge_preserves(&t, q(1, 1), |v| v.to_string()), Err(CoreError::Precondition(_))));
    }

    #[test]
    fn symmetry_violations_named() {
        let mut t = Torsion::zero(2);
        t.tc.set(&[0, 0, 0, 1], q(1, 1));
        let err = apply_gauge(&t, &GaugeParameters::zero(2)).unwrap_err();
        assert!(err.to_string().contains("tc[1][1][1][2] vs tc[1][1][2][1]"), "{err}");
    }

    #[test]
    fn second_normalization_examples() {
        let mut p = PTensorQ::zero(2);
        assert!(solve_second_normalization(&p).unwrap().is_zero());
        p.pb.set(&[0, 0, 0], q(4, 1));
        let g = solve_second_normalization(&p).unwrap();
        assert_eq!(g.h1, vec![q(-4, 1), q(0, 1)]);
        p.pa.set(&[0, 0], q(3, 1));
        p.pa.set(&[1, 1], q(1, 1));
        let g = solve_second_normalization(&p).unwrap();
        assert_eq!(g.t, q(-4, 1));
        let after = apply_second_gauge(&p, &g, &q(0, 1)).unwrap();
        assert!(second_normalization_check(&after, |v| v.to_string()).pass);
        let again = apply_second_gauge(&after, &second_residual_gauge(2, &q(5, 1)), &q(5, 1)).unwrap();
        assert_eq!(again, after);
    }
}
