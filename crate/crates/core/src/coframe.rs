//! Expansion of forms in a non-coordinate coframe.

use legpath_symbolic::{Chart, DifferentialForm, Matrix, RationalFunction};
use num_traits::Zero;

use crate::error::{CoreError, Result};

type RF = RationalFunction;

/// A basis `e_k = Σ_j M[k][j] dx^j` of 1-forms on a chart.
#[derive(Clone, Debug)]
pub struct Coframe {
    chart: Chart,
    names: Vec<String>,
    forms: Vec<DifferentialForm>,
    inverse: Matrix<RF>,
}

fn coefficients(chart: &Chart, f: &DifferentialForm) -> Result<Vec<RF>> {
    if !f.is_zero() && f.degree() != Some(1) {
        return Err(CoreError::Precondition(format!("expected a 1-form, got {f}")));
    }
    Ok((0..chart.dim() as u32).map(|j| f.coefficient(&[j]).into_value()).collect())
}

impl Coframe {
    /// `forms` must be linearly independent; they are completed to a basis
    /// with coordinate differentials (named `d(x)`), taken in chart order.
    pub fn complete(chart: &Chart, named: Vec<(String, DifferentialForm)>) -> Result<Self> {
        let dim = chart.dim();
        let mut rows = Vec::new();
        let mut names = Vec::new();
        let mut forms = Vec::new();
        for (name, f) in named {
            rows.push(coefficients(chart, &f)?);
            names.push(name);
            forms.push(f);
        }
        let given = Matrix::from_rows(rows.clone());
        if !rows.is_empty() && given.rank() < rows.len() {
            return Err(CoreError::CoframeDegenerate(format!("{} forms span only rank {}", rows.len(), given.rank())));
        }
        for j in 0..dim {
            if rows.len() == dim {
                break;
            }
            let mut e = vec![RF::zero(); dim];
            e[j] = num_traits::One::one();
            let mut trial = rows.clone();
            trial.push(e.clone());
            if Matrix::from_rows(trial).rank() == rows.len() + 1 {
                rows.push(e);
                let name = chart.var_name(j as u32).to_string();
                forms.push(DifferentialForm::dx(chart, &name)?);
                names.push(format!("d({name})"));
            }
        }
        let m = Matrix::from_rows(rows);
        let inverse = m.inverse().ok_or_else(|| CoreError::CoframeDegenerate("singular change of basis".into()))?;
        Ok(Coframe { chart: chart.clone(), names, forms, inverse })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn form(&self, k: usize) -> &DifferentialForm {
        &self.forms[k]
    }

    /// Coefficients `c_k` with `f = Σ c_k e_k`.
    pub fn expand1(&self, f: &DifferentialForm) -> Result<Vec<RF>> {
        let a = coefficients(&self.chart, f)?;
        Ok(self.inverse.transpose().mul_vec(&a))
    }

    /// Coefficients `B[k][l]` (k < l) with `f = Σ_{k<l} B[k][l] e_k ∧ e_l`.
    pub fn expand2(&self, f: &DifferentialForm) -> Result<Matrix<RF>> {
        if !f.is_zero() && f.degree() != Some(2) {
            return Err(CoreError::Precondition(format!("expected a 2-form, got {f}")));
        }
        let dim = self.chart.dim();
        let mut a = Matrix::<RF>::zeros(dim, dim);
        for (idx, c) in f.terms() {
            let (i, j) = (idx[0] as usize, idx[1] as usize);
            a[(i, j)] = c.clone();
            a[(j, i)] = -c.clone();
        }
        let w = &self.inverse;
        Ok(w.transpose().mul(&a).mul(w))
    }

    /// The part of a 2-form not in the algebraic ideal generated by the
    /// coframe elements in `ideal`, written back in coordinates. Zero iff
    /// the form lies in the ideal.
    pub fn residue_mod(&self, f: &DifferentialForm, ideal: &[usize]) -> Result<DifferentialForm> {
        let b = self.expand2(f)?;
        let mut out = DifferentialForm::zero(&self.chart);
        for k in 0..self.len() {
            for l in k + 1..self.len() {
                if ideal.contains(&k) || ideal.contains(&l) || b[(k, l)].is_zero() {
                    continue;
                }
                let t = self.forms[k].wedge(&self.forms[l])?.scale(&b[(k, l)]);
                out = &out + &t;
            }
        }
        Ok(out)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}
