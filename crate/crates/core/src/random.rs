//! Seeded generators for the randomized checks. All sizes are small and all
//! values exact.

use legpath_symbolic::{q, Chart, DifferentialForm, Expression, Matrix, Monomial, Poly, RationalFunction, Var, Q};
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::Rng;

use crate::cartan_forms::{FormMatrix, GroupElement};
use crate::torsion_normalizer::{PTensorQ, Torsion};

pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a/b` with `|a| <= 5`, `1 <= b <= 3`.
pub fn rational<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Q {
    loop {
        let v = rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A monomial in the first `nvars` chart variables of total degree `<= max_deg`.
pub fn monomial<R: Rng>(rng: &mut R, nvars: usize, max_deg: u32) -> Monomial {
    let deg = rng.gen_range(0..=max_deg);
    let mut exps = vec![0u32; nvars];
    for _ in 0..deg {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::from_pairs(exps.into_iter().enumerate().filter(|(_, e)| *e > 0).map(|(v, e)| (v as Var, e)))
}

/// A polynomial in the chart coordinates with at most `max_terms` terms.
pub fn polynomial<R: Rng>(rng: &mut R, chart: &Chart, max_deg: u32, max_terms: usize) -> Expression {
    let nvars = chart.dim();
    if nvars == 0 {
        return Expression::constant(chart, rational(rng));
    }
    let terms = rng.gen_range(1..=max_terms);
    let p = Poly::from_terms((0..terms).map(|_| (monomial(rng, nvars, max_deg), nonzero_rational(rng))));
    Expression::new(chart, RationalFunction::from_poly(p))
}

/// A homogeneous `degree`-form with polynomial coefficients.
pub fn form<R: Rng>(rng: &mut R, chart: &Chart, degree: usize, max_deg: u32, max_terms: usize) -> DifferentialForm {
    let dim = chart.dim();
    assert!(degree <= dim, "degree exceeds chart dimension");
    let terms = rng.gen_range(1..=max_terms);
    let mut out = DifferentialForm::zero(chart);
    for _ in 0..terms {
        let mut idx: Vec<Var> = sample(rng, dim, degree).into_iter().map(|v| v as Var).collect();
        idx.sort_unstable();
        let c = polynomial(rng, chart, max_deg, 2).into_value();
        out = &out + &DifferentialForm::from_terms(chart, [(idx, c)]);
    }
    out
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix<Q> {
    Matrix::from_fn(rows, cols, |_, _| rational(rng))
}

pub fn symmetric<R: Rng>(rng: &mut R, n: usize) -> Matrix<Q> {
    let m = matrix(rng, n, n);
    Matrix::from_fn(n, n, |i, j| if i <= j { m[(i, j)].clone() } else { m[(j, i)].clone() })
}

/// A matrix with `m != mᵗ`.
pub fn nonsymmetric<R: Rng>(rng: &mut R, n: usize) -> Matrix<Q> {
    assert!(n >= 2, "1x1 matrices are symmetric");
    loop {
        let m = matrix(rng, n, n);
        if m != m.transpose() {
            return m;
        }
    }
}

pub fn invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix<Q> {
    loop {
        let m = matrix(rng, n, n);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random torsion with the required index symmetries.
pub fn torsion<R: Rng>(rng: &mut R, n: usize) -> Torsion {
    let mut t = Torsion::zero(n);
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let v = rational(rng);
                t.ta.set(&[i, j, k], v.clone());
                t.ta.set(&[j, i, k], v);
            }
            for k in 0..n {
                for l in k..n {
                    let v = rational(rng);
                    for (a, b) in [(i, j), (j, i)] {
                        t.tb.set(&[a, b, k, l], v.clone());
                        t.tb.set(&[a, b, l, k], v.clone());
                    }
                    if k < l {
                        let w = rational(rng);
                        for (a, b) in [(i, j), (j, i)] {
                            t.tc.set(&[a, b, k, l], w.clone());
                            t.tc.set(&[a, b, l, k], -w.clone());
                        }
                    }
                }
            }
            for k in 0..n {
                for l in 0..n {
                    for m in l..n {
                        let v = rational(rng);
                        for (a, b) in [(i, j), (j, i)] {
                            t.td.set(&[k, a, b, l, m], v.clone());
                            t.td.set(&[k, a, b, m, l], v.clone());
                        }
                    }
                }
            }
        }
    }
    t
}

pub fn p_tensor<R: Rng>(rng: &mut R, n: usize) -> PTensorQ {
    let mut p = PTensorQ::zero(n);
    for i in 0..n {
        for j in 0..n {
            p.pa.set(&[i, j], rational(rng));
            for k in j..n {
                let v = rational(rng);
                p.pb.set(&[i, j, k], v.clone());
                p.pb.set(&[i, k, j], v);
                if j < k {
                    let w = rational(rng);
                    p.pc.set(&[i, j, k], w.clone());
                    p.pc.set(&[i, k, j], -w);
                }
            }
            for l in 0..n {
                for m in l..n {
                    let v = rational(rng);
                    p.pd.set(&[i, j, l, m], v.clone());
                    p.pd.set(&[i, j, m, l], v);
                }
            }
        }
    }
    p
}

fn constant_rf(c: &Q) -> RationalFunction {
    RationalFunction::constant(c.clone())
}

/// Symmetric matrix of polynomials on a chart.
fn symmetric_polys<R: Rng>(rng: &mut R, chart: &Chart, h: usize, max_deg: u32) -> Matrix<RationalFunction> {
    let mut m = Matrix::zeros(h, h);
    for i in 0..h {
        for j in i..h {
            let v = polynomial(rng, chart, max_deg, 2).into_value();
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// `(I, S; 0, I)(I, 0; T, I)(A, 0; 0, A⁻ᵗ)` with polynomial symmetric `S, T`
/// and constant invertible `A`, of size `2(n+1)`.
pub fn symplectic_element<R: Rng>(rng: &mut R, chart: &Chart, n: usize, max_deg: u32) -> GroupElement {
    let h = n + 1;
    let s = symmetric_polys(rng, chart, h, max_deg);
    let t = symmetric_polys(rng, chart, h, max_deg);
    let a = invertible(rng, h);
    let a_inv_t = a.inverse().expect("invertible").transpose();
    let upper = Matrix::from_fn(2 * h, 2 * h, |i, j| {
        if i == j {
            RationalFunction::one()
        } else if i < h && j >= h {
            s[(i, j - h)].clone()
        } else {
            RationalFunction::zero()
        }
    });
    let lower = Matrix::from_fn(2 * h, 2 * h, |i, j| {
        if i == j {
            RationalFunction::one()
        } else if i >= h && j < h {
            t[(i - h, j)].clone()
        } else {
            RationalFunction::zero()
        }
    });
    let diag = Matrix::from_fn(2 * h, 2 * h, |i, j| match (i < h, j < h) {
        (true, true) => constant_rf(&a[(i, j)]),
        (false, false) => constant_rf(&a_inv_t[(i - h, j - h)]),
        _ => RationalFunction::zero(),
    });
    GroupElement::new(chart, upper.mul(&lower).mul(&diag))
}

/// `(A, B; C, -Aᵗ)` with `B, C` symmetric, entries random polynomial 1-forms.
pub fn sp_one_form<R: Rng>(rng: &mut R, chart: &Chart, n: usize, max_deg: u32) -> FormMatrix {
    let h = n + 1;
    let one_form = |rng: &mut R| {
        if rng.gen_bool(0.3) {
            DifferentialForm::zero(chart)
        } else {
            form(rng, chart, 1, max_deg, 2)
        }
    };
    let a = FormMatrix::from_fn(chart, h, h, |_, _| one_form(rng));
    let mut b = FormMatrix::zeros(chart, h, h);
    let mut c = FormMatrix::zeros(chart, h, h);
    for i in 0..h {
        for j in i..h {
            let (x, y) = (one_form(rng), one_form(rng));
            b.set(i, j, x.clone());
            b.set(j, i, x);
            c.set(i, j, y.clone());
            c.set(j, i, y);
        }
    }
    FormMatrix::from_blocks(&a, &b, &c, &a.transpose().neg())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_respect_invariants() {
        let mut r = rng(7);
        for n in [1, 2, 3] {
            torsion(&mut r, n).validate().unwrap();
            p_tensor(&mut r, n).validate().unwrap();
        }
        let c = Chart::new("c", &["x1", "x2"]).unwrap();
        let g = symplectic_element(&mut r, &c, 1, 2);
        assert!(g.symplectic_defect().is_zero());
        let phi = sp_one_form(&mut r, &c, 1, 2);
        assert!(crate::cartan_forms::sp_defect(&phi).is_zero());
        assert_eq!(torsion(&mut rng(3), 2), torsion(&mut rng(3), 2));
    }
}
