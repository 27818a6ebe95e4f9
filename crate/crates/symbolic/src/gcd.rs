//! Multivariate polynomial gcd over a field.
//!
//! Recursive content / primitive-part scheme: a polynomial is viewed as
//! univariate in its smallest variable with coefficients in the ring of the
//! remaining variables, and a primitive pseudo-remainder sequence runs in that
//! variable. Sizes in this crate are small, so this is adequate.

use num_traits::Zero;

use crate::poly::{Monomial, Poly, Var};
use crate::scalar::Scalar;

/// Monic gcd (leading coefficient one in graded-lex order). `gcd(0, 0) = 0`.
pub fn gcd<C: Scalar>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::constant(C::one());
    }
    if a == b {
        return a.monic();
    }
    let va = a.variables();
    let vb = b.variables();
    let v = va[0].min(vb[0]);
    gcd_in(a, b, v).monic()
}

fn gcd_in<C: Scalar>(a: &Poly<C>, b: &Poly<C>, v: Var) -> Poly<C> {
    let da = a.degree_in(v);
    let db = b.degree_in(v);
    if da == 0 {
        return gcd(a, &content(b, v));
    }
    if db == 0 {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides").monic();
    let mut q = b.div_exact(&cb).expect("content divides").monic();
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_remainder(&p, &q, v);
        p = q;
        // Over a field the scalar factor is free; dropping it keeps the
        // coefficients from growing exponentially.
        q = if r.is_zero() { r } else { primitive_part(&r, v).monic() };
        if !q.is_zero() && q.degree_in(v) == 0 {
            // Coprime in v: the gcd is just the content part.
            return c;
        }
    }
    &c * &primitive_part(&p, v)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content<C: Scalar>(p: &Poly<C>, v: Var) -> Poly<C> {
    let mut g = Poly::zero();
    for coeff in p.coefficients_in(v) {
        if coeff.is_zero() {
            continue;
        }
        g = gcd(&g, &coeff);
        if g.is_constant() {
            return Poly::constant(C::one());
        }
    }
    g
}

pub fn primitive_part<C: Scalar>(p: &Poly<C>, v: Var) -> Poly<C> {
    let c = content(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
fn pseudo_remainder<C: Scalar>(a: &Poly<C>, b: &Poly<C>, v: Var) -> Poly<C> {
    let db = b.degree_in(v);
    let bc = b.coefficients_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    loop {
        let dr = r.degree_in(v);
        if r.is_zero() || dr < db {
            return r;
        }
        let lr = r.coefficients_in(v).swap_remove(dr as usize);
        let shift = Monomial::from_pairs([(v, dr - db)]);
        r = &(&r * &lb) - &(&lr * &b.mul_monomial(&shift));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    fn x(v: Var) -> P {
        P::var(v)
    }

    fn c(n: i64) -> P {
        P::constant(BigRational::from_integer(n.into()))
    }

    #[test]
    fn univariate() {
        let a = &(&x(0) - &c(1)) * &(&x(0) + &c(2));
        let b = &(&x(0) - &c(1)) * &(&x(0) - &c(3));
        assert_eq!(gcd(&a, &b), &x(0) - &c(1));
    }

    #[test]
    fn multivariate_common_factor() {
        let g = &(&x(0) * &x(1)) + &x(2);
        let a = &g * &(&x(0) + &x(1).pow(2));
        let b = &g * &(&x(2) - &c(7));
        assert_eq!(gcd(&a, &b), g.monic());
        assert_eq!(gcd(&a.scale(&BigRational::new(3.into(), 5.into())), &b), g.monic());
    }

    #[test]
    fn coprime_and_constants() {
        assert!(gcd(&x(0), &x(1)).is_one());
        assert!(gcd(&c(4), &x(1)).is_one());
        assert_eq!(gcd(&P::zero(), &x(1).scale(&BigRational::from_integer(3.into()))), x(1));
    }

    #[test]
    fn content_factor() {
        // x1 * (x0 + 1) * (x0 - 1) and x1^2 * (x0 + 1)
        let a = &(&x(1) * &(&x(0) + &c(1))) * &(&x(0) - &c(1));
        let b = &x(1).pow(2) * &(&x(0) + &c(1));
        assert_eq!(gcd(&a, &b), &x(1) * &(&x(0) + &c(1)));
    }
}

