//! Dense real polynomials in the power basis.
//!
//! Every polynomial in this crate lives on a normalized local parameter
//! `s in [0, 1]`; the piece that owns it carries the affine map back to the
//! global curve parameter.

use std::ops::{Mul, Sub};

/// `coeffs[i]` multiplies `s^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The polynomial with the given real roots and leading coefficient one.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    /// Interpolates `values` at distinct `nodes` and returns the power-basis
    /// form. Newton divided differences, then nested expansion.
    pub fn interpolate(nodes: &[f64], values: &[f64]) -> Self {
        assert_eq!(nodes.len(), values.len());
        assert!(!nodes.is_empty());
        let n = nodes.len();
        let mut dd = values.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
            }
        }
        // p(s) = dd[n-1]; p = p*(s - x_i) + dd[i] for i = n-2 .. 0
        let mut coeffs = vec![dd[n - 1]];
        for i in (0..n - 1).rev() {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= nodes[i] * c;
            }
            next[0] += dd[i];
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    /// Value and first derivative in one Horner sweep.
    #[inline]
    pub fn eval_with_derivative(&self, s: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * s + p;
            p = p * s + c;
        }
        (p, dp)
    }

    /// Compensated Horner evaluation: the result is as accurate as if the
    /// polynomial had been evaluated in twice the working precision.
    pub fn eval_compensated(&self, s: f64) -> f64 {
        let mut acc = 0.0_f64;
        let mut err = 0.0_f64;
        for &c in self.coeffs.iter().rev() {
            let (prod, prod_err) = two_product(acc, s);
            let (sum, sum_err) = two_sum(prod, c);
            acc = sum;
            err = err * s + (prod_err + sum_err);
        }
        acc + err
    }

    /// Running-error bound for plain Horner evaluation at `s`.
    pub fn eval_error_bound(&self, s: f64) -> f64 {
        let n = self.coeffs.len() as f64;
        let abs_sum = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s.abs() + c.abs());
        2.0 * n * f64::EPSILON * abs_sum
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Drops leading coefficients with `|c_n| <= eps_lead * max |c_i|`.
    pub fn deflated(&self, eps_lead: f64) -> Self {
        let threshold = eps_lead * self.norm_inf();
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1].abs() <= threshold {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Restriction to a sub-interval: returns `q(r) = p(lo + (hi - lo) r)`.
    pub fn reparametrize(&self, lo: f64, hi: f64) -> Self {
        let h = hi - lo;
        // Horner in polynomial arithmetic with the linear map lo + h r.
        let lin = Polynomial::new(vec![lo, h]);
        let mut acc = Polynomial::constant(0.0);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * &lin;
            acc.coeffs[0] += c;
        }
        Polynomial::new(acc.coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Polynomial::new((0..n).map(|i| get(&self.coeffs, i) - get(&rhs.coeffs, i)).collect())
    }
}

/// Numerator of the derivative of the quotient `num / den`:
/// `num' den - num den'`.
pub fn quotient_derivative_numerator(num: &Polynomial, den: &Polynomial) -> Polynomial {
    &(&num.derivative() * den) - &(num * &den.derivative())
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trims_zero_leading_terms() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Polynomial::new(vec![]).coeffs(), &[0.0]);
    }

    #[test]
    fn from_roots_expands() {
        let p = Polynomial::from_roots(&[1.0, 2.0]);
        assert_eq!(p.coeffs(), &[2.0, -3.0, 1.0]);
    }

    #[test]
    fn interpolation_reproduces_cubic() {
        let p = Polynomial::new(vec![0.5, -1.0, 3.0, 2.0]);
        let nodes = [0.1, 0.4, 0.7, 0.95];
        let vals: Vec<f64> = nodes.iter().map(|&s| p.eval(s)).collect();
        let q = Polynomial::interpolate(&nodes, &vals);
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_and_combined_eval_agree() {
        let p = Polynomial::new(vec![1.0, -2.0, 0.5, 4.0]);
        let d = p.derivative();
        for s in [0.0, 0.3, 1.0, -2.0] {
            let (v, dv) = p.eval_with_derivative(s);
            assert_relative_eq!(v, p.eval(s), epsilon = 1e-14);
            assert_relative_eq!(dv, d.eval(s), epsilon = 1e-13);
        }
    }

    #[test]
    fn compensated_eval_beats_cancellation() {
        // (s - 1)^7 near its root: plain Horner is dominated by rounding.
        let p = Polynomial::from_roots(&[1.0; 7]);
        let s = 1.0 + 1e-3;
        assert_relative_eq!(p.eval_compensated(s), 1e-21, max_relative = 1e-6);
    }

    #[test]
    fn reparametrize_matches_composition() {
        let p = Polynomial::new(vec![0.2, 1.0, -3.0, 0.7]);
        let q = p.reparametrize(0.25, 0.75);
        for r in [0.0, 0.1, 0.5, 1.0] {
            assert_relative_eq!(q.eval(r), p.eval(0.25 + 0.5 * r), epsilon = 1e-14);
        }
    }

    #[test]
    fn quotient_derivative_sign() {
        // x(s) = s^2 / 1 -> numerator 2s
        let num = Polynomial::new(vec![0.0, 0.0, 1.0]);
        let den = Polynomial::constant(1.0);
        assert_eq!(quotient_derivative_numerator(&num, &den).coeffs(), &[0.0, 2.0]);
    }
}
