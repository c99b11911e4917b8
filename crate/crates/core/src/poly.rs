//! Univariate polynomials over a generic [`Scalar`], dense ascending-degree
//! coefficient representation.
//!
//! Coefficient trimming only removes coefficients that are exactly zero, so
//! float-mode degrees never change silently; degree decisions under rounding
//! are made by the callers that own the tolerances.

use crate::scalar::{Complex64, Scalar};
use num_traits::One;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![S::one()],
        }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// x^d
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![S::zero(); d + 1];
        coeffs[d] = S::one();
        Polynomial { coeffs }
    }

    /// Monic product of (x - r) over the given roots.
    pub fn from_roots(roots: &[S]) -> Self {
        let mut p = Self::one();
        for r in roots {
            p = p.mul(&Polynomial::new(vec![-r.clone(), S::one()]));
        }
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> S {
        self.coeffs.get(d).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Polynomial::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * S::from_i64((i + 1) as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![S::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] = c.clone() / S::from_i64((i + 1) as i64);
        }
        Polynomial::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Long division: (quotient, remainder). Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = S::one() / divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let qlen = rem.len() - d;
        let mut quot = vec![S::zero(); qlen];
        for i in (0..qlen).rev() {
            let factor = rem[i + d].clone() * lead_inv.clone();
            quot[i] = factor.clone();
            if factor.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let upd = dc.clone() * factor.clone();
                rem[i + j] = rem[i + j].clone() - upd;
            }
        }
        rem.truncate(d);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// f'g - fg'
    pub fn wronskian(&self, other: &Self) -> Self {
        self.derivative()
            .mul(other)
            .sub(&self.mul(&other.derivative()))
    }
}

impl<S: Scalar> Polynomial<S> {
    /// Monic gcd by the Euclidean algorithm. Exact scalars only.
    pub fn gcd(&self, other: &Self) -> Self {
        assert!(S::EXACT, "polynomial gcd requires exact arithmetic");
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Mode-native test for repeated roots.
pub trait RootScalar: Scalar {
    fn has_simple_roots(p: &Polynomial<Self>) -> bool;
}

impl RootScalar for crate::scalar::Rational {
    fn has_simple_roots(p: &Polynomial<Self>) -> bool {
        p.gcd(&p.derivative()).degree() == Some(0)
    }
}

impl RootScalar for Complex64 {
    fn has_simple_roots(p: &Polynomial<Self>) -> bool {
        let roots = p.roots();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
                if (roots[i] - roots[j]).norm() <= 1e-7 * scale {
                    return false;
                }
            }
        }
        true
    }
}

impl Polynomial<Complex64> {
    /// All complex roots, Durand-Kerner iteration followed by a Newton polish
    /// of each root. Deterministic starting points, so repeated runs agree
    /// bit for bit.
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.monic();
        let deg = match p.degree() {
            None | Some(0) => return vec![],
            Some(1) => return vec![-p.coeff(0)],
            Some(d) => d,
        };
        // Cauchy bound on root magnitude.
        let radius = 1.0 + p.coeffs[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut xs: Vec<Complex64> = (0..deg)
            .map(|j| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / deg as f64 + 0.41;
                Complex64::from_polar(radius * 0.8, angle)
            })
            .collect();
        for _ in 0..500 {
            let mut max_step = 0.0f64;
            for j in 0..deg {
                let mut denom = Complex64::one();
                for l in 0..deg {
                    if l != j {
                        denom *= xs[j] - xs[l];
                    }
                }
                if denom.norm() == 0.0 {
                    // Coincident iterates: nudge deterministically.
                    xs[j] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                    continue;
                }
                let step = p.eval(&xs[j]) / denom;
                xs[j] -= step;
                max_step = max_step.max(step.norm());
            }
            if max_step < 1e-14 * radius.max(1.0) {
                break;
            }
        }
        // Newton polish against p itself; improves simple roots to full precision.
        let dp = p.derivative();
        for x in xs.iter_mut() {
            for _ in 0..4 {
                let d = dp.eval(x);
                if d.norm() == 0.0 {
                    break;
                }
                let step = p.eval(x) / d;
                if step.norm() > 0.5 * radius {
                    break;
                }
                *x -= step;
            }
        }
        xs.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        xs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, Rational};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn div_rem_exact() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let p = Polynomial::new(vec![rat(-1), rat(0), rat(1)]);
        let d = Polynomial::new(vec![rat(-1), rat(1)]);
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, Polynomial::new(vec![rat(1), rat(1)]));
    }

    #[test]
    fn wronskian_hand_values() {
        // W(x, 1) = 1, W(f, f) = 0, W(x^2, x - 1/2) = x^2 - x
        let x: Polynomial<Rational> = Polynomial::monomial(1);
        let one = Polynomial::one();
        assert_eq!(x.wronskian(&one), Polynomial::one());
        assert!(x.wronskian(&x).is_zero());
        let x2: Polynomial<Rational> = Polynomial::monomial(2);
        let lin = Polynomial::new(vec![ratio(-1, 2), rat(1)]);
        assert_eq!(
            x2.wronskian(&lin),
            Polynomial::new(vec![rat(0), rat(-1), rat(1)])
        );
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let p = Polynomial::new(vec![ratio(1, 3), rat(2), rat(0), rat(5)]);
        assert_eq!(p.antiderivative().derivative(), p);
    }

    #[test]
    fn gcd_detects_common_factor() {
        let a = Polynomial::from_roots(&[rat(1), rat(2)]);
        let b = Polynomial::from_roots(&[rat(2), rat(5)]);
        assert_eq!(a.gcd(&b), Polynomial::from_roots(&[rat(2)]));
        let coprime = Polynomial::from_roots(&[rat(3)]);
        assert_eq!(a.gcd(&coprime), Polynomial::one());
    }

    #[test]
    fn roots_recover_known_sets() {
        let roots = vec![c(0.5, 0.0), c(-1.0, 2.0), c(3.0, -1.0)];
        let p = Polynomial::from_roots(&roots);
        let found = p.roots();
        let mut expect = roots.clone();
        expect.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        for (f, e) in found.iter().zip(&expect) {
            assert!((f - e).norm() < 1e-10, "{f} vs {e}");
        }
    }

    #[test]
    fn roots_handle_scaled_input() {
        // 3x^2 - 6x + 2 has roots 1 +- 1/sqrt(3).
        let p = Polynomial::new(vec![c(2.0, 0.0), c(-6.0, 0.0), c(3.0, 0.0)]);
        let r = p.roots();
        let s3 = 3f64.sqrt();
        assert!((r[0] - c(1.0 - s3 / 3.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0 + s3 / 3.0, 0.0)).norm() < 1e-12);
    }
}
