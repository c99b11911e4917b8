//! Scalar abstraction shared by the exact-rational and complex-float code paths.
//!
//! Almost all of the algebra in this crate (polynomials, dense matrices,
//! tensor coefficients, equation assembly) is written once, generically over
//! [`Scalar`], and instantiated at [`Rational`] for exact verification and at
//! [`Complex64`] for the numerical solver.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, NumAssign, Signed, ToPrimitive};

/// Arbitrary-precision rational scalar (exact mode).
pub type Rational = num_rational::BigRational;

/// Double-precision complex scalar (float mode).
pub type Complex64 = num_complex::Complex<f64>;

/// Field scalar usable by the generic algebra.
pub trait Scalar:
    Num + NumAssign + Neg<Output = Self> + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
    /// True for scalars with exact arithmetic; zero tests are then algebraic
    /// instead of tolerance-based.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Complex conjugate; the identity on rationals.
    fn conjugate(&self) -> Self;

    /// |x| as f64, used for pivoting and tolerance tests. Approximate for
    /// large rationals, which only affects pivot choice, not correctness.
    fn magnitude(&self) -> f64;

    /// Zero test: exact for `EXACT` scalars, `|x| <= tol * max(scale, 1)` otherwise.
    fn is_negligible(&self, tol: f64, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol * scale.max(1.0)
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn conjugate(&self) -> Self {
        self.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Rational from integer, shorthand used all over the crate.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Rational p/q.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Reconstruct a rational from a float by continued fractions.
///
/// Returns the first convergent with denominator at most `max_den` that
/// reproduces `x` within `tol * max(1, |x|)`, or `None` if no small rational
/// is that close.
pub fn rationalize_f64(x: f64, tol: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let target = Rational::from_float(x)?;
    let bound = tol * x.abs().max(1.0);

    // Continued-fraction expansion of x with convergent tracking.
    let mut a = x.floor();
    let mut frac = x - a;
    let (mut p_prev, mut q_prev) = (BigInt::from(1), BigInt::from(0));
    let (mut p, mut q) = (BigInt::from(a as i64), BigInt::from(1));
    for _ in 0..64 {
        let cand = Rational::new(p.clone(), q.clone());
        if (cand.clone() - target.clone())
            .abs()
            .to_f64()
            .unwrap_or(f64::INFINITY)
            <= bound
        {
            return Some(cand);
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let next = 1.0 / frac;
        a = next.floor();
        frac = next - a;
        if a.abs() > 1e18 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let p_new = &ai * &p + &p_prev;
        let q_new = &ai * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_new);
        q_prev = std::mem::replace(&mut q, q_new);
        if q > BigInt::from(max_den) {
            break;
        }
    }
    None
}

/// Recognize a complex float as a real rational.
pub fn rationalize_c64(z: Complex64, tol: f64, max_den: u64) -> Option<Rational> {
    if z.im.abs() > tol * z.norm().max(1.0) {
        return None;
    }
    rationalize_f64(z.re, tol, max_den)
}
