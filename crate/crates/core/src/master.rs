//! The master function side: logarithmic gradient (Bethe equations), the
//! Hessian of its logarithm, symmetric coordinates, orbit canonicalization,
//! the regime classifier, and the exact two-point closed form.
//!
//! The function itself is never exponentiated; every quantity used downstream
//! depends only on log-derivatives, which stay finite away from the
//! arrangement of diagonal hyperplanes t_i = z_l, t_i = t_j.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::rep::{multiplicity_w, ExponentVector};
use crate::scalar::{rat, Complex64, Rational, Scalar};

/// The (m, k, z) triple every computation consumes. Zero weights are
/// stripped together with their marker points at construction; the remaining
/// weights are positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub m: Vec<u32>,
    pub k: usize,
    pub z: Vec<Complex64>,
}

impl ProblemInstance {
    pub fn new(m_raw: &[u32], k: usize, z_raw: &[Complex64]) -> Result<Self> {
        if m_raw.len() != z_raw.len() {
            return Err(Error::Domain(format!(
                "{} weights but {} marker points",
                m_raw.len(),
                z_raw.len()
            )));
        }
        let mut m = Vec::new();
        let mut z = Vec::new();
        for (&ml, &zl) in m_raw.iter().zip(z_raw) {
            if ml > 0 {
                m.push(ml);
                z.push(zl);
            }
        }
        if m.is_empty() {
            return Err(Error::Domain("all weights are zero".into()));
        }
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                if z[i] == z[j] {
                    return Err(Error::CoincidentPoints { i, j });
                }
            }
        }
        Ok(ProblemInstance { m, k, z })
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// l(m), the total weight.
    pub fn l(&self) -> i64 {
        self.m.iter().map(|&x| x as i64).sum()
    }

    pub fn exponent_vector(&self) -> ExponentVector {
        ExponentVector::from_integers(&self.m.iter().map(|&x| x as i64).collect::<Vec<_>>())
    }

    /// Degree of the dual variable count, l(m) + 1 - k.
    pub fn dual_k(&self) -> i64 {
        self.l() + 1 - self.k as i64
    }
}

/// Relative arrangement margin: defaults used across the solver.
pub const ARRANGEMENT_MARGIN_REL: f64 = 1e-8;

fn diameter(t: &[Complex64], z: &[Complex64]) -> f64 {
    let all: Vec<Complex64> = t.iter().chain(z).copied().collect();
    let mut d = 0.0f64;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            d = d.max((all[i] - all[j]).norm());
        }
    }
    d.max(1.0)
}

/// Distance from t to the arrangement, with the offending pair on failure.
/// The margin scales with the diameter of z together with t.
pub fn arrangement_check(t: &[Complex64], z: &[Complex64], margin_rel: f64) -> Result<f64> {
    let margin = margin_rel * diameter(t, z);
    let mut min = f64::INFINITY;
    for (i, ti) in t.iter().enumerate() {
        for (l, zl) in z.iter().enumerate() {
            let d = (ti - zl).norm();
            if d < margin {
                return Err(Error::Arrangement(format!(
                    "t[{i}] within {d:.3e} of z[{l}]"
                )));
            }
            min = min.min(d);
        }
        for (j, tj) in t.iter().enumerate().skip(i + 1) {
            let d = (ti - tj).norm();
            if d < margin {
                return Err(Error::Arrangement(format!(
                    "t[{i}] within {d:.3e} of t[{j}]"
                )));
            }
            min = min.min(d);
        }
    }
    Ok(min)
}

/// Logarithmic gradient of the master function:
/// r_i = sum_l (-m_l)/(t_i - z_l) + sum_{j != i} 2/(t_i - t_j).
/// Vanishes exactly at critical points.
pub fn bethe_residual(t: &[Complex64], inst: &ProblemInstance) -> Result<Vec<Complex64>> {
    arrangement_check(t, &inst.z, ARRANGEMENT_MARGIN_REL)?;
    Ok(bethe_residual_unchecked(t, inst))
}

pub(crate) fn bethe_residual_unchecked(t: &[Complex64], inst: &ProblemInstance) -> Vec<Complex64> {
    // Summands are sorted before adding: the residual then permutes exactly
    // with the coordinates and is bit-stable across runs.
    (0..t.len())
        .map(|i| {
            let mut terms = Vec::with_capacity(inst.n() + t.len());
            for (l, zl) in inst.z.iter().enumerate() {
                terms.push(-Complex64::new(inst.m[l] as f64, 0.0) / (t[i] - zl));
            }
            for (j, tj) in t.iter().enumerate() {
                if j != i {
                    terms.push(Complex64::new(2.0, 0.0) / (t[i] - tj));
                }
            }
            terms.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            terms.into_iter().sum()
        })
        .collect()
}

/// Magnitude scale of the residual terms, used to make residual norms
/// relative: sum of the absolute values of every summand, maximized over i.
pub fn residual_scale(t: &[Complex64], inst: &ProblemInstance) -> f64 {
    let mut scale = 0.0f64;
    for (i, ti) in t.iter().enumerate() {
        let mut acc = 0.0;
        for (l, zl) in inst.z.iter().enumerate() {
            acc += inst.m[l] as f64 / (ti - zl).norm();
        }
        for (j, tj) in t.iter().enumerate() {
            if j != i {
                acc += 2.0 / (ti - tj).norm();
            }
        }
        scale = scale.max(acc);
    }
    scale.max(1.0)
}

/// max_i |r_i| / scale: the residual norm reported everywhere.
pub fn relative_residual(t: &[Complex64], inst: &ProblemInstance) -> Result<f64> {
    let r = bethe_residual(t, inst)?;
    let norm = r.iter().map(|x| x.norm()).fold(0.0, f64::max);
    Ok(norm / residual_scale(t, inst))
}

/// Hessian of ln of the master function; also the Jacobian of the residual.
/// Diagonal: sum_l m_l/(t_i - z_l)^2 - sum_{j != i} 2/(t_i - t_j)^2;
/// off-diagonal (i, j): 2/(t_i - t_j)^2.
pub fn hessian_ln_phi(t: &[Complex64], inst: &ProblemInstance) -> Result<Matrix<Complex64>> {
    arrangement_check(t, &inst.z, ARRANGEMENT_MARGIN_REL)?;
    let k = t.len();
    let mut h = Matrix::zeros(k, k);
    for i in 0..k {
        let mut diag = Complex64::zero();
        for (l, zl) in inst.z.iter().enumerate() {
            let d = t[i] - zl;
            diag += Complex64::new(inst.m[l] as f64, 0.0) / (d * d);
        }
        for j in 0..k {
            if j == i {
                continue;
            }
            let d = t[i] - t[j];
            let coupling = Complex64::new(2.0, 0.0) / (d * d);
            diag -= coupling;
            h[(i, j)] = coupling;
        }
        h[(i, i)] = diag;
    }
    Ok(h)
}

/// Natural size of the log-Hessian determinant: the Hadamard bound of the
/// matrix of absolute values of the individual summands. Cancellations make
/// the true determinant smaller; a determinant tiny against this scale
/// signals a degenerate critical point.
pub fn hessian_det_scale(t: &[Complex64], inst: &ProblemInstance) -> f64 {
    let k = t.len();
    let mut abs = vec![vec![0.0f64; k]; k];
    for i in 0..k {
        for (l, zl) in inst.z.iter().enumerate() {
            abs[i][i] += inst.m[l] as f64 / (t[i] - zl).norm().powi(2);
        }
        for j in 0..k {
            if j != i {
                let coupling = 2.0 / (t[i] - t[j]).norm().powi(2);
                abs[i][i] += coupling;
                abs[i][j] = coupling;
            }
        }
    }
    (0..k)
        .map(|i| abs[i].iter().map(|x| x * x).sum::<f64>().sqrt())
        .product::<f64>()
        .max(f64::MIN_POSITIVE)
}

/// ln |master function| as a real function; safe to evaluate since only
/// absolute values enter.
pub fn log_abs_phi(t: &[Complex64], inst: &ProblemInstance) -> f64 {
    let mut acc = 0.0;
    for ti in t {
        for (l, zl) in inst.z.iter().enumerate() {
            acc -= inst.m[l] as f64 * (ti - zl).norm().ln();
        }
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            acc += 2.0 * (t[i] - t[j]).norm().ln();
        }
    }
    acc
}

/// Elementary symmetric functions lambda_1 = sum t_i, ..., lambda_k = prod t_i.
pub fn elementary_symmetric<S: Scalar>(t: &[S]) -> Vec<S> {
    let mut e = vec![S::zero(); t.len() + 1];
    e[0] = S::one();
    for (i, ti) in t.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            let upd = ti.clone() * e[j - 1].clone();
            e[j] = e[j].clone() + upd;
        }
    }
    e.remove(0);
    e
}

/// Monic polynomial with the given symmetric coordinates:
/// x^k - l_1 x^{k-1} + l_2 x^{k-2} - ...
pub fn monic_from_lambda<S: Scalar>(lambda: &[S]) -> Polynomial<S> {
    let k = lambda.len();
    let mut coeffs = vec![S::zero(); k + 1];
    coeffs[k] = S::one();
    for (i, l) in lambda.iter().enumerate() {
        let sign = if (i + 1) % 2 == 0 {
            S::one()
        } else {
            -S::one()
        };
        coeffs[k - (i + 1)] = sign * l.clone();
    }
    Polynomial::new(coeffs)
}

/// A refined critical point with its diagnostics.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    /// Canonical (sorted) coordinates.
    pub t: Vec<Complex64>,
    /// Relative residual norm at t.
    pub residual: f64,
    /// Determinant of the log-Hessian at t.
    pub hessian_det: Complex64,
    /// Elementary symmetric functions of t, the orbit invariant.
    pub lambda: Vec<Complex64>,
}

fn sort_key(c: &Complex64) -> (f64, f64) {
    (c.re, c.im)
}

/// Canonical representative of the symmetric-group orbit: coordinates sorted
/// by (real, imaginary); the symmetric coordinates are attached since they
/// are the true orbit invariant.
pub fn canonical_orbit(t: &[Complex64], inst: &ProblemInstance) -> Result<CriticalPoint> {
    let mut sorted = t.to_vec();
    sorted.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    let residual = relative_residual(&sorted, inst)?;
    let hessian_det = hessian_ln_phi(&sorted, inst)?.determinant();
    let lambda = elementary_symmetric(&sorted);
    Ok(CriticalPoint {
        t: sorted,
        residual,
        hessian_det,
        lambda,
    })
}

/// Relative max-norm distance between two orbits in symmetric coordinates.
pub fn lambda_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = a.iter().chain(b).map(|x| x.norm()).fold(1.0f64, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// The four regimes of the critical set, a function of (l(m), k) alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    /// l(m) + 1 - k > k: finitely many nondegenerate orbits for generic z.
    IsolatedPoints,
    /// l(m) + 1 - k = k: no critical points for any z.
    NoCriticalEqualExponents,
    /// 0 <= l(m) + 1 - k < k: straight lines in symmetric coordinates.
    CriticalLines,
    /// l(m) + 1 - k < 0: no critical points for any z.
    NoCriticalNegativeDual,
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegimeKind::IsolatedPoints => "isolated-points",
            RegimeKind::NoCriticalEqualExponents => "no-critical-equal-exponents",
            RegimeKind::CriticalLines => "critical-lines",
            RegimeKind::NoCriticalNegativeDual => "no-critical-negative-dual",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeLabel {
    pub kind: RegimeKind,
    /// Expected number of orbits (isolated regime) or lines (line regime).
    pub expected: i64,
}

pub fn classify_regime(m: &[u32], k: usize) -> RegimeLabel {
    let l: i64 = m.iter().map(|&x| x as i64).sum();
    let k = k as i64;
    let dual = l + 1 - k;
    if dual > k {
        RegimeLabel {
            kind: RegimeKind::IsolatedPoints,
            expected: multiplicity_w(m, k).expect("k >= 0"),
        }
    } else if dual == k {
        RegimeLabel {
            kind: RegimeKind::NoCriticalEqualExponents,
            expected: 0,
        }
    } else if dual >= 0 {
        RegimeLabel {
            kind: RegimeKind::CriticalLines,
            expected: multiplicity_w(m, dual).expect("dual >= 0"),
        }
    } else {
        RegimeLabel {
            kind: RegimeKind::NoCriticalNegativeDual,
            expected: 0,
        }
    }
}

/// Outcome of the exact two-point solve at z = (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub enum N2Solution {
    /// Unique solution defining k! honest critical points.
    Unique { lambda: Vec<Rational> },
    /// Unique solution whose points lie in the arrangement: a root at 0 or 1,
    /// or a multiple root. No critical points.
    OnArrangement { lambda: Vec<Rational> },
    /// Rank k-1: the solutions form a line base + c * direction.
    Line {
        base: Vec<Rational>,
        direction: Vec<Rational>,
    },
    /// The linear system has no solution; no critical points.
    Inconsistent,
}

/// Exact solve of the two-point critical system in symmetric coordinates:
/// for p = 0..k-1,
///   (p+1)(p - m1) lambda_{k-p-1} = (k-p)(k+p-1 - m1 - m2) lambda_{k-p},
/// with lambda_0 = 1. Callers with z != (0, 1) transport the roots through
/// t -> z1 + (z2 - z1) t.
pub fn n2_closed_form(m1: &Rational, m2: &Rational, k: usize) -> N2Solution {
    assert!(k >= 1);
    // Unknowns lambda_1..lambda_k (stored 0-based); k equations, exact
    // rational elimination. Equation p reads
    //   lhs_coeff * lambda_{k-p-1} - rhs_coeff * lambda_{k-p} = 0,
    // and lambda_0 = 1 moves a constant to the right-hand side.
    let mut aug = Matrix::<Rational>::zeros(k, k + 1);
    for p in 0..k as i64 {
        let ka = k as i64;
        let r = p as usize;
        let lhs_coeff = rat(p + 1) * (rat(p) - m1.clone());
        let rhs_coeff = rat(ka - p) * (rat(ka + p - 1) - m1.clone() - m2.clone());
        let low = ka - p - 1; // lambda index of the lhs term
        if low == 0 {
            aug[(r, k)] = -lhs_coeff;
        } else {
            aug[(r, (low - 1) as usize)] = lhs_coeff;
        }
        let high = (ka - p - 1) as usize; // 0-based slot of lambda_{k-p}
        aug[(r, high)] = aug[(r, high)].clone() - rhs_coeff;
    }
    // Row reduce, watching consistency.
    let mut pivot_cols = Vec::new();
    let mut lead = 0usize;
    for col in 0..k {
        let Some(pr) = (lead..k).find(|&r| !aug[(r, col)].is_zero()) else {
            continue;
        };
        for c in 0..=k {
            let tmp = aug[(pr, c)].clone();
            aug[(pr, c)] = aug[(lead, c)].clone();
            aug[(lead, c)] = tmp;
        }
        let inv = Rational::one() / aug[(lead, col)].clone();
        for c in col..=k {
            aug[(lead, c)] = aug[(lead, c)].clone() * inv.clone();
        }
        for r in 0..k {
            if r != lead && !aug[(r, col)].is_zero() {
                let f = aug[(r, col)].clone();
                for c in col..=k {
                    let upd = aug[(lead, c)].clone() * f.clone();
                    aug[(r, c)] = aug[(r, c)].clone() - upd;
                }
            }
        }
        pivot_cols.push(col);
        lead += 1;
        if lead == k {
            break;
        }
    }
    // Inconsistent row: 0 = nonzero.
    for r in lead..k {
        if !aug[(r, k)].is_zero() {
            return N2Solution::Inconsistent;
        }
    }
    let rank = pivot_cols.len();
    if rank == k {
        let mut lambda = vec![Rational::zero(); k];
        for (row, &col) in pivot_cols.iter().enumerate() {
            lambda[col] = aug[(row, k)].clone();
        }
        // Arrangement test, exact: a root at 0 (lambda_k = 0), a root at 1
        // (u(1) = 0), or a multiple root (gcd(u, u') nonconstant).
        let u = monic_from_lambda(&lambda);
        let at_zero = lambda[k - 1].is_zero();
        let at_one = u.eval(&rat(1)).is_zero();
        let multiple = u.gcd(&u.derivative()).degree().unwrap_or(0) > 0;
        if at_zero || at_one || multiple {
            N2Solution::OnArrangement { lambda }
        } else {
            N2Solution::Unique { lambda }
        }
    } else if rank == k - 1 {
        // One free column: base with free coordinate 0, direction spanning
        // the kernel.
        let free = (0..k).find(|c| !pivot_cols.contains(c)).unwrap();
        let mut base = vec![Rational::zero(); k];
        let mut dir = vec![Rational::zero(); k];
        dir[free] = Rational::one();
        for (row, &col) in pivot_cols.iter().enumerate() {
            base[col] = aug[(row, k)].clone();
            dir[col] = -aug[(row, free)].clone();
        }
        N2Solution::Line {
            base,
            direction: dir,
        }
    } else {
        // Rank below k-1 never occurs for the bidiagonal system.
        N2Solution::Inconsistent
    }
}

/// Reproducible generic configuration: points drawn uniformly from the
/// square [-1, 1]^2, redrawn until all pairwise distances exceed 0.1.
pub fn generic_configuration(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'outer: for _ in 0..10_000 {
        let pts: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                if (pts[i] - pts[j]).norm() <= 0.1 {
                    continue 'outer;
                }
            }
        }
        return pts;
    }
    panic!("could not place {n} points with pairwise distance > 0.1");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn inst(m: &[u32], k: usize, z: &[f64]) -> ProblemInstance {
        let zc: Vec<Complex64> = z.iter().map(|&x| c(x, 0.0)).collect();
        ProblemInstance::new(m, k, &zc).unwrap()
    }

    #[test]
    fn zero_weights_are_stripped_with_their_points() {
        let z = [c(0.0, 0.0), c(5.0, 0.0), c(1.0, 0.0)];
        let p = ProblemInstance::new(&[1, 0, 2], 1, &z).unwrap();
        assert_eq!(p.m, vec![1, 2]);
        assert_eq!(p.z, vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(ProblemInstance::new(&[0, 0], 1, &[c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(ProblemInstance::new(&[1, 1], 1, &[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn residual_hand_values() {
        let p = inst(&[1, 1], 1, &[0.0, 1.0]);
        let r = bethe_residual(&[c(0.5, 0.0)], &p).unwrap();
        assert!(r[0].norm() < 1e-15, "midpoint is critical");
        let r = bethe_residual(&[c(0.25, 0.0)], &p).unwrap();
        assert!((r[0] - c(-8.0 / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn residual_vanishes_on_quadratic_roots() {
        // Three weight-one points at (0, 1, c): critical points are roots of
        // 3x^2 - 2(c+1)x + c.
        for cc in [2.0, -0.7, 3.25] {
            let p = inst(&[1, 1, 1], 1, &[0.0, 1.0, cc]);
            let disc = ((cc + 1.0) * (cc + 1.0) - 3.0 * cc).sqrt();
            for root in [(cc + 1.0 + disc) / 3.0, (cc + 1.0 - disc) / 3.0] {
                let r = bethe_residual(&[c(root, 0.0)], &p).unwrap();
                assert!(r[0].norm() < 1e-12, "c={cc} root={root}");
            }
        }
    }

    #[test]
    fn hessian_hand_values() {
        let p = inst(&[1, 1], 1, &[0.0, 1.0]);
        let h = hessian_ln_phi(&[c(0.5, 0.0)], &p).unwrap();
        assert!((h[(0, 0)] - c(8.0, 0.0)).norm() < 1e-12);
        let p2 = inst(&[1, 1], 2, &[0.0, 10.0]);
        let h2 = hessian_ln_phi(&[c(0.3, 0.0), c(0.7, 0.0)], &p2).unwrap();
        assert!((h2[(0, 1)] - c(12.5, 0.0)).norm() < 1e-12);
        assert!((h2[(1, 0)] - c(12.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // Central differences of ln|Phi| against the residual: д/дx = Re r,
        // д/дy = -Im r, at random safe points.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = inst(&[2, 1, 3], 2, &[0.0, 1.0, -0.5]);
        let h = 1e-6;
        let mut checked = 0;
        while checked < 100 {
            let t: Vec<Complex64> = (0..2)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            if arrangement_check(&t, &p.z, 1e-2).is_err() {
                continue;
            }
            let r = bethe_residual(&t, &p).unwrap();
            for i in 0..2 {
                let mut tp = t.clone();
                let mut tm = t.clone();
                tp[i] += c(h, 0.0);
                tm[i] -= c(h, 0.0);
                let dx = (log_abs_phi(&tp, &p) - log_abs_phi(&tm, &p)) / (2.0 * h);
                assert!(
                    (dx - r[i].re).abs() < 1e-5,
                    "d/dx mismatch: {dx} vs {}",
                    r[i].re
                );
                let mut tp = t.clone();
                let mut tm = t.clone();
                tp[i] += c(0.0, h);
                tm[i] -= c(0.0, h);
                let dy = (log_abs_phi(&tp, &p) - log_abs_phi(&tm, &p)) / (2.0 * h);
                assert!((dy + r[i].im).abs() < 1e-5);
            }
            checked += 1;
        }
    }

    #[test]
    fn hessian_matches_residual_jacobian() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = inst(&[1, 2], 3, &[0.0, 1.0]);
        let h = 1e-6;
        let mut checked = 0;
        while checked < 100 {
            let t: Vec<Complex64> = (0..3)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            if arrangement_check(&t, &p.z, 1e-2).is_err() {
                continue;
            }
            let hess = hessian_ln_phi(&t, &p).unwrap();
            for j in 0..3 {
                let mut tp = t.clone();
                let mut tm = t.clone();
                tp[j] += c(h, 0.0);
                tm[j] -= c(h, 0.0);
                let rp = bethe_residual_unchecked(&tp, &p);
                let rm = bethe_residual_unchecked(&tm, &p);
                for i in 0..3 {
                    let fd = (rp[i] - rm[i]) / c(2.0 * h, 0.0);
                    assert!(
                        (fd - hess[(i, j)]).norm() < 1e-5 * (1.0 + hess[(i, j)].norm()),
                        "entry ({i},{j})"
                    );
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn symmetric_group_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = inst(&[1, 1, 2], 4, &[0.0, 1.0, 2.0]);
        for _ in 0..20 {
            let t: Vec<Complex64> = (0..4)
                .map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(0.2..3.0)))
                .collect();
            if arrangement_check(&t, &p.z, 1e-3).is_err() {
                continue;
            }
            let r = bethe_residual(&t, &p).unwrap();
            // Apply a random permutation.
            let mut perm: Vec<usize> = (0..4).collect();
            for i in (1..4).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let tp: Vec<Complex64> = perm.iter().map(|&i| t[i]).collect();
            let rp = bethe_residual(&tp, &p).unwrap();
            for (slot, &src) in perm.iter().enumerate() {
                assert_eq!(rp[slot], r[src], "residual must permute exactly");
            }
        }
    }

    #[test]
    fn elementary_symmetric_hand_values() {
        assert_eq!(
            elementary_symmetric(&[rat(2), rat(3)]),
            vec![rat(5), rat(6)]
        );
        assert_eq!(
            elementary_symmetric(&[rat(1), rat(1), rat(1)]),
            vec![rat(3), rat(3), rat(1)]
        );
    }

    #[test]
    fn canonical_orbit_sorts_and_dedups() {
        let p = inst(&[1, 1], 2, &[0.0, 10.0]);
        let a = canonical_orbit(&[c(0.7, 0.0), c(0.3, 0.0)], &p).unwrap();
        assert_eq!(a.t, vec![c(0.3, 0.0), c(0.7, 0.0)]);
        let b = canonical_orbit(&[c(0.3, 0.0), c(0.7, 0.0)], &p).unwrap();
        assert!(lambda_distance(&a.lambda, &b.lambda) == 0.0);
        // Near-duplicates merge under the dedup metric.
        let c1 = canonical_orbit(&[c(0.3 + 1e-10, 0.0), c(0.7, 0.0)], &p).unwrap();
        assert!(lambda_distance(&a.lambda, &c1.lambda) < 1e-9);
    }

    #[test]
    fn regime_classification() {
        let r = classify_regime(&[1, 1, 1], 1);
        assert_eq!(r.kind, RegimeKind::IsolatedPoints);
        assert_eq!(r.expected, 2);
        assert_eq!(
            classify_regime(&[1, 1, 1], 2).kind,
            RegimeKind::NoCriticalEqualExponents
        );
        assert_eq!(
            classify_regime(&[1, 1], 4).kind,
            RegimeKind::NoCriticalNegativeDual
        );
        let lines = classify_regime(&[1, 1, 1], 3);
        assert_eq!(lines.kind, RegimeKind::CriticalLines);
        assert_eq!(lines.expected, 2);
        // Isolated points whenever l - 2k > -2: never the line regime.
        for l in 1..12i64 {
            for k in 1..12i64 {
                if l - 2 * k > -2 {
                    let m: Vec<u32> = vec![1; l as usize];
                    assert_ne!(
                        classify_regime(&m, k as usize).kind,
                        RegimeKind::CriticalLines
                    );
                }
            }
        }
    }

    #[test]
    fn n2_unique_cases() {
        match n2_closed_form(&rat(1), &rat(1), 1) {
            N2Solution::Unique { lambda } => assert_eq!(lambda, vec![ratio(1, 2)]),
            other => panic!("expected unique, got {other:?}"),
        }
        match n2_closed_form(&rat(2), &rat(2), 2) {
            N2Solution::Unique { lambda } => assert_eq!(lambda, vec![rat(1), ratio(1, 3)]),
            other => panic!("expected unique, got {other:?}"),
        }
        // General weights: lambda_1 = m1/(m1+m2).
        match n2_closed_form(&rat(2), &rat(1), 1) {
            N2Solution::Unique { lambda } => assert_eq!(lambda, vec![ratio(2, 3)]),
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn n2_line_case() {
        // Both weights below k: rank k-1 and a line of solutions.
        match n2_closed_form(&rat(1), &rat(1), 2) {
            N2Solution::Line { base, direction } => {
                // The solutions satisfy lambda_1 = 2 lambda_2.
                let l1 = base[0].clone() + direction[0].clone();
                let l2 = base[1].clone() + direction[1].clone();
                assert_eq!(l1, rat(2) * l2);
                let l1 = base[0].clone();
                let l2 = base[1].clone();
                assert_eq!(l1, rat(2) * l2);
            }
            other => panic!("expected line, got {other:?}"),
        }
    }

    #[test]
    fn n2_arrangement_cases() {
        // k exceeding exactly one weight: solution pinned to the arrangement.
        match n2_closed_form(&rat(2), &rat(1), 2) {
            N2Solution::OnArrangement { lambda } => {
                // u = (x-1)^2: double root at the second marker point.
                assert_eq!(lambda, vec![rat(2), rat(1)]);
            }
            other => panic!("expected arrangement, got {other:?}"),
        }
        // k above the total weight plus one.
        match n2_closed_form(&rat(1), &rat(1), 4) {
            N2Solution::OnArrangement { lambda } => {
                assert_eq!(lambda, vec![rat(2), rat(1), rat(0), rat(0)]);
            }
            other => panic!("expected arrangement, got {other:?}"),
        }
        // The equal-exponent case lands on the arrangement exactly.
        match n2_closed_form(&rat(1), &rat(2), 2) {
            N2Solution::OnArrangement { lambda } => {
                assert_eq!(lambda, vec![rat(0), rat(0)]);
            }
            other => panic!("expected arrangement, got {other:?}"),
        }
        // Some one-weight-exceeded instances are outright inconsistent.
        match n2_closed_form(&rat(1), &rat(4), 4) {
            N2Solution::Inconsistent => {}
            other => panic!("expected inconsistent, got {other:?}"),
        }
    }

    #[test]
    fn generic_configuration_is_reproducible_and_spread() {
        let a = generic_configuration(7, 4);
        let b = generic_configuration(7, 4);
        assert_eq!(a, b);
        for i in 0..4 {
            for j in i + 1..4 {
                assert!((a[i] - a[j]).norm() > 0.1);
            }
        }
        assert_ne!(generic_configuration(8, 4), a);
    }
}
