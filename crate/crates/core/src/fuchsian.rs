//! Second-order equations F u'' + G u' + H u = 0 with polynomial
//! coefficients: construction from a configuration, the equation associated
//! with a critical point, polynomial solution spaces, local exponents, and
//! the enumerative dictionary for equations with only univalued solutions.

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, NullspaceScalar};
use crate::poly::{Polynomial, RootScalar};
use crate::rep::multiplicity_w;
use crate::scalar::{Complex64, Scalar};

/// Relative tolerance for float-mode polynomial division remainders.
pub const DIVISION_TOL: f64 = 1e-8;
/// Relative singular-value threshold for float-mode rank decisions.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianEquation<S: Scalar> {
    pub f: Polynomial<S>,
    pub g: Polynomial<S>,
    pub h: Polynomial<S>,
    /// Singular points (provenance).
    pub z: Vec<S>,
    /// Weights at the singular points (provenance).
    pub m: Vec<u32>,
    /// Degree of the polynomial solution the equation was built around.
    pub k: usize,
}

impl<S: Scalar> FuchsianEquation<S> {
    /// F u'' + G u' + H u.
    pub fn apply(&self, u: &Polynomial<S>) -> Polynomial<S> {
        let mut out = self.f.mul(&u.derivative().derivative());
        out = out.add(&self.g.mul(&u.derivative()));
        out.add(&self.h.mul(u))
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn total_weight(&self) -> i64 {
        self.m.iter().map(|&x| x as i64).sum()
    }
}

/// F = prod (x - z_j) and the G with G/F = sum -m_j/(x - z_j).
pub fn build_fg<S: Scalar>(z: &[S], m: &[u32]) -> Result<(Polynomial<S>, Polynomial<S>)> {
    if z.len() != m.len() {
        return Err(Error::Domain(format!(
            "{} points vs {} weights",
            z.len(),
            m.len()
        )));
    }
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if z[i] == z[j] {
                return Err(Error::CoincidentPoints { i, j });
            }
        }
    }
    let f = Polynomial::from_roots(z);
    let mut g = Polynomial::zero();
    for (j, _zj) in z.iter().enumerate() {
        let others: Vec<S> = z
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != j)
            .map(|(_, v)| v.clone())
            .collect();
        let partial = Polynomial::from_roots(&others).scale(&S::from_i64(-(m[j] as i64)));
        g = g.add(&partial);
    }
    Ok((f, g))
}

/// The equation with prescribed polynomial solution `u`:
/// H = -(F u'' + G u') / u, which divides exactly iff the roots of u are a
/// critical point. Float mode accepts a relative remainder below `tol`.
pub fn associated_equation_from_poly<S: Scalar>(
    u: &Polynomial<S>,
    z: &[S],
    m: &[u32],
    tol: f64,
) -> Result<FuchsianEquation<S>> {
    let (f, g) = build_fg(z, m)?;
    let numerator = f
        .mul(&u.derivative().derivative())
        .add(&g.mul(&u.derivative()))
        .neg();
    let (h, rem) = numerator.div_rem(u);
    let scale = numerator.max_coeff_magnitude().max(1.0);
    let rem_norm = rem.max_coeff_magnitude() / scale;
    let ok = if S::EXACT {
        rem.is_zero()
    } else {
        rem_norm <= tol
    };
    if !ok {
        return Err(Error::NotCritical {
            remainder: rem_norm,
            tol,
        });
    }
    let k = u.degree().unwrap_or(0);
    Ok(FuchsianEquation {
        f,
        g,
        h,
        z: z.to_vec(),
        m: m.to_vec(),
        k,
    })
}

/// Float entry point from a critical point's coordinates.
pub fn associated_equation(
    t0: &[Complex64],
    z: &[Complex64],
    m: &[u32],
    tol: f64,
) -> Result<FuchsianEquation<Complex64>> {
    for (i, ti) in t0.iter().enumerate() {
        for (l, zl) in z.iter().enumerate() {
            if (ti - zl).norm() == 0.0 {
                return Err(Error::Arrangement(format!("t[{i}] equals z[{l}]")));
            }
        }
        for (j, tj) in t0.iter().enumerate().skip(i + 1) {
            if (ti - tj).norm() == 0.0 {
                return Err(Error::Arrangement(format!("t[{i}] equals t[{j}]")));
            }
        }
    }
    associated_equation_from_poly(&Polynomial::from_roots(t0), z, m, tol)
}

/// Roots of r^2 + (p0 - 1) r + q0 = 0, ordered by (real, imaginary) part.
pub fn indicial_roots(p0: Complex64, q0: Complex64) -> (Complex64, Complex64) {
    let b = p0 - Complex64::one();
    let disc = (b * b - Complex64::new(4.0, 0.0) * q0).sqrt();
    let half = Complex64::new(0.5, 0.0);
    let r1 = (-b - disc) * half;
    let r2 = (-b + disc) * half;
    if (r1.re, r1.im) <= (r2.re, r2.im) {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Exponent table of an equation built from (M)-form data: (0, m_j + 1) at
/// each finite singular point and (-k, k - l(m) - 1) at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTable<S> {
    pub finite: Vec<(S, S)>,
    pub infinity: (S, S),
}

/// Derive the exponents from the equation's local data and verify they match
/// the structural table; the match at infinity pins the top coefficient of H.
pub fn exponents<S: Scalar>(e: &FuchsianEquation<S>) -> Result<ExponentTable<S>> {
    let n = e.n();
    let l = e.total_weight();
    let fp = e.f.derivative();
    let mut finite = Vec::with_capacity(n);
    for (j, zj) in e.z.iter().enumerate() {
        // p0 = residue of G/F at z_j; the indicial roots there are 0, 1 - p0.
        let p0 = e.g.eval(zj) / fp.eval(zj);
        let expected = -S::from_i64(e.m[j] as i64);
        let diff = p0.clone() - expected;
        if !diff.is_negligible(1e-6, 1.0 + p0.magnitude()) {
            return Err(Error::Verification(format!(
                "residue at z[{j}] is {p0}, expected -{}",
                e.m[j]
            )));
        }
        finite.push((S::zero(), S::from_i64(e.m[j] as i64 + 1)));
    }
    // At infinity the indicial equation is r^2 + (1 + l) r + q2 = 0 with
    // q2 the degree-(n-2) coefficient of H (F is monic). The candidate pair
    // (-k, k - l - 1) has the right sum; its product pins q2 = k(l + 1 - k).
    let k = e.k as i64;
    let q2 = e.h.coeff(n.saturating_sub(2));
    let expected_q2 = S::from_i64(k * (l + 1 - k));
    let scale = e.h.max_coeff_magnitude().max(e.f.max_coeff_magnitude());
    let diff = q2.clone() - expected_q2;
    if !diff.is_negligible(1e-6, scale) {
        return Err(Error::Verification(format!(
            "infinity exponents mismatch: H leading coefficient {q2}, expected {}",
            k * (l + 1 - k)
        )));
    }
    let infinity = (S::from_i64(-k), S::from_i64(k - l - 1));
    // Fuchs relation: all exponents sum to n - 1 (an identity for this table).
    let sum: i64 = e.m.iter().map(|&mj| mj as i64 + 1).sum::<i64>() + (-k) + (k - l - 1);
    debug_assert_eq!(sum, n as i64 - 1);
    Ok(ExponentTable { finite, infinity })
}

/// Basis of polynomial solutions of degree at most `d`: the kernel of the
/// linear map on coefficient vectors. Exact kernel in rational mode,
/// singular-value thresholded in float mode.
pub fn polynomial_solutions<S: NullspaceScalar>(
    e: &FuchsianEquation<S>,
    d: usize,
) -> Vec<Polynomial<S>> {
    let columns: Vec<Polynomial<S>> = (0..=d).map(|j| e.apply(&Polynomial::monomial(j))).collect();
    let rows = columns
        .iter()
        .map(|p| p.coeffs().len())
        .max()
        .unwrap_or(0)
        .max(1);
    let mut mat = Matrix::<S>::zeros(rows, d + 1);
    for (j, image) in columns.iter().enumerate() {
        for (i, c) in image.coeffs().iter().enumerate() {
            mat[(i, j)] = c.clone();
        }
    }
    S::nullspace(&mat, RANK_TOL)
        .into_iter()
        .map(Polynomial::new)
        .collect()
}

/// Effective degree under rounding: the highest coefficient that is not
/// negligible relative to the largest one.
fn effective_degree<S: Scalar>(p: &Polynomial<S>) -> Option<usize> {
    let scale = p.max_coeff_magnitude();
    if scale == 0.0 {
        return None;
    }
    (0..p.coeffs().len())
        .rev()
        .find(|&i| !p.coeff(i).is_negligible(1e-10, scale))
}

fn truncate_to_degree<S: Scalar>(p: &Polynomial<S>, d: usize) -> Polynomial<S> {
    Polynomial::new(p.coeffs().iter().take(d + 1).cloned().collect())
}

/// Two-dimensional polynomial solution space of an associated equation.
#[derive(Debug, Clone)]
pub struct SolutionSpace<S: Scalar> {
    /// Generic solution, the higher degree k1, monic, with its coefficient at
    /// the special degree reduced to zero (canonical representative).
    pub generic: Polynomial<S>,
    /// Special solution, the lower degree k2, monic.
    pub special: Polynomial<S>,
    pub wronskian: Polynomial<S>,
    /// Relative coefficient error of the Wronskian against prod (x - z_l)^{m_l}.
    pub wronskian_rel_err: f64,
    /// Whether a fixed generic combination of the basis has simple roots.
    pub generic_simple_roots: bool,
}

/// Find the full polynomial solution space of an associated equation and
/// check the Wronskian identity: a basis u1 of degree max(k, l+1-k) and u2 of
/// degree min(k, l+1-k), with W(u1, u2) proportional to prod (x - z_l)^{m_l}.
pub fn verify_all_polynomial<S: NullspaceScalar + RootScalar>(
    e: &FuchsianEquation<S>,
    k: usize,
) -> Result<SolutionSpace<S>> {
    let l = e.total_weight();
    let dual = l + 1 - k as i64;
    if dual < 0 {
        return Err(Error::Domain(format!(
            "dual degree l+1-k = {dual} is negative"
        )));
    }
    let dual = dual as usize;
    if dual == k {
        return Err(Error::Domain(
            "equal degrees: exponents at infinity coincide".into(),
        ));
    }
    let k1 = k.max(dual);
    let k2 = k.min(dual);
    let sols = polynomial_solutions(e, k1);
    if sols.len() != 2 {
        return Err(Error::Verification(format!(
            "solution space of degree <= {k1} has dimension {}, expected 2",
            sols.len()
        )));
    }
    // Echelonize by descending degree to get one element of each degree.
    let mut a = sols[0].clone();
    let mut b = sols[1].clone();
    let da = effective_degree(&a).ok_or_else(|| Error::Verification("zero solution".into()))?;
    let db = effective_degree(&b).ok_or_else(|| Error::Verification("zero solution".into()))?;
    if db > da {
        std::mem::swap(&mut a, &mut b);
    }
    let da = effective_degree(&a).unwrap();
    if da != k1 {
        return Err(Error::Verification(format!(
            "no solution of degree {k1}: top degree found {da}"
        )));
    }
    a = truncate_to_degree(&a, da).monic();
    // Kill b's degree-k1 component, then normalize.
    let lead_b = b.coeff(da);
    b = b.sub(&a.scale(&lead_b));
    let db =
        effective_degree(&b).ok_or_else(|| Error::Verification("solutions are parallel".into()))?;
    if db != k2 {
        return Err(Error::Verification(format!(
            "second solution has degree {db}, expected {k2}"
        )));
    }
    b = truncate_to_degree(&b, db).monic();
    // Canonical generic representative: zero its coefficient at degree k2.
    let c = a.coeff(k2);
    a = a.sub(&b.scale(&c));

    let wronskian = a.wronskian(&b);
    let target = {
        let mut t = Polynomial::one();
        for (zl, &ml) in e.z.iter().zip(&e.m) {
            for _ in 0..ml {
                t = t.mul(&Polynomial::new(vec![-zl.clone(), S::one()]));
            }
        }
        t
    };
    // W has degree k1 + k2 - 1 = l and leading coefficient k1 - k2 (up to
    // sign of the pairing order); compare after matching leading terms.
    let wl = effective_degree(&wronskian);
    if wl != Some(l as usize) {
        return Err(Error::Verification(format!(
            "wronskian degree {wl:?}, expected {l}"
        )));
    }
    let alpha = wronskian.coeff(l as usize);
    let scaled = target.scale(&alpha);
    let err_poly = wronskian.sub(&scaled);
    let rel = err_poly.max_coeff_magnitude() / wronskian.max_coeff_magnitude().max(1.0);
    if S::EXACT {
        if !err_poly.is_zero() {
            return Err(Error::Verification(
                "wronskian does not match the weight divisor".into(),
            ));
        }
    } else if rel > DIVISION_TOL {
        return Err(Error::Verification(format!(
            "wronskian mismatch: relative error {rel:.3e}"
        )));
    }

    // Simple-roots check of a fixed generic combination u1 + (7/10) u2.
    let combo = a.add(&b.scale(&(S::from_i64(7) / S::from_i64(10))));
    let generic_simple_roots = S::has_simple_roots(&combo);

    Ok(SolutionSpace {
        generic: a,
        special: b,
        wronskian,
        wronskian_rel_err: if S::EXACT { 0.0 } else { rel },
        generic_simple_roots,
    })
}

/// f'g - fg'.
pub fn wronskian<S: Scalar>(f: &Polynomial<S>, g: &Polynomial<S>) -> Polynomial<S> {
    f.wronskian(g)
}

/// Nondegeneracy of a two-dimensional space: no common zero of the basis and
/// the special solution's roots stay away from the singular points.
#[derive(Debug, Clone, PartialEq)]
pub struct NondegeneracyReport {
    pub nondegenerate: bool,
    pub reasons: Vec<String>,
}

pub fn nondegenerate_check(
    space: &SolutionSpace<Complex64>,
    z: &[Complex64],
) -> NondegeneracyReport {
    let mut reasons = Vec::new();
    let roots = space.special.roots();
    let diam = z
        .iter()
        .flat_map(|a| z.iter().map(move |b| (a - b).norm()))
        .fold(1.0f64, f64::max);
    let margin = 1e-8 * diam;
    let u1_scale = space.generic.max_coeff_magnitude().max(1.0);
    for r in &roots {
        let point_scale = u1_scale
            * r.norm()
                .max(1.0)
                .powi(space.generic.degree().unwrap_or(0) as i32);
        if space.generic.eval(r).norm() <= 1e-8 * point_scale {
            reasons.push(format!("common zero near {r}"));
        }
        for (l, zl) in z.iter().enumerate() {
            if (r - zl).norm() <= margin {
                reasons.push(format!("special-solution root at singular point z[{l}]"));
            }
        }
    }
    NondegeneracyReport {
        nondegenerate: reasons.is_empty(),
        reasons,
    }
}

/// Count of second-order equations with only univalued solutions and the
/// given exponents: translate the exponent data to weights, then the count is
/// the representation multiplicity, zero in the excluded ranges.
pub fn count_univalued_equations(finite: &[(i64, i64)], infinity: (i64, i64)) -> Result<i64> {
    let n = finite.len();
    let total: i64 = finite.iter().map(|&(a, b)| a + b).sum::<i64>() + infinity.0 + infinity.1;
    if total != n as i64 - 1 {
        return Err(Error::Domain(format!(
            "exponent sum {total} violates the trace identity (expected {})",
            n as i64 - 1
        )));
    }
    // Equal exponents at any point force logarithmic solutions: count zero.
    if infinity.0 == infinity.1 || finite.iter().any(|&(a, b)| a == b) {
        return Ok(0);
    }
    let mut m = Vec::with_capacity(n);
    let mut rho1_sum = 0i64;
    for &(a, b) in finite {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        m.push((hi - lo - 1) as u32);
        rho1_sum += lo;
    }
    let ilo = infinity.0.min(infinity.1);
    let k = -ilo - rho1_sum;
    let l: i64 = m.iter().map(|&x| x as i64).sum();
    let dual = l + 1 - k;
    if k > dual && dual >= 0 {
        multiplicity_w(&m, dual)
    } else {
        Ok(0)
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
    fn build_fg_two_points() {
        let (f, g) = build_fg(&[rat(0), rat(1)], &[1, 1]).unwrap();
        assert_eq!(f, Polynomial::new(vec![rat(0), rat(-1), rat(1)]));
        assert_eq!(g, Polynomial::new(vec![rat(1), rat(-2)]));
        assert!(build_fg(&[rat(0), rat(0)], &[1, 1]).is_err());
    }

    #[test]
    fn build_fg_residues() {
        // G/F has residue -m_j at each z_j, i.e. G(z_j) = -m_j F'(z_j).
        let z = [rat(0), rat(1), rat(2)];
        let m = [1u32, 2, 3];
        let (f, g) = build_fg(&z, &m).unwrap();
        let fp = f.derivative();
        for (j, zj) in z.iter().enumerate() {
            assert_eq!(g.eval(zj), rat(-(m[j] as i64)) * fp.eval(zj));
        }
    }

    #[test]
    fn associated_equation_hand_case() {
        // Defining solution x - 1/2 at z = (0, 1), unit weights: H = 2.
        let u = Polynomial::new(vec![ratio(-1, 2), rat(1)]);
        let e =
            associated_equation_from_poly(&u, &[rat(0), rat(1)], &[1, 1], DIVISION_TOL).unwrap();
        assert_eq!(e.h, Polynomial::constant(rat(2)));
        assert!(e.apply(&u).is_zero());
        // Non-critical root placement is rejected.
        let bad = Polynomial::new(vec![ratio(-1, 4), rat(1)]);
        assert!(matches!(
            associated_equation_from_poly(&bad, &[rat(0), rat(1)], &[1, 1], DIVISION_TOL),
            Err(Error::NotCritical { .. })
        ));
    }

    #[test]
    fn associated_equation_exact_two_particle() {
        // u = x^2 - x + 1/3 (weights (2,2), z = (0,1)): exact division, H = 6.
        let u = Polynomial::new(vec![ratio(1, 3), rat(-1), rat(1)]);
        let e =
            associated_equation_from_poly(&u, &[rat(0), rat(1)], &[2, 2], DIVISION_TOL).unwrap();
        assert_eq!(e.h, Polynomial::constant(rat(6)));
        let table = exponents(&e).unwrap();
        assert_eq!(table.infinity, (rat(-2), rat(-3)));
    }

    #[test]
    fn associated_equation_float_matches_quadratic_example() {
        // Weight-one points (0, 1, 2): critical points at roots of 3x^2-6x+2,
        // and H = -G/(x - root).
        let s3 = 3f64.sqrt();
        for root in [1.0 - s3 / 3.0, 1.0 + s3 / 3.0] {
            let z = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
            let e = associated_equation(&[c(root, 0.0)], &z, &[1, 1, 1], DIVISION_TOL).unwrap();
            assert_eq!(e.h.degree(), Some(1));
            // -G = H * (x - root)
            let recomposed = e.h.mul(&Polynomial::new(vec![c(-root, 0.0), c(1.0, 0.0)]));
            let diff = recomposed.add(&e.g);
            assert!(diff.max_coeff_magnitude() < 1e-9);
        }
    }

    #[test]
    fn indicial_roots_cases() {
        let (r1, r2) = indicial_roots(c(-2.0, 0.0), c(0.0, 0.0));
        assert!((r1 - c(0.0, 0.0)).norm() < 1e-14);
        assert!((r2 - c(3.0, 0.0)).norm() < 1e-14);
        let (r1, r2) = indicial_roots(c(1.0, 0.0), c(0.0, 0.0));
        assert!(r1.norm() < 1e-14 && r2.norm() < 1e-14);
        // Cross-check a generic quadratic against the polynomial root finder.
        let (p0, q0) = (c(0.3, -0.4), c(-1.2, 0.7));
        let (r1, r2) = indicial_roots(p0, q0);
        let quad = Polynomial::new(vec![q0, p0 - c(1.0, 0.0), c(1.0, 0.0)]);
        let roots = quad.roots();
        assert!((r1 - roots[0]).norm() < 1e-10);
        assert!((r2 - roots[1]).norm() < 1e-10);
    }

    #[test]
    fn exponent_table_matches_structure() {
        let u = Polynomial::new(vec![ratio(-1, 2), rat(1)]);
        let e =
            associated_equation_from_poly(&u, &[rat(0), rat(1)], &[1, 1], DIVISION_TOL).unwrap();
        let table = exponents(&e).unwrap();
        assert_eq!(table.finite, vec![(rat(0), rat(2)), (rat(0), rat(2))]);
        assert_eq!(table.infinity, (rat(-1), rat(-2)));
        // Tampering with H breaks the infinity check.
        let mut bad = e.clone();
        bad.h = bad.h.add(&Polynomial::constant(rat(1)));
        assert!(exponents(&bad).is_err());
    }

    #[test]
    fn polynomial_solutions_worked_equation() {
        let u = Polynomial::new(vec![ratio(-1, 2), rat(1)]);
        let e =
            associated_equation_from_poly(&u, &[rat(0), rat(1)], &[1, 1], DIVISION_TOL).unwrap();
        let deg1 = polynomial_solutions(&e, 1);
        assert_eq!(deg1.len(), 1);
        assert_eq!(deg1[0].monic(), u);
        let deg2 = polynomial_solutions(&e, 2);
        assert_eq!(deg2.len(), 2);
        // x^2 solves it too.
        let x2: Polynomial<Rational> = Polynomial::monomial(2);
        assert!(e.apply(&x2).is_zero());
        // Perturbing H empties the degree-1 kernel.
        let mut bad = e.clone();
        bad.h = bad.h.add(&Polynomial::constant(rat(1)));
        assert!(polynomial_solutions(&bad, 1).is_empty());
    }

    #[test]
    fn verify_all_polynomial_exact() {
        let u = Polynomial::new(vec![ratio(-1, 2), rat(1)]);
        let e =
            associated_equation_from_poly(&u, &[rat(0), rat(1)], &[1, 1], DIVISION_TOL).unwrap();
        let space = verify_all_polynomial(&e, 1).unwrap();
        assert_eq!(space.special, u);
        assert_eq!(space.generic, Polynomial::monomial(2));
        // W(x^2, x - 1/2) = x^2 - x = prod (x - z_l)^{m_l}.
        assert_eq!(
            space.wronskian,
            Polynomial::new(vec![rat(0), rat(-1), rat(1)])
        );
        assert_eq!(space.wronskian_rel_err, 0.0);
        assert!(space.generic_simple_roots);
    }

    #[test]
    fn verify_all_polynomial_float() {
        let z = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let s3 = 3f64.sqrt();
        let root = 1.0 - s3 / 3.0;
        let e = associated_equation(&[c(root, 0.0)], &z, &[1, 1, 1], DIVISION_TOL).unwrap();
        let space = verify_all_polynomial(&e, 1).unwrap();
        assert_eq!(space.special.degree(), Some(1));
        assert_eq!(space.generic.degree(), Some(3));
        assert!(space.wronskian_rel_err < 1e-10);
        assert!(space.generic_simple_roots);
        // The special solution is the defining one.
        assert!((space.special.roots()[0] - c(root, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn nondegeneracy_examples() {
        let u = Polynomial::new(vec![c(-0.5, 0.0), c(1.0, 0.0)]);
        let z = [c(0.0, 0.0), c(1.0, 0.0)];
        let e = associated_equation(&[c(0.5, 0.0)], &z, &[1, 1], DIVISION_TOL).unwrap();
        let space = verify_all_polynomial(&e, 1).unwrap();
        let rep = nondegenerate_check(&space, &z);
        assert!(rep.nondegenerate, "{:?}", rep.reasons);
        let _ = u;
        // A special solution rooted at a singular point is degenerate.
        let degenerate = SolutionSpace {
            generic: Polynomial::monomial(2),
            special: Polynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
            wronskian: Polynomial::monomial(2),
            wronskian_rel_err: 0.0,
            generic_simple_roots: true,
        };
        let rep = nondegenerate_check(&degenerate, &z);
        assert!(!rep.nondegenerate);
        // span{x^2, x} has a common zero at the origin.
        let common = SolutionSpace {
            generic: Polynomial::monomial(2),
            special: Polynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
            wronskian: Polynomial::monomial(2),
            wronskian_rel_err: 0.0,
            generic_simple_roots: true,
        };
        let rep = nondegenerate_check(&common, &[c(3.0, 0.0), c(4.0, 0.0)]);
        assert!(!rep.nondegenerate);
    }

    #[test]
    fn univalued_count_dictionary() {
        // Dimensions (2,2,2) at finite points and 2 at infinity.
        let count = count_univalued_equations(&[(0, 2), (0, 2), (0, 2)], (-3, -1)).unwrap();
        assert_eq!(count, 2);
        // The worked two-point family: weights (1,1), generic degree 2.
        let count = count_univalued_equations(&[(0, 2), (0, 2)], (-1, -2)).unwrap();
        assert_eq!(count, 1);
        // Equal exponents at infinity force logarithms: zero.
        let count = count_univalued_equations(&[(0, 2), (0, 1)], (-1, -1)).unwrap();
        assert_eq!(count, 0);
        // Negative dual degree: zero.
        let count = count_univalued_equations(&[(0, 2), (0, 2)], (-4, 1)).unwrap();
        assert_eq!(count, 0);
        // Weights (3,2) with generic degree 4, dual 2 <= min: exactly one.
        let count = count_univalued_equations(&[(0, 4), (0, 3)], (-2, -4)).unwrap();
        assert_eq!(count, 1);
        // Trace identity violations are domain errors.
        assert!(count_univalued_equations(&[(0, 2), (0, 2)], (-1, -3)).is_err());
    }
}
