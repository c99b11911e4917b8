//! Eigenvector construction from critical points and its verification:
//! membership in the singular subspace, the simultaneous-eigenvector
//! property for every Hamiltonian, the pairing-square/Hessian identity, and
//! the basis test on a full set of orbits.

use crate::error::{Error, Result};
use crate::gaudin::{apply_hamiltonian, Configuration};
use crate::linalg::Matrix;
use crate::master::{hessian_det_scale, hessian_ln_phi, CriticalPoint, ProblemInstance};
use crate::rep::{
    apply_generator, shapovalov_pairing, singular_basis, weight_basis, Generator, TensorVector,
    WeightIndex,
};
use crate::scalar::{Complex64, Rational, Scalar};

/// Sum over assignments of the k variables to the n sites with prescribed
/// multiplicities j_l of 1/prod (t_i - z_{site(i)}). The products are sorted
/// before summation, so the value is exactly invariant under permutations of
/// t (and bit-stable across runs).
pub fn a_coefficient(j: &WeightIndex, t: &[Complex64], z: &[Complex64]) -> Result<Complex64> {
    for (i, ti) in t.iter().enumerate() {
        for (l, zl) in z.iter().enumerate() {
            if (ti - zl).norm() == 0.0 {
                return Err(Error::Arrangement(format!("t[{i}] equals z[{l}]")));
            }
        }
    }
    let k = t.len();
    debug_assert_eq!(j.k() as usize, k);
    let mut terms = Vec::new();
    let mut counts: Vec<u32> = j.0.clone();
    let mut word = vec![0usize; k];
    fn rec(
        pos: usize,
        k: usize,
        counts: &mut Vec<u32>,
        word: &mut Vec<usize>,
        t: &[Complex64],
        z: &[Complex64],
        terms: &mut Vec<Complex64>,
    ) {
        if pos == k {
            // Multiply the factors in sorted order so each term's value does
            // not depend on the ordering of t.
            let mut factors: Vec<Complex64> = word
                .iter()
                .enumerate()
                .map(|(i, &site)| t[i] - z[site])
                .collect();
            factors.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            let mut denom = Complex64::new(1.0, 0.0);
            for f in factors {
                denom *= f;
            }
            terms.push(Complex64::new(1.0, 0.0) / denom);
            return;
        }
        for site in 0..counts.len() {
            if counts[site] == 0 {
                continue;
            }
            counts[site] -= 1;
            word[pos] = site;
            rec(pos + 1, k, counts, word, t, z, terms);
            counts[site] += 1;
        }
    }
    rec(0, k, &mut counts, &mut word, t, z, &mut terms);
    terms.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(terms.into_iter().sum())
}

/// The eigenvector candidate built from a critical point, with every check
/// the verification layer needs recorded on it.
#[derive(Debug, Clone)]
pub struct BetheVector {
    pub coeffs: TensorVector<Complex64>,
    pub source: CriticalPoint,
    /// One eigenvalue per Hamiltonian site.
    pub eigenvalues: Vec<Complex64>,
    /// |e v| / |v|.
    pub e_residual: f64,
    /// max_i |H_i v - mu_i v| / |v|.
    pub eigen_residual: f64,
    /// S(v, v), the bilinear pairing square.
    pub pairing_square: Complex64,
    /// Set when the pairing square is too small for a Rayleigh quotient,
    /// which signals a degenerate critical point.
    pub degenerate: bool,
}

/// Assemble the vector sum_J A_J(t, z) f_J v and verify its properties.
pub fn bethe_vector(t0: &CriticalPoint, inst: &ProblemInstance) -> Result<BetheVector> {
    let basis = weight_basis(&inst.m, inst.k);
    if basis.is_empty() {
        return Err(Error::Domain("empty weight basis".into()));
    }
    let mut coeffs = TensorVector::zero();
    for j in &basis {
        let a = a_coefficient(j, &t0.t, &inst.z)?;
        coeffs.add_term(j.clone(), a);
    }
    let vnorm = coeffs.norm_2();
    if vnorm == 0.0 {
        return Err(Error::Verification(
            "vanishing eigenvector candidate".into(),
        ));
    }
    let ev = apply_generator(Generator::E, &coeffs, &inst.m);
    let e_residual = ev.norm_2() / vnorm;

    let z = Configuration::new(inst.z.clone())?;
    let s_vv = shapovalov_pairing(&coeffs, &coeffs, &inst.m);
    let degenerate = s_vv.norm() <= 1e-6 * vnorm * vnorm;
    let mut eigenvalues = Vec::with_capacity(inst.n());
    let mut eigen_residual = 0.0f64;
    for i in 0..inst.n() {
        let hv = apply_hamiltonian(i, &z, &coeffs, &inst.m)?;
        let mu = if degenerate {
            // Rayleigh quotient is 0/0 at degenerate points; use the ratio at
            // the largest component instead.
            let (jmax, cmax) = coeffs
                .iter()
                .max_by(|(_, a), (_, b)| a.norm().partial_cmp(&b.norm()).unwrap())
                .map(|(j, c)| (j.clone(), *c))
                .unwrap();
            hv.get(&jmax) / cmax
        } else {
            shapovalov_pairing(&coeffs, &hv, &inst.m) / s_vv
        };
        let defect = hv.sub(&coeffs.scale(&mu));
        eigen_residual = eigen_residual.max(defect.norm_2() / vnorm);
        eigenvalues.push(mu);
    }
    Ok(BetheVector {
        coeffs,
        source: t0.clone(),
        eigenvalues,
        e_residual,
        eigen_residual,
        pairing_square: s_vv,
        degenerate,
    })
}

impl BetheVector {
    /// Enforce the membership and eigenvector residual bounds.
    pub fn check(&self, tol: f64) -> Result<()> {
        if self.e_residual > tol {
            return Err(Error::Verification(format!(
                "singular-vector residual {:.3e} exceeds {tol:.1e}",
                self.e_residual
            )));
        }
        if self.eigen_residual > tol {
            return Err(Error::Verification(format!(
                "eigenvector residual {:.3e} exceeds {tol:.1e}",
                self.eigen_residual
            )));
        }
        Ok(())
    }
}

/// Outcome of the pairing-square/Hessian-determinant identity.
#[derive(Debug, Clone)]
pub struct NormIdentity {
    pub pairing_square: Complex64,
    pub hessian_det: Complex64,
    /// Relative error, absent at degenerate points where both sides vanish.
    pub rel_err: Option<f64>,
    pub degenerate: bool,
}

/// Compare S(v, v) with det of the log-Hessian at the critical point.
pub fn norm_identity_check(bv: &BetheVector, inst: &ProblemInstance) -> Result<NormIdentity> {
    let h = hessian_ln_phi(&bv.source.t, inst)?;
    let det = h.determinant();
    let scale = hessian_det_scale(&bv.source.t, inst);
    let degenerate = det.norm() <= 1e-6 * scale;
    let rel_err = if degenerate {
        None
    } else {
        Some((bv.pairing_square - det).norm() / det.norm())
    };
    Ok(NormIdentity {
        pairing_square: bv.pairing_square,
        hessian_det: det,
        rel_err,
        degenerate,
    })
}

/// Result of expressing a full set of eigenvectors in the exact singular
/// basis.
#[derive(Debug, Clone)]
pub struct BasisCheck {
    /// Coordinates: column j holds eigenvector j in the singular basis.
    pub coords: Matrix<Complex64>,
    pub det: Complex64,
    pub column_norms: Vec<f64>,
    /// |det| > threshold * prod of column norms.
    pub is_basis: bool,
}

/// Express each eigenvector in the exact singular basis and decide linear
/// independence by the determinant against the product of column norms.
pub fn basis_check(
    vectors: &[BetheVector],
    inst: &ProblemInstance,
    det_threshold: f64,
) -> Result<BasisCheck> {
    let sing = singular_basis(&inst.m, inst.k);
    let dim = sing.len();
    if vectors.len() != dim {
        return Err(Error::Domain(format!(
            "{} eigenvectors for a {dim}-dimensional singular subspace",
            vectors.len()
        )));
    }
    if dim == 0 {
        return Err(Error::Domain("empty singular subspace".into()));
    }
    let basis = weight_basis(&inst.m, inst.k);
    // Exact pseudo-inverse of the singular-basis matrix: P = (G^T G)^{-1} G^T.
    let g = Matrix::<Rational>::from_fn(basis.len(), dim, |r, c| sing[c].get(&basis[r]));
    let gt = g.transpose();
    let gtg = gt.mul(&g);
    let mut p = Matrix::<Rational>::zeros(dim, basis.len());
    for col in 0..basis.len() {
        let rhs: Vec<Rational> = (0..dim).map(|r| gt[(r, col)].clone()).collect();
        let x = gtg.solve(&rhs)?;
        for (r, v) in x.into_iter().enumerate() {
            p[(r, col)] = v;
        }
    }
    let p_c = Matrix::<Complex64>::from_fn(dim, basis.len(), |r, c| {
        Complex64::from_rational(&p[(r, c)])
    });
    let b = Matrix::<Complex64>::from_fn(basis.len(), vectors.len(), |r, c| {
        vectors[c].coeffs.get(&basis[r])
    });
    let coords = p_c.mul(&b);
    // Membership sanity: G * coords must reproduce the vectors.
    let g_c = Matrix::<Complex64>::from_fn(basis.len(), dim, |r, c| {
        Complex64::from_rational(&g[(r, c)])
    });
    let reconstructed = g_c.mul(&coords);
    let resid = reconstructed.sub(&b).max_magnitude();
    if resid > 1e-6 * b.max_magnitude().max(1.0) {
        return Err(Error::Verification(format!(
            "eigenvectors leave the singular subspace: reconstruction residual {resid:.3e}"
        )));
    }
    let det = coords.determinant();
    let column_norms: Vec<f64> = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| coords[(i, j)].norm().powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let bound: f64 = column_norms.iter().product();
    let is_basis = det.norm() > det_threshold * bound.max(f64::MIN_POSITIVE);
    Ok(BasisCheck {
        coords,
        det,
        column_norms,
        is_basis,
    })
}
