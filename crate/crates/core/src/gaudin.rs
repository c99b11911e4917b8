//! Casimir operator and Gaudin Hamiltonians on weight subspaces of the
//! tensor product, assembled once over a generic scalar: exact matrices for
//! rational configurations, complex-float matrices for the solver pipeline.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rep::{shapovalov_gram, weight_basis, TensorVector, WeightIndex};
use crate::scalar::Scalar;

/// Marker points z_1, ..., z_n of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<S> {
    points: Vec<S>,
}

impl<S: Scalar> Configuration<S> {
    pub fn new(points: Vec<S>) -> Result<Self> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::CoincidentPoints { i, j });
                }
            }
        }
        Ok(Configuration { points })
    }

    pub fn points(&self) -> &[S] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Smallest pairwise distance, a genericity diagnostic.
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                let d = (self.points[i].clone() - self.points[j].clone()).magnitude();
                min = min.min(d);
            }
        }
        min
    }
}

/// Apply the Casimir 1/2 h(x)h + e(x)f + f(x)e in factors (i, j), identity
/// elsewhere.
pub fn casimir_pair<S: Scalar>(
    v: &TensorVector<S>,
    i: usize,
    j: usize,
    m: &[u32],
) -> Result<TensorVector<S>> {
    if i == j {
        return Err(Error::Domain(format!(
            "casimir needs distinct factors, got i = j = {i}"
        )));
    }
    if i >= m.len() || j >= m.len() {
        return Err(Error::Domain(format!(
            "factor index out of range: ({i}, {j}) with n = {}",
            m.len()
        )));
    }
    let mut out = TensorVector::zero();
    for (idx, c) in v.iter() {
        let ji = idx.0[i] as i64;
        let jj = idx.0[j] as i64;
        let mi = m[i] as i64;
        let mj = m[j] as i64;
        // 1/2 h (x) h: diagonal.
        let hh = (mi - 2 * ji) * (mj - 2 * jj);
        if hh != 0 {
            let half = S::from_i64(hh) / S::from_i64(2);
            out.add_term(idx.clone(), c.clone() * half);
        }
        // e in factor i, f in factor j.
        if ji >= 1 && jj + 1 <= mj {
            let coeff = ji * (mi - ji + 1);
            let mut next = idx.0.clone();
            next[i] -= 1;
            next[j] += 1;
            out.add_term(WeightIndex(next), c.clone() * S::from_i64(coeff));
        }
        // f in factor i, e in factor j.
        if jj >= 1 && ji + 1 <= mi {
            let coeff = jj * (mj - jj + 1);
            let mut next = idx.0.clone();
            next[i] += 1;
            next[j] -= 1;
            out.add_term(WeightIndex(next), c.clone() * S::from_i64(coeff));
        }
    }
    Ok(out)
}

/// Apply H_i(z) = sum_{j != i} Casimir^{(i,j)} / (z_i - z_j) to a vector.
pub fn apply_hamiltonian<S: Scalar>(
    i: usize,
    z: &Configuration<S>,
    v: &TensorVector<S>,
    m: &[u32],
) -> Result<TensorVector<S>> {
    let mut out = TensorVector::zero();
    for j in 0..z.n() {
        if j == i {
            continue;
        }
        let diff = z.points()[i].clone() - z.points()[j].clone();
        if diff.is_zero() {
            return Err(Error::CoincidentPoints { i, j });
        }
        let term = casimir_pair(v, i, j, m)?;
        let inv = S::one() / diff;
        out = out.add(&term.scale(&inv));
    }
    Ok(out)
}

/// Matrix of H_i(z) on `weight_basis(m, k)`, columns indexed in basis order:
/// column J holds the coefficients of H_i applied to the basis vector J.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix<S: Scalar> {
    pub site: usize,
    pub basis: Vec<WeightIndex>,
    pub entries: Matrix<S>,
}

pub fn hamiltonian_matrix<S: Scalar>(
    i: usize,
    z: &Configuration<S>,
    m: &[u32],
    k: usize,
) -> Result<HamiltonianMatrix<S>> {
    if z.n() != m.len() {
        return Err(Error::Domain(format!(
            "configuration size {} does not match {} factors",
            z.n(),
            m.len()
        )));
    }
    let basis = weight_basis(m, k);
    let pos: std::collections::BTreeMap<&WeightIndex, usize> =
        basis.iter().enumerate().map(|(r, j)| (j, r)).collect();
    let mut entries = Matrix::zeros(basis.len(), basis.len());
    for (col, j) in basis.iter().enumerate() {
        let image = apply_hamiltonian(i, z, &TensorVector::basis(j.clone()), m)?;
        for (idx, c) in image.iter() {
            entries[(pos[idx], col)] = c.clone();
        }
    }
    Ok(HamiltonianMatrix {
        site: i,
        basis,
        entries,
    })
}

/// Shapovalov self-adjointness of a matrix on the weight basis:
/// G M is symmetric, with G the diagonal Gram matrix.
pub fn shapovalov_symmetric<S: Scalar>(mat: &HamiltonianMatrix<S>, m: &[u32], k: usize) -> bool {
    let gram: Vec<S> = shapovalov_gram(m, k);
    let n = mat.basis.len();
    for r in 0..n {
        for c in 0..n {
            let lhs = gram[r].clone() * mat.entries[(r, c)].clone();
            let rhs = gram[c].clone() * mat.entries[(c, r)].clone();
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{apply_generator, Generator};
    use crate::scalar::{rat, ratio, Rational};

    #[test]
    fn casimir_on_highest_weight_pair() {
        // On the top vector the e/f cross terms vanish: eigenvalue m1 m2 / 2.
        let m = [3u32, 2];
        let top = TensorVector::<Rational>::basis(WeightIndex(vec![0, 0]));
        let out = casimir_pair(&top, 0, 1, &m).unwrap();
        assert_eq!(out, top.scale(&rat(3)));
    }

    #[test]
    fn casimir_hand_matrix_two_spins() {
        let m = [1u32, 1];
        let fv_v = TensorVector::<Rational>::basis(WeightIndex(vec![1, 0]));
        let v_fv = TensorVector::<Rational>::basis(WeightIndex(vec![0, 1]));
        let out = casimir_pair(&fv_v, 0, 1, &m).unwrap();
        let expect = fv_v.scale(&ratio(-1, 2)).add(&v_fv);
        assert_eq!(out, expect);
        // The singular vector is an eigenvector with eigenvalue -3/2.
        let sing = fv_v.sub(&v_fv);
        let out = casimir_pair(&sing, 0, 1, &m).unwrap();
        assert_eq!(out, sing.scale(&ratio(-3, 2)));
    }

    #[test]
    fn casimir_rejects_equal_factors() {
        let v = TensorVector::<Rational>::basis(WeightIndex(vec![0, 0]));
        assert!(casimir_pair(&v, 1, 1, &[1, 1]).is_err());
    }

    #[test]
    fn hamiltonian_two_spin_matrix() {
        let m = [1u32, 1];
        let z = Configuration::new(vec![rat(0), rat(1)]).unwrap();
        let h1 = hamiltonian_matrix(0, &z, &m, 1).unwrap();
        // Basis is [(0,1), (1,0)]; H_1 = -Casimir.
        assert_eq!(h1.entries[(0, 0)], ratio(1, 2));
        assert_eq!(h1.entries[(1, 1)], ratio(1, 2));
        assert_eq!(h1.entries[(0, 1)], rat(-1));
        assert_eq!(h1.entries[(1, 0)], rat(-1));
        // n = 2: H_2 = -H_1.
        let h2 = hamiltonian_matrix(1, &z, &m, 1).unwrap();
        assert_eq!(h2.entries, h1.entries.scale(&rat(-1)));
        // Eigenvalue 3/2 on the singular vector.
        let sing = vec![rat(-1), rat(1)];
        let image = h1.entries.apply(&sing);
        assert_eq!(image, vec![ratio(-3, 2), ratio(3, 2)]);
    }

    #[test]
    fn hamiltonians_commute_and_preserve_structure() {
        // Exact sweep: three sites, weights up to 2, k up to 3, rational z.
        let configs = [
            vec![rat(0), rat(1), rat(3)],
            vec![ratio(1, 2), rat(-1), ratio(7, 3)],
        ];
        for m in [[1u32, 1, 1], [2, 1, 1], [2, 2, 1], [2, 2, 2]] {
            for zpts in &configs {
                let z = Configuration::new(zpts.clone()).unwrap();
                for k in 0..=3usize {
                    let h: Vec<_> = (0..3)
                        .map(|i| hamiltonian_matrix(i, &z, &m, k).unwrap())
                        .collect();
                    for a in 0..3 {
                        for b in a + 1..3 {
                            let ab = h[a].entries.mul(&h[b].entries);
                            let ba = h[b].entries.mul(&h[a].entries);
                            assert_eq!(ab, ba, "m={m:?} k={k} sites=({a},{b})");
                        }
                        assert!(shapovalov_symmetric(&h[a], &m, k));
                    }
                    // H_i commutes with e: it preserves singular vectors.
                    if k >= 1 {
                        for i in 0..3 {
                            for j in weight_basis(&m, k) {
                                let v = TensorVector::<Rational>::basis(j);
                                let eh = apply_generator(
                                    Generator::E,
                                    &apply_hamiltonian(i, &z, &v, &m).unwrap(),
                                    &m,
                                );
                                let he = apply_hamiltonian(
                                    i,
                                    &z,
                                    &apply_generator(Generator::E, &v, &m),
                                    &m,
                                )
                                .unwrap();
                                assert_eq!(eh, he);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coincident_points_rejected() {
        assert!(Configuration::new(vec![rat(1), rat(1)]).is_err());
        let z = Configuration::new(vec![rat(0), rat(1), rat(2)]).unwrap();
        assert!(hamiltonian_matrix(0, &z, &[1, 1], 1).is_err());
    }
}
