//! Exact sl2 representation theory on tensor products of irreducible
//! highest-weight modules: weight bases, generator actions, Shapovalov
//! forms, singular vectors, and the combinatorial multiplicity counts.
//!
//! Everything in this module is arbitrary-precision rational (or plain
//! integers); the values it produces serve as oracles for the numerical
//! modules.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rat, Rational, Scalar};

/// Highest weights of the tensor factors. Entries are rational: the solver
/// workflows use positive integers, while good-pair classification admits
/// arbitrary rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentVector {
    entries: Vec<Rational>,
}

impl ExponentVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        ExponentVector { entries }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        ExponentVector {
            entries: values.iter().map(|&v| rat(v)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// l(m), the sum of the highest weights.
    pub fn total(&self) -> Rational {
        self.entries
            .iter()
            .fold(Rational::zero(), |acc, e| acc + e.clone())
    }

    pub fn integer_entries(&self) -> Option<Vec<i64>> {
        self.entries
            .iter()
            .map(|e| {
                if e.is_integer() {
                    e.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn nonnegative_integer_entries(&self) -> Option<Vec<u32>> {
        self.integer_entries()?
            .into_iter()
            .map(|v| if v >= 0 { u32::try_from(v).ok() } else { None })
            .collect()
    }
}

/// Basis label J = (j_1, ..., j_n) with sum k and 0 <= j_l <= m_l.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightIndex(pub Vec<u32>);

impl WeightIndex {
    pub fn k(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// All weight indices for (m, k) in ascending lexicographic order.
pub fn weight_basis(m: &[u32], k: usize) -> Vec<WeightIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; m.len()];
    fn rec(
        m: &[u32],
        pos: usize,
        remaining: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<WeightIndex>,
    ) {
        if pos == m.len() {
            if remaining == 0 {
                out.push(WeightIndex(current.clone()));
            }
            return;
        }
        let cap = (m[pos] as usize).min(remaining);
        for j in 0..=cap {
            current[pos] = j as u32;
            rec(m, pos + 1, remaining - j, current, out);
        }
        current[pos] = 0;
    }
    if m.is_empty() {
        if k == 0 {
            out.push(WeightIndex(vec![]));
        }
        return out;
    }
    rec(m, 0, k, &mut current, &mut out);
    out
}

/// dim of the weight subspace at weight l(m) - 2k for mixed exponents:
/// the power j_l is capped by m_l only when m_l is a nonnegative integer
/// (the other factors are infinite-dimensional).
pub fn weight_dim_mixed(m: &ExponentVector, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    let caps: Vec<Option<usize>> = m
        .entries()
        .iter()
        .map(|e| {
            if e.is_integer() && !e.is_negative() {
                e.to_integer().to_usize()
            } else {
                None
            }
        })
        .collect();
    // Bounded-composition count by dynamic programming.
    let k = k as usize;
    let mut ways = vec![0i64; k + 1];
    ways[0] = 1;
    for cap in caps {
        let mut next = vec![0i64; k + 1];
        for (total, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let top = cap.unwrap_or(k - total).min(k - total);
            for j in 0..=top {
                next[total + j] += w;
            }
        }
        ways = next;
    }
    ways[k]
}

/// d(m, k): dimension of weight l(m)-2k minus dimension of weight l(m)-2k+2.
pub fn dim_difference(m: &ExponentVector, k: i64) -> i64 {
    weight_dim_mixed(m, k) - weight_dim_mixed(m, k - 1)
}

/// Multiplicity of the irreducible of highest weight l(m)-2k inside the
/// tensor product; zero when l(m)-2k < 0.
pub fn multiplicity_w(m: &[u32], k: i64) -> Result<i64> {
    if k < 0 {
        return Err(Error::Domain(format!(
            "multiplicity requires k >= 0, got {k}"
        )));
    }
    let l: i64 = m.iter().map(|&x| x as i64).sum();
    if l - 2 * k < 0 {
        return Ok(0);
    }
    let ev = ExponentVector::from_integers(&m.iter().map(|&x| x as i64).collect::<Vec<_>>());
    Ok(dim_difference(&ev, k))
}

fn binomial(p: i64, q: i64) -> i64 {
    if p < 0 || q < 0 || p < q {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 1..=q {
        acc = acc * (p - q + i) as i128 / i as i128;
    }
    acc as i64
}

/// The alternating binomial count over the integer exponents
/// m_1, ..., m_a (a <= n), with C(p, q) = 0 for p < q or p < 0.
pub fn sharp_count(k: i64, n: usize, int_exponents: &[i64]) -> i64 {
    let a = int_exponents.len();
    assert!(a <= n, "more integer exponents than factors");
    let n = n as i64;
    let mut total: i64 = 0;
    for mask in 0u32..(1u32 << a) {
        let q = mask.count_ones() as i64;
        let msum: i64 = (0..a)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| int_exponents[i])
            .sum();
        let sign = if q % 2 == 0 { 1 } else { -1 };
        total += sign * binomial(k + n - 2 - msum - q, n - 2);
    }
    total
}

/// Sparse vector in the weight basis, generic over the coefficient scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorVector<S: Scalar> {
    coeffs: BTreeMap<WeightIndex, S>,
}

impl<S: Scalar> TensorVector<S> {
    pub fn zero() -> Self {
        TensorVector {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(j: WeightIndex) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(j, S::one());
        TensorVector { coeffs }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (WeightIndex, S)>) -> Self {
        let mut v = Self::zero();
        for (j, c) in entries {
            v.add_term(j, c);
        }
        v
    }

    pub fn add_term(&mut self, j: WeightIndex, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(j.clone()).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        // Drop the key when coefficients cancel exactly.
        if entry.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn get(&self, j: &WeightIndex) -> S {
        self.coeffs.get(j).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WeightIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &S) -> Self {
        TensorVector {
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, v)| (j.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (j, c) in other.coeffs.iter() {
            out.add_term(j.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-S::one())))
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector (by magnitudes).
    pub fn norm_2(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.magnitude().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> TensorVector<T> {
        TensorVector {
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, c)| (j.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    H,
}

/// Action of e, f, h on the tensor product, coproduct = sum over factors.
/// On one factor: e f^j v_a = j(a-j+1) f^{j-1} v_a, h f^j v_a = (a-2j) f^j v_a,
/// f f^j v_a = f^{j+1} v_a, truncated past j = a.
pub fn apply_generator<S: Scalar>(g: Generator, v: &TensorVector<S>, m: &[u32]) -> TensorVector<S> {
    let mut out = TensorVector::zero();
    for (j, c) in v.iter() {
        assert_eq!(j.0.len(), m.len(), "index arity mismatch");
        match g {
            Generator::H => {
                let eig: i64 =
                    j.0.iter()
                        .zip(m)
                        .map(|(&jl, &ml)| ml as i64 - 2 * jl as i64)
                        .sum();
                out.add_term(j.clone(), c.clone() * S::from_i64(eig));
            }
            Generator::E => {
                for l in 0..m.len() {
                    let jl = j.0[l] as i64;
                    if jl == 0 {
                        continue;
                    }
                    let coeff = jl * (m[l] as i64 - jl + 1);
                    let mut idx = j.0.clone();
                    idx[l] -= 1;
                    out.add_term(WeightIndex(idx), c.clone() * S::from_i64(coeff));
                }
            }
            Generator::F => {
                for l in 0..m.len() {
                    if j.0[l] + 1 > m[l] {
                        continue;
                    }
                    let mut idx = j.0.clone();
                    idx[l] += 1;
                    out.add_term(WeightIndex(idx), c.clone());
                }
            }
        }
    }
    out
}

/// Norm of f^j v_a under the form with S(v,v) = 1 and S(ex, y) = S(x, fy):
/// prod_{i=1..j} i (a - i + 1), as an exact rational.
fn factor_norm(a: u32, j: u32) -> Rational {
    let mut acc = rat(1);
    for i in 1..=j as i64 {
        acc *= rat(i) * rat(a as i64 - i + 1);
    }
    acc
}

/// Diagonal of the Shapovalov Gram matrix on `weight_basis(m, k)`,
/// in basis order.
pub fn shapovalov_gram<S: Scalar>(m: &[u32], k: usize) -> Vec<S> {
    weight_basis(m, k)
        .iter()
        .map(|j| {
            let mut acc = rat(1);
            for (l, &jl) in j.0.iter().enumerate() {
                acc *= factor_norm(m[l], jl);
            }
            S::from_rational(&acc)
        })
        .collect()
}

/// Shapovalov pairing of two vectors of the same weight. The form is
/// bilinear (no conjugation), diagonal in the weight basis.
pub fn shapovalov_pairing<S: Scalar>(x: &TensorVector<S>, y: &TensorVector<S>, m: &[u32]) -> S {
    let mut acc = S::zero();
    for (j, cx) in x.iter() {
        let cy = y.get(j);
        if cy.is_zero() {
            continue;
        }
        let mut g = rat(1);
        for (l, &jl) in j.0.iter().enumerate() {
            g *= factor_norm(m[l], jl);
        }
        acc = acc + cx.clone() * cy * S::from_rational(&g);
    }
    acc
}

/// Exact basis of the singular vectors at weight l(m) - 2k: the kernel of e
/// restricted to that weight. Empty when l(m) - 2k < 0 (e is injective on
/// negative weights).
pub fn singular_basis(m: &[u32], k: usize) -> Vec<TensorVector<Rational>> {
    let l: i64 = m.iter().map(|&x| x as i64).sum();
    if l - 2 * (k as i64) < 0 {
        return vec![];
    }
    let domain = weight_basis(m, k);
    if domain.is_empty() {
        return vec![];
    }
    let target = if k == 0 {
        vec![]
    } else {
        weight_basis(m, k - 1)
    };
    let target_pos: BTreeMap<&WeightIndex, usize> =
        target.iter().enumerate().map(|(i, j)| (j, i)).collect();
    let mut mat = Matrix::<Rational>::zeros(target.len(), domain.len());
    for (col, j) in domain.iter().enumerate() {
        let image: TensorVector<Rational> =
            apply_generator(Generator::E, &TensorVector::basis(j.clone()), m);
        for (idx, c) in image.iter() {
            let row = target_pos[idx];
            mat[(row, col)] = c.clone();
        }
    }
    mat.nullspace_exact()
        .into_iter()
        .map(|v| {
            TensorVector::from_entries(
                domain
                    .iter()
                    .cloned()
                    .zip(v.into_iter())
                    .filter(|(_, c)| !c.is_zero()),
            )
        })
        .collect()
}

/// Result of the good-pair classification.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodPairReport {
    pub is_good: bool,
    /// Counts of the three blocks: positive integers, positive non-integers,
    /// negative integers.
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// Reordering (original indices) realizing the block structure.
    pub witness: Vec<usize>,
}

impl GoodPairReport {
    fn bad() -> Self {
        GoodPairReport {
            is_good: false,
            a: 0,
            b: 0,
            c: 0,
            witness: vec![],
        }
    }
}

/// A pair {m, k} is good when l(m) >= 2k and m can be reordered into
/// positive integers, then positive non-integers none of whose consecutive
/// runs sums to an integer, then negative integers.
pub fn classify_good_pair(m: &ExponentVector, k: i64) -> GoodPairReport {
    if m.total() < rat(2 * k) {
        return GoodPairReport::bad();
    }
    let mut pos_int = Vec::new();
    let mut pos_frac = Vec::new();
    let mut neg_int = Vec::new();
    for (i, e) in m.entries().iter().enumerate() {
        if e.is_integer() {
            if e.is_positive() {
                pos_int.push(i);
            } else if e.is_negative() {
                neg_int.push(i);
            } else {
                // A zero entry fits no block.
                return GoodPairReport::bad();
            }
        } else if e.is_positive() {
            pos_frac.push(i);
        } else {
            return GoodPairReport::bad();
        }
    }
    // Only the middle block's internal order matters: search for an order of
    // the positive non-integers with no integer consecutive-run sum.
    fn search(
        entries: &[Rational],
        remaining: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        prefix: &mut Vec<Rational>,
    ) -> bool {
        if remaining.is_empty() {
            return true;
        }
        for pos in 0..remaining.len() {
            let idx = remaining[pos];
            let last = prefix.last().cloned().unwrap_or_else(Rational::zero);
            let new_prefix = last + entries[idx].clone();
            // Runs ending at the new element: new_prefix - prefix[i].
            let ok = std::iter::once(Rational::zero())
                .chain(prefix.iter().cloned())
                .all(|p| !(new_prefix.clone() - p).is_integer());
            if !ok {
                continue;
            }
            remaining.remove(pos);
            chosen.push(idx);
            prefix.push(new_prefix);
            if search(entries, remaining, chosen, prefix) {
                return true;
            }
            prefix.pop();
            chosen.pop();
            remaining.insert(pos, idx);
        }
        false
    }
    let mut remaining = pos_frac.clone();
    let mut chosen = Vec::new();
    let mut prefix = Vec::new();
    if !search(m.entries(), &mut remaining, &mut chosen, &mut prefix) {
        return GoodPairReport::bad();
    }
    let mut witness = pos_int.clone();
    witness.extend(chosen);
    witness.extend(neg_int.iter().copied());
    GoodPairReport {
        is_good: true,
        a: pos_int.len(),
        b: pos_frac.len(),
        c: neg_int.len(),
        witness,
    }
}
