//! Irreducibility and the reducible strata.
//!
//! A tuple is irreducible when its components generate the full matrix
//! algebra. The reducible tuples split into strata `X_k` of tuples with a
//! common k-dimensional invariant subspace, of dimension
//! `dn² − (d−1)k(n−k)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::invariants::RANK_TOL;
use crate::linalg::{c64, column_span, eigenvalues, eigenvector, identity, null_space, CMat};
use crate::mattuple::{ginibre_matrix, random_invertible, standard_complex_normal, MatTuple};
use crate::rng::{seeded, stream};

/// Orthonormal basis (Frobenius inner product) of the unital algebra
/// generated by the tuple, grown by right multiplication until stable.
pub fn algebra_basis(z: &MatTuple) -> Vec<CMat> {
    let n = z.n();
    let nn = n * n;
    let mut basis = vec![identity(n) / c64((n as f64).sqrt(), 0.0)];
    for _ in 0..nn {
        let mut cands: Vec<CMat> = basis.clone();
        for b in &basis {
            for zi in z.mats() {
                let p = b * zi;
                let norm = p.norm();
                if norm > 0.0 {
                    cands.push(p / c64(norm, 0.0));
                }
            }
        }
        let stacked = CMat::from_fn(nn, cands.len(), |r, c| cands[c][(r / n, r % n)]);
        let span = column_span(&stacked, RANK_TOL);
        let grew = span.ncols() > basis.len();
        basis = (0..span.ncols())
            .map(|c| CMat::from_fn(n, n, |i, j| span[(i * n + j, c)]))
            .collect();
        if !grew || basis.len() == nn {
            break;
        }
    }
    basis
}

/// Dimension of the span of `I` and all words in the tuple.
pub fn word_span_dimension(z: &MatTuple) -> usize {
    algebra_basis(z).len()
}

/// Whether the tuple generates `M_n(ℂ)`.
pub fn is_irreducible(z: &MatTuple) -> bool {
    word_span_dimension(z) == z.n() * z.n()
}

/// Orthonormal basis of the smallest subspace containing `v` and invariant
/// under every component of `z`.
pub fn cyclic_subspace(z: &MatTuple, v: &nalgebra::DVector<Complex64>) -> CMat {
    let n = z.n();
    let mut q = column_span(&CMat::from_column_slice(n, 1, v.as_slice()), RANK_TOL);
    for _ in 0..n {
        let mut cols: Vec<nalgebra::DVector<Complex64>> = q.column_iter().map(|c| c.into_owned()).collect();
        for c in q.column_iter() {
            for zi in z.mats() {
                let w = zi * c;
                let norm = w.norm();
                if norm > 0.0 {
                    cols.push(w / c64(norm, 0.0));
                }
            }
        }
        let next = column_span(&CMat::from_columns(&cols), RANK_TOL);
        let stable = next.ncols() == q.ncols();
        q = next;
        if stable || q.ncols() == n {
            break;
        }
    }
    q
}

/// `maxᵢ ‖Zᵢ Q − Q Q* Zᵢ Q‖ / max(1, ‖Zᵢ‖)` for orthonormal columns `Q`.
pub fn invariance_defect(z: &MatTuple, q: &CMat) -> f64 {
    let proj = q * q.adjoint();
    z.mats()
        .iter()
        .map(|zi| {
            let zq = zi * q;
            (&zq - &proj * &zq).norm() / zi.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Best-effort search for a proper common invariant subspace.
///
/// Candidates are cyclic subspaces generated by eigenvectors of random
/// elements of the algebra and by random vectors; the adjoint tuple is
/// searched too, whose invariant subspaces are orthogonal complements of
/// invariant subspaces of `z`. Returns the smallest candidate with defect at
/// most `tol`. Always succeeds when a common invariant subspace exists and
/// the eigenvectors are computed accurately.
pub fn find_invariant_subspace(z: &MatTuple, tol: f64) -> Option<CMat> {
    let n = z.n();
    if n < 2 {
        return None;
    }
    let mut rng = seeded(0x1f_5eed);
    let mut best: Option<CMat> = None;
    let consider = |q: CMat, best: &mut Option<CMat>| {
        if q.ncols() == 0 || q.ncols() >= n || invariance_defect(z, &q) > tol {
            return;
        }
        if best.as_ref().is_none_or(|b| q.ncols() < b.ncols()) {
            *best = Some(q);
        }
    };
    for (tuple, dual) in [(z.clone(), false), (z.adjoint(), true)] {
        for v in search_vectors(&tuple, &mut rng) {
            let q = cyclic_subspace(&tuple, &v);
            if q.ncols() == 0 || q.ncols() >= n {
                continue;
            }
            let q = if dual { null_space(&q.adjoint(), RANK_TOL) } else { q };
            consider(q, &mut best);
        }
    }
    best
}

fn search_vectors<R: Rng>(z: &MatTuple, rng: &mut R) -> Vec<nalgebra::DVector<Complex64>> {
    let n = z.n();
    let mut out = Vec::new();
    for _ in 0..3 {
        let mut a = CMat::zeros(n, n);
        for zi in z.mats() {
            a += zi * standard_complex_normal(rng);
            for zj in z.mats() {
                a += zi * zj * (standard_complex_normal(rng) * 0.5);
            }
        }
        for lambda in eigenvalues(&a) {
            out.push(eigenvector(&a, lambda));
        }
    }
    for _ in 0..2 {
        out.push(nalgebra::DVector::from_fn(n, |_, _| standard_complex_normal(rng)));
    }
    out
}

/// A random point of `X_k`: a block upper triangular tuple (blocks `k` and
/// `n − k`) conjugated by a random invertible matrix.
pub fn sample_xk(d: usize, n: usize, k: usize, seed: u64) -> Result<MatTuple> {
    check_stratum(d, n, k)?;
    let mut rng = seeded(seed);
    let mats = (0..d)
        .map(|_| {
            let mut m = ginibre_matrix(n, &mut rng);
            mask_block_upper(&mut m, k);
            m
        })
        .collect();
    let s = random_invertible(n, &mut rng, 1e3);
    crate::mattuple::conjugate(&MatTuple::new(mats)?, &s)
}

fn check_stratum(d: usize, n: usize, k: usize) -> Result<()> {
    if d == 0 || k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "need d >= 1 and 1 <= k <= n-1, got d={d} n={n} k={k}"
        )));
    }
    Ok(())
}

fn mask_block_upper(m: &mut CMat, k: usize) {
    let n = m.nrows();
    for i in k..n {
        for j in 0..k {
            m[(i, j)] = Complex64::default();
        }
    }
}

/// `dn² − (d−1)k(n−k)`.
pub fn xk_dimension_formula(d: usize, n: usize, k: usize) -> usize {
    d * n * n - (d - 1) * k * (n - k)
}

/// Parametrization of `X_k` by block entries, a Grassmannian chart and a
/// conjugator chart:
/// `Zᵢ = (I + C) g(X) Bᵢ g(X)⁻¹ (I + C)⁻¹` with `g(X) = [[I, 0], [X, I]]`.
struct XkChart {
    d: usize,
    n: usize,
    k: usize,
}

impl XkChart {
    fn block_positions(&self) -> Vec<(usize, usize)> {
        let (n, k) = (self.n, self.k);
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !(i >= k && j < k))
            .collect()
    }

    /// Complex parameter count.
    fn len(&self) -> usize {
        self.d * self.block_positions().len() + (self.n - self.k) * self.k + self.n * self.n
    }

    fn eval(&self, params: &[Complex64]) -> Vec<Complex64> {
        let (n, k) = (self.n, self.k);
        let pos = self.block_positions();
        let mut it = params.iter().copied();
        let blocks: Vec<CMat> = (0..self.d)
            .map(|_| {
                let mut b = CMat::zeros(n, n);
                for &(i, j) in &pos {
                    b[(i, j)] = it.next().unwrap();
                }
                b
            })
            .collect();
        let mut g = identity(n);
        let mut g_inv = identity(n);
        for i in k..n {
            for j in 0..k {
                let x = it.next().unwrap();
                g[(i, j)] = x;
                g_inv[(i, j)] = -x;
            }
        }
        let mut c = identity(n);
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] += it.next().unwrap();
            }
        }
        let c_inv = c.clone().try_inverse().expect("chart stays near the identity");
        let outer = &c * &g;
        let outer_inv = &g_inv * &c_inv;
        blocks
            .iter()
            .flat_map(|b| (&outer * b * &outer_inv).transpose().iter().copied().collect::<Vec<_>>())
            .collect()
    }
}

/// Numerical dimension of `X_k` at a random point, as the complex rank of a
/// central-difference Jacobian (step `1e-5`) of the chart above.
///
/// Real and imaginary parts of each parameter are perturbed separately and
/// the real rank halved. A rank is accepted when it is even and separated
/// from the next singular value by a factor of at least `1e3`; otherwise the
/// point is resampled, up to five times.
pub fn xk_dimension_estimate(d: usize, n: usize, k: usize, seed: u64, tol: f64) -> Result<usize> {
    check_stratum(d, n, k)?;
    let chart = XkChart { d, n, k };
    let p = chart.len();
    let mut last = String::new();
    for attempt in 0..6u64 {
        let mut rng = stream(seed, attempt);
        let base_count = p - n * n;
        let mut base: Vec<Complex64> = (0..base_count).map(|_| standard_complex_normal(&mut rng)).collect();
        base.extend(std::iter::repeat_n(Complex64::default(), n * n));

        let h = 1e-5;
        let out_len = 2 * d * n * n;
        let mut jac = DMatrix::<f64>::zeros(out_len, 2 * p);
        for col in 0..2 * p {
            let dir = if col % 2 == 0 { c64(h, 0.0) } else { c64(0.0, h) };
            let mut plus = base.clone();
            let mut minus = base.clone();
            plus[col / 2] += dir;
            minus[col / 2] -= dir;
            let (fp, fm) = (chart.eval(&plus), chart.eval(&minus));
            for (r, (a, b)) in fp.iter().zip(&fm).enumerate() {
                let diff = (a - b) / (2.0 * h);
                jac[(2 * r, col)] = diff.re;
                jac[(2 * r + 1, col)] = diff.im;
            }
        }
        let mut sv: Vec<f64> = jac.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let top = sv[0];
        let rank = sv.iter().filter(|&&s| s > tol * top).count();
        let gap_ok = rank == sv.len() || (rank > 0 && sv[rank - 1] >= 1e3 * sv[rank]);
        if rank % 2 == 0 && gap_ok {
            return Ok(rank / 2);
        }
        last = format!("real rank {rank} with singular values {:?}", &sv[rank.saturating_sub(2)..(rank + 2).min(sv.len())]);
    }
    Err(Error::UnstableRank(last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det2, diag, matrix_unit, real_matrix};
    use crate::mattuple::{conjugate, random_tuple, random_tuple_with, Ensemble};

    #[test]
    fn word_span_examples() {
        let c = MatTuple::new(vec![
            diag(&[c64(1.0, 0.0), c64(2.0, 0.0)]),
            diag(&[c64(-1.0, 0.0), c64(3.0, 0.0)]),
        ])
        .unwrap();
        assert_eq!(word_span_dimension(&c), 2);
        let e = MatTuple::new(vec![matrix_unit(2, 1, 2), matrix_unit(2, 2, 1)]).unwrap();
        assert_eq!(word_span_dimension(&e), 4);
        let j = MatTuple::new(vec![real_matrix(2, &[0.0, 1.0, 0.0, 0.0])]).unwrap();
        assert_eq!(word_span_dimension(&j), 2);
    }

    #[test]
    fn irreducibility_examples() {
        for seed in 0..20 {
            let g = random_tuple(2, 2, Ensemble::Ginibre, seed).unwrap();
            assert!(is_irreducible(&g));
            assert!(det2(&crate::linalg::commutator(g.get(1), g.get(2))).norm() > 1e-8);
            let r = random_tuple(2, 3, Ensemble::Reducible(1), seed).unwrap();
            assert!(!is_irreducible(&r));
            let single = random_tuple(1, 3, Ensemble::Ginibre, seed).unwrap();
            assert!(!is_irreducible(&single));
        }
    }

    #[test]
    fn word_span_is_conjugation_invariant() {
        let mut rng = seeded(30);
        for ens in [Ensemble::Ginibre, Ensemble::Commuting, Ensemble::Reducible(1)] {
            let z = random_tuple_with(2, 3, ens, &mut rng).unwrap();
            let s = random_invertible(3, &mut rng, 1e3);
            assert_eq!(word_span_dimension(&z), word_span_dimension(&conjugate(&z, &s).unwrap()));
        }
    }

    #[test]
    fn invariant_subspace_of_diagonal_pair_is_an_axis() {
        let c = random_tuple(2, 2, Ensemble::Commuting, 1).unwrap();
        let q = find_invariant_subspace(&c, 1e-8).unwrap();
        assert_eq!(q.ncols(), 1);
        assert!(q[(0, 0)].norm() < 1e-10 || q[(1, 0)].norm() < 1e-10);
    }

    #[test]
    fn invariant_subspace_of_block_triangular_pair_is_e1() {
        let mut rng = seeded(5);
        let mats = (0..2)
            .map(|_| {
                let mut m = ginibre_matrix(2, &mut rng);
                mask_block_upper(&mut m, 1);
                m
            })
            .collect();
        let z = MatTuple::new(mats).unwrap();
        let q = find_invariant_subspace(&z, 1e-8).unwrap();
        assert_eq!(q.ncols(), 1);
        assert!((q[(0, 0)].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn irreducible_tuples_have_no_invariant_subspace() {
        for seed in 0..10 {
            let z = random_tuple(2, 3, Ensemble::Ginibre, seed).unwrap();
            assert!(is_irreducible(&z));
            assert!(find_invariant_subspace(&z, 1e-8).is_none());
        }
    }

    #[test]
    fn strata_samples() {
        for (d, n, k) in [(2, 2, 1), (2, 3, 2), (2, 3, 1), (3, 3, 1)] {
            for seed in 0..5 {
                let z = sample_xk(d, n, k, seed).unwrap();
                assert!(!is_irreducible(&z));
                let q = find_invariant_subspace(&z, 1e-8).expect("constructed reducible");
                assert_eq!(q.ncols(), k, "(d,n,k)=({d},{n},{k})");
            }
        }
        assert!(sample_xk(2, 2, 2, 0).is_err());
        assert!(sample_xk(2, 2, 0, 0).is_err());
    }

    #[test]
    fn stratum_dimension_matches_formula() {
        for (d, n, k) in [(2, 2, 1), (3, 2, 1), (2, 3, 1), (2, 3, 2)] {
            assert_eq!(xk_dimension_estimate(d, n, k, 1, 1e-6).unwrap(), xk_dimension_formula(d, n, k));
        }
        assert!(xk_dimension_estimate(2, 2, 2, 1, 1e-6).is_err());
    }
}
