//! Polynomial invariants of simultaneous conjugation and the quotient map
//! they define.
//!
//! The invariant ring of d-tuples of n×n matrices is generated by traces of
//! words of length at most `2ⁿ − 1`; one generator per necklace. Evaluating
//! the generators gives invariant coordinates of a tuple, which separate
//! conjugation orbits of irreducible tuples.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, condition_number, det2, null_space, singular_values, CMat, DEFAULT_COND_CAP,
};
use crate::mattuple::{word_value, MatTuple};
use crate::ncpoly::{format_expression, necklaces, Monomial, TraceFactor, TracePoly, Word};

/// Default relative singular-value cutoff for numerical ranks.
pub const RANK_TOL: f64 = 1e-8;

/// Trace generators `tr(w)`, one per necklace `w` of length `1..=2ⁿ−1`,
/// ordered by (length, lex).
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorList {
    d: usize,
    n: usize,
    cycles: Vec<Word>,
}

impl GeneratorList {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycles(&self) -> &[Word] {
        &self.cycles
    }

    /// The generators as trace polynomials.
    pub fn polys(&self) -> Vec<TracePoly> {
        self.cycles
            .iter()
            .map(|w| {
                TracePoly::from_terms(
                    self.d,
                    [(Monomial::new(vec![TraceFactor::Trace(w.clone())], Word::empty()), c64(1.0, 0.0))],
                )
                .expect("necklace letters are in range")
            })
            .collect()
    }

    /// Generators in the expression grammar, e.g. `tr(X1*X2)`.
    pub fn to_strings(&self) -> Vec<String> {
        self.polys().iter().map(format_expression).collect()
    }
}

impl Serialize for GeneratorList {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

pub fn max_generator_length(n: usize) -> usize {
    (1usize << n.min(usize::BITS as usize - 1)) - 1
}

pub fn enumerate_trace_generators(d: usize, n: usize) -> GeneratorList {
    let cycles = (1..=max_generator_length(n)).flat_map(|len| necklaces(d, len)).collect();
    GeneratorList { d, n, cycles }
}

/// Values of the generators at a tuple, aligned with its [`GeneratorList`].
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCoords(pub Vec<Complex64>);

impl InvariantCoords {
    /// Largest entrywise difference, relative to `1 + max |coordinate|`.
    pub fn relative_distance(&self, other: &InvariantCoords) -> f64 {
        let scale = self
            .0
            .iter()
            .chain(&other.0)
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let diff = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        diff / (1.0 + scale)
    }
}

impl Serialize for InvariantCoords {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for InvariantCoords {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(InvariantCoords(v.into_iter().map(|[re, im]| c64(re, im)).collect()))
    }
}

fn check_generators(z: &MatTuple, g: &GeneratorList) -> Result<()> {
    if z.d() != g.d || z.n() != g.n {
        return Err(Error::DimensionMismatch(format!(
            "tuple is (d={}, n={}), generators are for (d={}, n={})",
            z.d(),
            z.n(),
            g.d,
            g.n
        )));
    }
    Ok(())
}

/// The image of `z` under the quotient map, in generator coordinates.
pub fn quotient_coords(z: &MatTuple, g: &GeneratorList) -> Result<InvariantCoords> {
    check_generators(z, g)?;
    // necklaces of one length share prefixes; a running product per prefix
    // would be faster, but generator counts are small at these sizes
    Ok(InvariantCoords(
        g.cycles.iter().map(|w| word_value(w, z).trace()).collect(),
    ))
}

/// The explicit chart `(tr Z₁, tr Z₂, det Z₁, det Z₂, tr Z₁Z₂)` of the
/// quotient for pairs of 2×2 matrices.
pub fn coords22(z: &MatTuple) -> Result<[Complex64; 5]> {
    if z.d() != 2 || z.n() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "coords22 needs d = n = 2, got d={} n={}",
            z.d(),
            z.n()
        )));
    }
    let (a, b) = (z.get(1), z.get(2));
    Ok([a.trace(), b.trace(), det2(a), det2(b), (a * b).trace()])
}

/// Outcome of solving `Zᵢ S = S Wᵢ` for all i.
#[derive(Clone, Debug)]
pub struct Transport {
    /// Dimension of the numerical solution space.
    pub null_dim: usize,
    /// The normalized conjugator, when the solution space is a line spanned
    /// by an invertible matrix meeting the residual tolerance.
    pub conjugator: Option<CMat>,
    /// `maxᵢ ‖Zᵢ S − S Wᵢ‖` for the candidate, if one was formed.
    pub residual: Option<f64>,
}

/// Finds `S` with `conjugate(z, S) ≈ w`, i.e. `Zᵢ S = S Wᵢ`.
///
/// `S` is normalized to unit Frobenius norm with its first nonzero entry
/// (row-major) real and positive. Returns `None` unless the solution space is
/// one-dimensional with an invertible representative whose residual is at
/// most `tol`.
pub fn similarity_transport(z: &MatTuple, w: &MatTuple, tol: f64) -> Result<Option<CMat>> {
    Ok(similarity_transport_report(z, w, tol)?.conjugator)
}

pub fn similarity_transport_report(z: &MatTuple, w: &MatTuple, tol: f64) -> Result<Transport> {
    z.check_shape(w)?;
    let n = z.n();
    let nn = n * n;
    // row-major vec: vec(A S) = (A ⊗ I) vec S, vec(S B) = (I ⊗ Bᵀ) vec S
    let mut system = CMat::zeros(z.d() * nn, nn);
    for (k, (a, b)) in z.mats().iter().zip(w.mats()).enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = k * nn + i * n + j;
                for l in 0..n {
                    system[(row, l * n + j)] += a[(i, l)];
                    system[(row, i * n + l)] -= b[(l, j)];
                }
            }
        }
    }
    let ns = null_space(&system, RANK_TOL);
    let null_dim = ns.ncols();
    if null_dim != 1 {
        return Ok(Transport {
            null_dim,
            conjugator: None,
            residual: None,
        });
    }
    let entries: Vec<Complex64> = ns.column(0).iter().copied().collect();
    let mut s = CMat::from_row_slice(n, n, &entries);
    normalize_conjugator(&mut s);
    let residual = z
        .mats()
        .iter()
        .zip(w.mats())
        .map(|(a, b)| (a * &s - &s * b).norm())
        .fold(0.0, f64::max);
    let ok = residual <= tol && condition_number(&s) <= DEFAULT_COND_CAP;
    Ok(Transport {
        null_dim,
        conjugator: ok.then_some(s),
        residual: Some(residual),
    })
}

fn normalize_conjugator(s: &mut CMat) {
    let norm = s.norm();
    if norm == 0.0 {
        return;
    }
    *s /= c64(norm, 0.0);
    let cutoff = 1e-12;
    let first = s.transpose().iter().copied().find(|x| x.norm() > cutoff);
    if let Some(x) = first {
        let phase = x.conj() / x.norm();
        *s *= phase;
    }
}

/// How the Jacobian of the quotient map is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianMethod {
    /// Cyclic derivatives of trace monomials.
    Analytic,
    /// Central differences along each matrix entry.
    FiniteDifference,
}

/// Complex Jacobian of the coordinate map: one row per generator, one column
/// per entry `(i, a, b)` at index `i·n² + a·n + b` (i 0-based).
pub fn coords_jacobian(z: &MatTuple, g: &GeneratorList, method: JacobianMethod) -> Result<CMat> {
    check_generators(z, g)?;
    let n = z.n();
    let cols = z.d() * n * n;
    let mut jac = CMat::zeros(g.len(), cols);
    match method {
        JacobianMethod::Analytic => {
            // ∂ tr(A₁⋯A_L) / ∂(A_p)_{ab} = (A_{p+1}⋯A_L A₁⋯A_{p−1})_{ba}
            for (r, w) in g.cycles.iter().enumerate() {
                let letters = w.letters();
                for p in 0..letters.len() {
                    let rest: Vec<u32> = letters[p + 1..].iter().chain(&letters[..p]).copied().collect();
                    let m = word_value(&Word::new(rest), z);
                    let base = (letters[p] as usize - 1) * n * n;
                    for a in 0..n {
                        for b in 0..n {
                            jac[(r, base + a * n + b)] += m[(b, a)];
                        }
                    }
                }
            }
        }
        JacobianMethod::FiniteDifference => {
            let h = 1e-5 * (1.0 + z.mats().iter().flat_map(|m| m.iter()).map(|x| x.norm()).fold(0.0, f64::max));
            for col in 0..cols {
                let (i, ab) = (col / (n * n), col % (n * n));
                let (a, b) = (ab / n, ab % n);
                let bump = |t: f64| {
                    let mut mats = z.mats().to_vec();
                    mats[i][(a, b)] += c64(t, 0.0);
                    MatTuple::new(mats).expect("same shape")
                };
                let plus = bump(h);
                let minus = bump(-h);
                for (r, w) in g.cycles.iter().enumerate() {
                    let df = word_value(w, &plus).trace() - word_value(w, &minus).trace();
                    jac[(r, col)] = df / c64(2.0 * h, 0.0);
                }
            }
        }
    }
    Ok(jac)
}

/// Numerical rank of the quotient-map Jacobian at `z`.
///
/// Rows are scaled to unit norm first; rank is unchanged in exact arithmetic
/// and long trace words no longer swamp short ones.
pub fn coords_jacobian_rank(
    z: &MatTuple,
    g: &GeneratorList,
    tol: f64,
    method: JacobianMethod,
) -> Result<usize> {
    let mut jac = coords_jacobian(z, g, method)?;
    for mut row in jac.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= c64(norm, 0.0);
        }
    }
    let sv = singular_values(&jac);
    let top = sv.first().copied().unwrap_or(0.0);
    Ok(sv.iter().filter(|&&s| top > 0.0 && s > tol * top).count())
}

/// `(d − 1)n² + 1`, the dimension of the quotient for `d ≥ 2`.
pub fn expected_quotient_dimension(d: usize, n: usize) -> usize {
    (d - 1) * n * n + 1
}
