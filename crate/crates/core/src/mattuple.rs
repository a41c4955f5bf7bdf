//! Matrix tuples, the conjugation actions on them, random ensembles, and
//! evaluation of trace polynomials.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, identity, CMat, DEFAULT_COND_CAP};
use crate::ncpoly::{TraceFactor, TracePoly, Word};
use crate::rng::seeded;

/// A d-tuple of n×n complex matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct MatTuple {
    n: usize,
    mats: Vec<CMat>,
}

impl MatTuple {
    pub fn new(mats: Vec<CMat>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::InvalidParameter("a tuple needs d >= 1".into()));
        };
        let n = first.nrows();
        if n == 0 {
            return Err(Error::InvalidParameter("matrix size must be >= 1".into()));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {} is {}x{}, expected {n}x{n}",
                    i + 1,
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                return Err(Error::InvalidParameter(format!("matrix {} has a non-finite entry", i + 1)));
            }
        }
        Ok(MatTuple { n, mats })
    }

    pub fn zeros(d: usize, n: usize) -> Self {
        MatTuple {
            n,
            mats: vec![CMat::zeros(n, n); d],
        }
    }

    pub fn d(&self) -> usize {
        self.mats.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    /// The i-th matrix, 1-based.
    pub fn get(&self, i: usize) -> &CMat {
        &self.mats[i - 1]
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> MatTuple {
        MatTuple {
            n: self.n,
            mats: self.mats.iter().map(f).collect(),
        }
    }

    /// `self + t * other`, entrywise on each component.
    pub fn add_scaled(&self, other: &MatTuple, t: Complex64) -> Result<MatTuple> {
        self.check_shape(other)?;
        Ok(MatTuple {
            n: self.n,
            mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a + b * t).collect(),
        })
    }

    pub fn check_shape(&self, other: &MatTuple) -> Result<()> {
        if self.d() != other.d() || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "tuples have shapes (d={}, n={}) and (d={}, n={})",
                self.d(),
                self.n,
                other.d(),
                other.n
            )));
        }
        Ok(())
    }

    /// Largest Frobenius distance between corresponding components.
    pub fn distance(&self, other: &MatTuple) -> f64 {
        self.mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.mats.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    /// The tuple of adjoints.
    pub fn adjoint(&self) -> MatTuple {
        self.map(|m| m.adjoint())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tuple serializes")
    }
}

/// JSON layout: `{"d", "n", "matrices": [d][n][n][re, im]}`, row-major.
#[derive(Serialize, Deserialize)]
struct TupleRepr {
    d: usize,
    n: usize,
    matrices: Vec<MatrixRepr>,
}

/// Row-major `[re, im]` entries.
pub type MatrixRepr = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_repr(m: &CMat) -> MatrixRepr {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_repr(rows: &MatrixRepr) -> Result<CMat> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix must be square and nonempty".into()));
    }
    Ok(CMat::from_row_iterator(
        n,
        n,
        rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)),
    ))
}

impl TryFrom<TupleRepr> for MatTuple {
    type Error = Error;

    fn try_from(r: TupleRepr) -> Result<Self> {
        if r.matrices.len() != r.d {
            return Err(Error::DimensionMismatch(format!(
                "d = {} but {} matrices given",
                r.d,
                r.matrices.len()
            )));
        }
        let mats = r.matrices.iter().map(matrix_from_repr).collect::<Result<Vec<_>>>()?;
        let t = MatTuple::new(mats)?;
        if t.n != r.n {
            return Err(Error::DimensionMismatch(format!("n = {} but matrices are {}x{}", r.n, t.n, t.n)));
        }
        Ok(t)
    }
}

impl From<MatTuple> for TupleRepr {
    fn from(t: MatTuple) -> Self {
        TupleRepr {
            d: t.d(),
            n: t.n,
            matrices: t.mats.iter().map(matrix_to_repr).collect(),
        }
    }
}

/// A point `(z, A)` of the product of tuples and matrices; its class under
/// simultaneous conjugation is a point of the associated matrix bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiberRepr", into = "FiberRepr")]
pub struct FiberPoint {
    base: MatTuple,
    value: CMat,
}

impl FiberPoint {
    pub fn new(base: MatTuple, value: CMat) -> Result<Self> {
        if value.nrows() != base.n() || value.ncols() != base.n() {
            return Err(Error::DimensionMismatch(format!(
                "fiber value is {}x{}, base has n = {}",
                value.nrows(),
                value.ncols(),
                base.n()
            )));
        }
        Ok(FiberPoint { base, value })
    }

    pub fn base(&self) -> &MatTuple {
        &self.base
    }

    pub fn value(&self) -> &CMat {
        &self.value
    }

    /// The right action `(z, A)·s = (s⁻¹zs, s⁻¹As)`.
    pub fn act(&self, s: &CMat) -> Result<FiberPoint> {
        let inv = checked_inverse(s, DEFAULT_COND_CAP)?;
        Ok(FiberPoint {
            base: conjugate_with_inverse(&self.base, s, &inv),
            value: &inv * &self.value * s,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FiberRepr {
    base: MatTuple,
    value: MatrixRepr,
}

impl TryFrom<FiberRepr> for FiberPoint {
    type Error = Error;

    fn try_from(r: FiberRepr) -> Result<Self> {
        FiberPoint::new(r.base, matrix_from_repr(&r.value)?)
    }
}

impl From<FiberPoint> for FiberRepr {
    fn from(f: FiberPoint) -> Self {
        FiberRepr {
            base: f.base,
            value: matrix_to_repr(&f.value),
        }
    }
}

/// Something that maps a tuple to an n×n matrix: a trace polynomial or any
/// black-box closure.
pub trait MatrixMap {
    fn apply(&self, z: &MatTuple) -> Result<CMat>;
}

impl MatrixMap for TracePoly {
    fn apply(&self, z: &MatTuple) -> Result<CMat> {
        evaluate(self, z)
    }
}

impl<F: Fn(&MatTuple) -> CMat + ?Sized> MatrixMap for F {
    fn apply(&self, z: &MatTuple) -> Result<CMat> {
        Ok(self(z))
    }
}

/// Word products evaluated at one tuple, with every prefix memoized.
struct WordCache<'a> {
    z: &'a MatTuple,
    products: HashMap<Vec<u32>, CMat>,
}

impl<'a> WordCache<'a> {
    fn new(z: &'a MatTuple) -> Self {
        WordCache {
            z,
            products: HashMap::new(),
        }
    }

    fn product(&mut self, letters: &[u32]) -> CMat {
        if letters.is_empty() {
            return identity(self.z.n());
        }
        if let Some(m) = self.products.get(letters) {
            return m.clone();
        }
        let (head, last) = letters.split_at(letters.len() - 1);
        let m = self.product(head) * self.z.get(last[0] as usize);
        self.products.insert(letters.to_vec(), m.clone());
        m
    }

    fn trace_factor(&mut self, t: &TraceFactor) -> Complex64 {
        let n = self.z.n() as f64;
        match t {
            TraceFactor::Dim => Complex64::new(n, 0.0),
            TraceFactor::Trace(w) => self.product(w.letters()).trace(),
            TraceFactor::NormTrace(w) => self.product(w.letters()).trace() / n,
        }
    }
}

/// Evaluates `p` at `z`: words become matrix products, trace factors
/// scalars, and pure-scalar polynomials return a multiple of the identity.
pub fn evaluate(p: &TracePoly, z: &MatTuple) -> Result<CMat> {
    Ok(evaluate_with_scale(p, z)?.0)
}

/// Like [`evaluate`], also returning the largest Frobenius norm of a single
/// term, the natural size for rounding error in the sum.
pub fn evaluate_with_scale(p: &TracePoly, z: &MatTuple) -> Result<(CMat, f64)> {
    if p.d() != z.d() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial has d = {}, tuple has d = {}",
            p.d(),
            z.d()
        )));
    }
    let mut cache = WordCache::new(z);
    let mut out = CMat::zeros(z.n(), z.n());
    let mut scale = 0.0f64;
    for (m, c) in p.terms() {
        let scalar = m
            .traces()
            .iter()
            .fold(*c, |acc, t| acc * cache.trace_factor(t));
        let term = cache.product(m.word().letters()) * scalar;
        scale = scale.max(term.norm());
        out += term;
    }
    Ok((out, scale))
}

/// The scalar value of a pure-scalar polynomial at `z`.
pub fn evaluate_scalar(p: &TracePoly, z: &MatTuple) -> Result<Complex64> {
    if !p.is_pure_scalar() {
        return Err(Error::NotPureScalar);
    }
    let m = evaluate(p, z)?;
    Ok(m[(0, 0)])
}

/// Matrix product of a word at `z`.
pub fn word_value(w: &Word, z: &MatTuple) -> CMat {
    WordCache::new(z).product(w.letters())
}

/// `(s⁻¹Z₁s, …, s⁻¹Z_d s)`, refusing singular or ill-conditioned `s`.
pub fn conjugate(z: &MatTuple, s: &CMat) -> Result<MatTuple> {
    conjugate_capped(z, s, DEFAULT_COND_CAP)
}

pub fn conjugate_capped(z: &MatTuple, s: &CMat, cond_cap: f64) -> Result<MatTuple> {
    if s.nrows() != z.n() || s.ncols() != z.n() {
        return Err(Error::DimensionMismatch(format!(
            "conjugator is {}x{}, tuple has n = {}",
            s.nrows(),
            s.ncols(),
            z.n()
        )));
    }
    let inv = checked_inverse(s, cond_cap)?;
    Ok(conjugate_with_inverse(z, s, &inv))
}

pub(crate) fn conjugate_with_inverse(z: &MatTuple, s: &CMat, s_inv: &CMat) -> MatTuple {
    z.map(|m| s_inv * m * s)
}

/// Which contraction defines the matrix-disc norm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Contraction {
    /// `Σ Zᵢ Zᵢ*`
    #[default]
    Row,
    /// `Σ Zᵢ* Zᵢ`
    Column,
}

/// Largest eigenvalue of `Σ Zᵢ Zᵢ*`.
pub fn op_norm(z: &MatTuple) -> f64 {
    op_norm_with(z, Contraction::Row)
}

pub fn op_norm_with(z: &MatTuple, c: Contraction) -> f64 {
    let n = z.n();
    let gram = z.mats().iter().fold(CMat::zeros(n, n), |acc, m| match c {
        Contraction::Row => acc + m * m.adjoint(),
        Contraction::Column => acc + m.adjoint() * m,
    });
    crate::linalg::singular_values(&gram).first().copied().unwrap_or(0.0)
}

pub fn in_disc(z: &MatTuple) -> bool {
    op_norm(z) < 1.0
}

/// Random tuple distributions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    /// i.i.d. standard complex Gaussian entries.
    Ginibre,
    /// Ginibre rescaled so that `op_norm` is uniform in (0, 1).
    Disc,
    /// Simultaneously diagonal.
    Commuting,
    /// A common k-dimensional invariant subspace: block upper triangular,
    /// then conjugated by a Haar unitary.
    Reducible(usize),
}

pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    CMat::from_fn(n, n, |_, _| standard_complex_normal(rng))
}

pub fn random_tuple(d: usize, n: usize, ensemble: Ensemble, seed: u64) -> Result<MatTuple> {
    random_tuple_with(d, n, ensemble, &mut seeded(seed))
}

pub fn random_tuple_with<R: Rng + ?Sized>(
    d: usize,
    n: usize,
    ensemble: Ensemble,
    rng: &mut R,
) -> Result<MatTuple> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("need d >= 1 and n >= 1, got d={d} n={n}")));
    }
    let ginibre = |rng: &mut R| MatTuple {
        n,
        mats: (0..d).map(|_| ginibre_matrix(n, rng)).collect(),
    };
    match ensemble {
        Ensemble::Ginibre => Ok(ginibre(rng)),
        Ensemble::Disc => {
            let z = ginibre(rng);
            let target: f64 = Open01.sample(rng);
            let scale = (target / op_norm(&z)).sqrt();
            Ok(z.map(|m| m * Complex64::new(scale, 0.0)))
        }
        Ensemble::Commuting => Ok(MatTuple {
            n,
            mats: (0..d)
                .map(|_| {
                    let diag: Vec<Complex64> = (0..n).map(|_| standard_complex_normal(rng)).collect();
                    crate::linalg::diag(&diag)
                })
                .collect(),
        }),
        Ensemble::Reducible(k) => {
            if k == 0 || k >= n {
                return Err(Error::InvalidParameter(format!(
                    "reducible(k) needs 1 <= k <= n-1, got k={k} n={n}"
                )));
            }
            let mut z = ginibre(rng);
            for m in &mut z.mats {
                for i in k..n {
                    for j in 0..k {
                        m[(i, j)] = Complex64::default();
                    }
                }
            }
            let u = haar_unitary_with(n, rng);
            Ok(conjugate_with_inverse(&z, &u, &u.adjoint()))
        }
    }
}

/// A Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary(n: usize, seed: u64) -> CMat {
    haar_unitary_with(n, &mut seeded(seed))
}

pub fn haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = ginibre_matrix(n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// A Ginibre matrix, which is invertible with probability one; redrawn in
/// the unlikely case its condition number exceeds `cond_cap`.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R, cond_cap: f64) -> CMat {
    loop {
        let s = ginibre_matrix(n, rng);
        if crate::linalg::condition_number(&s) <= cond_cap {
            return s;
        }
    }
}
