use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;

use super::word::{canonical_cycle, Word};
use crate::error::{Error, Result};

/// A scalar factor of a trace-algebra term.
///
/// `Trace` is the unnormalized matrix trace of a cyclic word, `NormTrace` the
/// normalized trace (trace divided by the matrix size), and `Dim` the matrix
/// size itself, which is what the trace of the identity evaluates to.
/// Both `n`-dependent forms are resolved only at evaluation time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TraceFactor {
    Dim,
    Trace(Word),
    NormTrace(Word),
}

impl TraceFactor {
    /// `tr(w)`; the empty word gives `Dim`.
    pub fn trace(w: &Word) -> TraceFactor {
        match canonical_cycle(w) {
            Ok(c) => TraceFactor::Trace(c),
            Err(_) => TraceFactor::Dim,
        }
    }

    /// `ntr(w)`; `None` for the empty word since `ntr(1) = 1`.
    pub fn norm_trace(w: &Word) -> Option<TraceFactor> {
        canonical_cycle(w).ok().map(TraceFactor::NormTrace)
    }

    pub fn cycle(&self) -> Option<&Word> {
        match self {
            TraceFactor::Dim => None,
            TraceFactor::Trace(w) | TraceFactor::NormTrace(w) => Some(w),
        }
    }

    pub fn degree(&self) -> usize {
        self.cycle().map_or(0, Word::len)
    }

    fn kind_rank(&self) -> u8 {
        match self {
            TraceFactor::Dim => 0,
            TraceFactor::Trace(_) => 1,
            TraceFactor::NormTrace(_) => 2,
        }
    }
}

impl PartialOrd for TraceFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TraceFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        let empty = Word::empty();
        let a = self.cycle().unwrap_or(&empty);
        let b = other.cycle().unwrap_or(&empty);
        a.cmp(b).then_with(|| self.kind_rank().cmp(&other.kind_rank()))
    }
}

/// The key of one term: a sorted multiset of trace factors and a plain word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    traces: Vec<TraceFactor>,
    word: Word,
}

impl Monomial {
    pub fn new(mut traces: Vec<TraceFactor>, word: Word) -> Self {
        traces.sort();
        Monomial { traces, word }
    }

    pub fn one() -> Self {
        Monomial {
            traces: Vec::new(),
            word: Word::empty(),
        }
    }

    pub fn traces(&self) -> &[TraceFactor] {
        &self.traces
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// No plain word: the term is scalar-valued.
    pub fn is_scalar(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.traces.is_empty() && self.word.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.word.len() + self.traces.iter().map(TraceFactor::degree).sum::<usize>()
    }

    fn max_letter(&self) -> u32 {
        self.traces
            .iter()
            .filter_map(TraceFactor::cycle)
            .map(Word::max_letter)
            .chain(std::iter::once(self.word.max_letter()))
            .max()
            .unwrap_or(0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut traces = Vec::with_capacity(self.traces.len() + other.traces.len());
        traces.extend_from_slice(&self.traces);
        traces.extend_from_slice(&other.traces);
        Monomial::new(traces, self.word.concat(&other.word))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.traces
            .len()
            .cmp(&other.traces.len())
            .then_with(|| self.traces.cmp(&other.traces))
            .then_with(|| self.word.cmp(&other.word))
    }
}

/// An element of the trace algebra on `d` generators: a finite sum of
/// complex coefficients times monomials. Stored coefficients are never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePoly {
    d: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

/// Maps `-0.0` to `0.0` so stored coefficients have a single bit pattern.
fn normalize_zero(c: Complex64) -> Complex64 {
    Complex64::new(c.re + 0.0, c.im + 0.0)
}

impl TracePoly {
    pub fn zero(d: usize) -> Self {
        TracePoly {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: usize) -> Self {
        Self::scalar(d, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(d: usize, c: Complex64) -> Self {
        let mut p = Self::zero(d);
        p.add_term(Monomial::one(), c);
        p
    }

    /// The coordinate `X_i` (1-based).
    pub fn var(d: usize, i: u32) -> Result<Self> {
        Self::word(d, Word::letter(i))
    }

    pub fn word(d: usize, w: Word) -> Result<Self> {
        w.check_alphabet(d)?;
        let mut p = Self::zero(d);
        p.add_term(Monomial::new(Vec::new(), w), Complex64::new(1.0, 0.0));
        Ok(p)
    }

    /// Builds a polynomial from explicit terms, canonicalizing trace cycles
    /// and merging duplicate keys.
    pub fn from_terms(
        d: usize,
        terms: impl IntoIterator<Item = (Monomial, Complex64)>,
    ) -> Result<Self> {
        let mut p = Self::zero(d);
        for (m, c) in terms {
            if m.max_letter() as usize > d || m.word.letters().contains(&0) {
                return Err(Error::GeneratorOutOfRange {
                    index: m.max_letter() as u64,
                    d,
                    pos: 0,
                });
            }
            let traces = m
                .traces
                .into_iter()
                .map(|t| match t {
                    TraceFactor::Dim => Ok(TraceFactor::Dim),
                    TraceFactor::Trace(w) => canonical_cycle(&w).map(TraceFactor::Trace),
                    TraceFactor::NormTrace(w) => canonical_cycle(&w).map(TraceFactor::NormTrace),
                })
                .collect::<Result<Vec<_>>>()?;
            p.add_term(Monomial::new(traces, m.word), c);
        }
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every term lacks a plain word, so the value is a scalar times `I`.
    pub fn is_pure_scalar(&self) -> bool {
        self.terms.keys().all(Monomial::is_scalar)
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.keys().any(Monomial::is_constant)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if c != Complex64::default() {
                    e.insert(normalize_zero(c));
                }
            }
            Entry::Occupied(mut e) => {
                let sum = *e.get() + c;
                if sum == Complex64::default() {
                    e.remove();
                } else {
                    *e.get_mut() = normalize_zero(sum);
                }
            }
        }
    }

    fn check_d(&self, other: &TracePoly) -> Result<()> {
        if self.d != other.d {
            return Err(Error::GeneratorCountMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TracePoly) -> Result<TracePoly> {
        self.check_d(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TracePoly) -> Result<TracePoly> {
        self.check_d(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -*c);
        }
        Ok(out)
    }

    /// Concatenates plain words, unions trace multisets and multiplies
    /// coefficients. Not commutative in the plain-word part.
    pub fn try_mul(&self, other: &TracePoly) -> Result<TracePoly> {
        self.check_d(other)?;
        let mut out = TracePoly::zero(self.d);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> TracePoly {
        let mut out = TracePoly::zero(self.d);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> TracePoly {
        let mut out = TracePoly::one(self.d);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Commutator `pq - qp`.
    pub fn try_commutator(&self, other: &TracePoly) -> Result<TracePoly> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Unnormalized trace; linear, with `tr(1) = n` kept as a `Dim` factor.
    pub fn trace(&self) -> TracePoly {
        let mut out = TracePoly::zero(self.d);
        for (m, c) in &self.terms {
            let mut traces = m.traces.clone();
            traces.push(TraceFactor::trace(&m.word));
            out.add_term(Monomial::new(traces, Word::empty()), *c);
        }
        out
    }

    /// Normalized trace, `ntr(1) = 1`.
    pub fn normalized_trace(&self) -> TracePoly {
        let mut out = TracePoly::zero(self.d);
        for (m, c) in &self.terms {
            let mut traces = m.traces.clone();
            traces.extend(TraceFactor::norm_trace(&m.word));
            out.add_term(Monomial::new(traces, Word::empty()), *c);
        }
        out
    }

    /// Term-by-term comparison with relative tolerance on coefficients.
    pub fn approx_eq(&self, other: &TracePoly, rel_tol: f64) -> bool {
        if self.d != other.d {
            return false;
        }
        let keys: std::collections::BTreeSet<&Monomial> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|m| {
            let a = self.coefficient(m);
            let b = other.coefficient(m);
            (a - b).norm() <= rel_tol * a.norm().max(b.norm())
        })
    }

    /// Bitwise equality of keys and coefficients.
    pub fn bit_eq(&self, other: &TracePoly) -> bool {
        self.d == other.d
            && self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|((ma, ca), (mb, cb))| {
                ma == mb && ca.re.to_bits() == cb.re.to_bits() && ca.im.to_bits() == cb.im.to_bits()
            })
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&TracePoly> for &TracePoly {
            type Output = TracePoly;

            /// Panics when generator counts differ; use the `try_` form to
            /// handle that case.
            fn $method(self, rhs: &TracePoly) -> TracePoly {
                self.$try(rhs).expect("generator counts differ")
            }
        }

        impl $trait<TracePoly> for TracePoly {
            type Output = TracePoly;

            fn $method(self, rhs: TracePoly) -> TracePoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &TracePoly {
    type Output = TracePoly;

    fn neg(self) -> TracePoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = normalize_zero(-*c);
        }
        out
    }
}

impl Neg for TracePoly {
    type Output = TracePoly;

    fn neg(self) -> TracePoly {
        -&self
    }
}

/// A random element of the trace algebra of total degree at most
/// `max_degree`, built from random words and unnormalized trace factors.
/// Coefficients are small Gaussian integers when `integer_coeffs` is set.
pub fn random_trace_poly<R: Rng + ?Sized>(
    d: usize,
    max_degree: usize,
    num_terms: usize,
    integer_coeffs: bool,
    rng: &mut R,
) -> TracePoly {
    let mut terms = Vec::with_capacity(num_terms);
    let random_word = |len: usize, rng: &mut R| -> Word {
        (0..len).map(|_| rng.random_range(1..=d as u32)).collect::<Vec<_>>().into()
    };
    for _ in 0..num_terms {
        let deg = rng.random_range(0..=max_degree);
        let mut remaining = deg;
        let mut traces = Vec::new();
        while remaining > 0 && rng.random_bool(0.4) {
            let len = rng.random_range(1..=remaining);
            traces.push(TraceFactor::Trace(random_word(len, rng)));
            remaining -= len;
        }
        let word = random_word(remaining, rng);
        let c = if integer_coeffs {
            Complex64::new(
                rng.random_range(-3i32..=3) as f64,
                rng.random_range(-3i32..=3) as f64,
            )
        } else {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        terms.push((Monomial::new(traces, word), c));
    }
    TracePoly::from_terms(d, terms).expect("letters drawn from 1..=d")
}
