use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A monomial in the free algebra: a finite sequence of 1-based generator
/// indices. The empty word is the identity monomial.
///
/// Words order by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: impl Into<Vec<u32>>) -> Self {
        Word(letters.into())
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u32) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest letter, or 0 for the empty word.
    pub fn max_letter(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Checks every letter lies in `1..=d`.
    pub fn check_alphabet(&self, d: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > d) {
            Some(&l) => Err(Error::GeneratorOutOfRange {
                index: l as u64,
                d,
                pos: 0,
            }),
            None => Ok(()),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Left rotation by `k` positions (modulo the length).
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.len());
        Word(v)
    }

    /// Is this word its own lexicographically least rotation?
    pub fn is_canonical_cycle(&self) -> bool {
        (1..self.len()).all(|k| self.0[..] <= self.rotate(k).0[..])
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// `X1^2*X2`, with `1` for the empty word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for run in self.0.chunk_by(|a, b| a == b) {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "X{}", run[0])?;
            if run.len() > 1 {
                write!(f, "^{}", run.len())?;
            }
        }
        Ok(())
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl From<&[u32]> for Word {
    fn from(v: &[u32]) -> Self {
        Word(v.to_vec())
    }
}

/// Lexicographically minimal rotation of a nonempty word.
///
/// Trace is invariant under cyclic rotation, so this is the dedup key for
/// trace factors.
pub fn canonical_cycle(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    let s = w.letters();
    let best = (1..n).fold(0usize, |best, k| {
        let cand = s[k..].iter().chain(&s[..k]);
        let cur = s[best..].iter().chain(&s[..best]);
        if cand.lt(cur) {
            k
        } else {
            best
        }
    });
    Ok(w.rotate(best))
}

/// All necklaces (canonical cycles) of exactly `len` letters over `1..=d`,
/// in lexicographic order.
///
/// Fredricksen–Kessler–Maiorana: walk the prenecklaces in lex order and keep
/// those whose period divides `len`.
pub fn necklaces(d: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if d == 0 || len == 0 {
        return out;
    }
    let mut a = vec![0u32; len + 1];
    gen_necklaces(1, 1, d as u32, len, &mut a, &mut out);
    out
}

fn gen_necklaces(t: usize, p: usize, k: u32, n: usize, a: &mut [u32], out: &mut Vec<Word>) {
    if t > n {
        if n % p == 0 {
            out.push(Word(a[1..=n].iter().map(|&x| x + 1).collect()));
        }
        return;
    }
    a[t] = a[t - p];
    gen_necklaces(t + 1, p, k, n, a, out);
    for j in (a[t - p] + 1)..k {
        a[t] = j;
        gen_necklaces(t + 1, t, k, n, a, out);
    }
}

/// All words of length `len` over `1..=d` in lexicographic order.
pub fn all_words(d: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u32>| {
                (1..=d as u32).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Word).collect()
}
