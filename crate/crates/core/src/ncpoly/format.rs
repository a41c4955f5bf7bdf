use std::fmt::{self, Write as _};

use num_complex::Complex64;

use super::poly::{Monomial, TraceFactor, TracePoly};
use super::word::Word;

/// Prints `p` in the grammar accepted by
/// [`parse_expression`](super::parse_expression), terms in monomial order.
///
/// Coefficients are written with the shortest decimal that round-trips, so
/// parsing the output reproduces `p` bit for bit.
pub fn format_expression(p: &TracePoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let negative = c.re < 0.0 || (c.re == 0.0 && c.im < 0.0);
        let mag = if negative { -*c } else { *c };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        write_term(&mut out, m, mag).expect("writing to a String");
    }
    out
}

fn write_term(out: &mut String, m: &Monomial, c: Complex64) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    let unit = c == Complex64::new(1.0, 0.0);
    if !unit || m.is_constant() {
        factors.push(coefficient(c));
    }
    let traces = m.traces();
    let mut i = 0;
    while i < traces.len() {
        let run = traces[i..].iter().take_while(|t| **t == traces[i]).count();
        factors.push(powered(trace_factor(&traces[i]), run));
        i += run;
    }
    if !m.word().is_empty() {
        factors.push(word_product(m.word()));
    }
    write!(out, "{}", factors.join("*"))
}

fn coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("({}-{}i)", c.re, -c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

fn trace_factor(t: &TraceFactor) -> String {
    match t {
        TraceFactor::Dim => "tr(1)".to_string(),
        TraceFactor::Trace(w) => format!("tr({})", word_product(w)),
        TraceFactor::NormTrace(w) => format!("ntr({})", word_product(w)),
    }
}

fn powered(base: String, e: usize) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// `X1^2*X2`-style product for a nonempty word.
fn word_product(w: &Word) -> String {
    let letters = w.letters();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let run = letters[i..].iter().take_while(|&&l| l == letters[i]).count();
        parts.push(powered(format!("X{}", letters[i]), run));
        i += run;
    }
    parts.join("*")
}

impl fmt::Display for TracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_expression(self))
    }
}
