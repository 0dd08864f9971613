//! Symbolic 2x2 decomposition over words in three *-free generators: a
//! positive element `h` whose square follows the arcsine law on `[0, 1]`,
//! and two Haar unitaries `u`, `v`.
//!
//! Every element of the second matrix copy becomes a 2x2 matrix over formal
//! linear combinations of words in `h`-functions, `u` and `v`. Words are kept
//! in a normal form where adjacent functions of `h` fuse into a single
//! monomial `h^a (sqrt(1-h^2))^b` with `b <= 1` (higher powers of the square
//! root expand through `1 - h^2`), and adjacent powers of the same unitary
//! fuse additively. The normal form is what makes products of decompositions
//! collapse back to decompositions of matrix products.
//!
//! Traces are evaluated exactly: `h`-monomials through Wallis integrals of
//! the arcsine functional calculus, unitaries through vanishing of nonzero
//! powers, mixed words through the centering recursion that expresses
//! freeness of the three generators.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::matrixmodel;
use ndarray::Array2;
use ndarray_linalg::c64;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;

/// Practical bound on word length for exact trace evaluation.
pub const MAX_WORD_LEN: usize = 16;

const COEFF_PRUNE: f64 = 1e-14;

/// One letter of a word: a monomial function of `h`, or a power of one of
/// the Haar unitaries. In normal form `s_pow <= 1` and unitary powers are
/// nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `h^h_pow * sqrt(1-h^2)^s_pow`.
    H { h_pow: u32, s_pow: u32 },
    U { pow: i32 },
    V { pow: i32 },
}

impl Letter {
    fn adjoint(self) -> Letter {
        match self {
            Letter::H { .. } => self,
            Letter::U { pow } => Letter::U { pow: -pow },
            Letter::V { pow } => Letter::V { pow: -pow },
        }
    }
}

pub type Word = Vec<Letter>;

/// Formal complex linear combination of words in normal form.
#[derive(Debug, Clone, Default)]
pub struct WordExpr {
    terms: HashMap<Word, Complex64>,
}

fn push_fuse(word: &mut Word, letter: Letter) {
    match letter {
        Letter::H { h_pow: 0, s_pow: 0 } => return,
        Letter::U { pow: 0 } | Letter::V { pow: 0 } => return,
        _ => {}
    }
    match (word.last_mut(), letter) {
        (Some(Letter::H { h_pow, s_pow }), Letter::H { h_pow: a, s_pow: b }) => {
            *h_pow += a;
            *s_pow += b;
        }
        (Some(Letter::U { pow }), Letter::U { pow: p }) => {
            *pow += p;
            if *pow == 0 {
                word.pop();
            }
        }
        (Some(Letter::V { pow }), Letter::V { pow: p }) => {
            *pow += p;
            if *pow == 0 {
                word.pop();
            }
        }
        _ => word.push(letter),
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Expand every `sqrt(1-h^2)` power above 1 through `(1-h^2)^k` and refuse,
/// emitting the canonical terms of the word.
fn expand_canonical(word: Word, coeff: Complex64, out: &mut Vec<(Word, Complex64)>) {
    let position = word.iter().position(|l| matches!(l, Letter::H { s_pow, .. } if *s_pow >= 2));
    let Some(idx) = position else {
        out.push((word, coeff));
        return;
    };
    let Letter::H { h_pow, s_pow } = word[idx] else {
        unreachable!()
    };
    let k = s_pow / 2;
    let rem = s_pow % 2;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = coeff * sign * binomial(k, j);
        let replacement = Letter::H {
            h_pow: h_pow + 2 * j,
            s_pow: rem,
        };
        let mut rebuilt = Vec::with_capacity(word.len());
        for (m, &l) in word.iter().enumerate() {
            push_fuse(&mut rebuilt, if m == idx { replacement } else { l });
        }
        expand_canonical(rebuilt, c, out);
    }
}

impl WordExpr {
    pub fn zero() -> Self {
        WordExpr::default()
    }

    pub fn one() -> Self {
        WordExpr::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        let mut e = WordExpr::default();
        if c != Complex64::new(0.0, 0.0) {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    /// Single-term expression from raw letters (normalized on entry).
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut e = WordExpr::default();
        e.accumulate(letters, Complex64::new(1.0, 0.0));
        e.prune();
        e
    }

    pub fn h() -> Self {
        Self::from_letters(&[Letter::H { h_pow: 1, s_pow: 0 }])
    }

    /// `sqrt(1 - h^2)`.
    pub fn s() -> Self {
        Self::from_letters(&[Letter::H { h_pow: 0, s_pow: 1 }])
    }

    pub fn h_squared() -> Self {
        Self::from_letters(&[Letter::H { h_pow: 2, s_pow: 0 }])
    }

    /// `1 - h^2` (a two-term expression in normal form).
    pub fn one_minus_h2() -> Self {
        Self::from_letters(&[Letter::H { h_pow: 0, s_pow: 2 }])
    }

    /// `h sqrt(1 - h^2)`.
    pub fn h_s() -> Self {
        Self::from_letters(&[Letter::H { h_pow: 1, s_pow: 1 }])
    }

    pub fn u() -> Self {
        Self::from_letters(&[Letter::U { pow: 1 }])
    }

    pub fn u_star() -> Self {
        Self::from_letters(&[Letter::U { pow: -1 }])
    }

    pub fn v() -> Self {
        Self::from_letters(&[Letter::V { pow: 1 }])
    }

    pub fn v_star() -> Self {
        Self::from_letters(&[Letter::V { pow: -1 }])
    }

    fn accumulate(&mut self, letters: &[Letter], coeff: Complex64) {
        let mut fused = Vec::with_capacity(letters.len());
        for &l in letters {
            push_fuse(&mut fused, l);
        }
        let mut canonical = Vec::new();
        expand_canonical(fused, coeff, &mut canonical);
        for (w, c) in canonical {
            let entry = self.terms.entry(w).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
    }

    fn prune(&mut self) {
        let max = self
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
            .max(1.0);
        self.terms.retain(|_, c| c.norm() > COEFF_PRUNE * max);
    }

    pub fn terms(&self) -> &HashMap<Word, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.norm() <= tol)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return WordExpr::zero();
        }
        WordExpr {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &WordExpr) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let entry = out.terms.entry(w.clone()).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &WordExpr) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &WordExpr) -> Self {
        let mut out = WordExpr::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut cat = w1.clone();
                cat.extend_from_slice(w2);
                out.accumulate(&cat, c1 * c2);
            }
        }
        out.prune();
        out
    }

    /// Reverse words, conjugate coefficients, invert unitary powers.
    pub fn adjoint(&self) -> Self {
        let mut out = WordExpr::default();
        for (w, c) in &self.terms {
            let rev: Vec<Letter> = w.iter().rev().map(|l| l.adjoint()).collect();
            out.accumulate(&rev, c.conj());
        }
        out.prune();
        out
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest coefficient norm of the difference with `other`.
    pub fn distance(&self, other: &WordExpr) -> f64 {
        self.sub(other)
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Word, &Complex64)> = self.terms.iter().collect();
        terms.sort_by_key(|(w, _)| (w.len(), format!("{w:?}")));
        for (i, (w, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for l in w.iter() {
                match l {
                    Letter::H { h_pow, s_pow } => {
                        if *h_pow == 1 {
                            write!(f, " h")?;
                        } else if *h_pow > 1 {
                            write!(f, " h^{h_pow}")?;
                        }
                        if *s_pow == 1 {
                            write!(f, " s")?;
                        } else if *s_pow > 1 {
                            write!(f, " s^{s_pow}")?;
                        }
                    }
                    Letter::U { pow } => write!(f, " {}", unitary_str("u", *pow))?,
                    Letter::V { pow } => write!(f, " {}", unitary_str("v", *pow))?,
                }
            }
        }
        Ok(())
    }
}

fn unitary_str(name: &str, pow: i32) -> String {
    match pow {
        1 => name.to_string(),
        -1 => format!("{name}*"),
        p if p > 0 => format!("{name}^{p}"),
        p => format!("{name}*^{}", -p),
    }
}

/// 2x2 matrix over word expressions.
#[derive(Debug, Clone)]
pub struct SymbolicMat2 {
    e: [[WordExpr; 2]; 2],
}

impl SymbolicMat2 {
    pub fn new(e: [[WordExpr; 2]; 2]) -> Self {
        SymbolicMat2 { e }
    }

    pub fn identity() -> Self {
        SymbolicMat2::new([
            [WordExpr::one(), WordExpr::zero()],
            [WordExpr::zero(), WordExpr::one()],
        ])
    }

    pub fn entry(&self, i: usize, j: usize) -> &WordExpr {
        &self.e[i][j]
    }

    pub fn mul(&self, other: &SymbolicMat2) -> SymbolicMat2 {
        let mut e: [[WordExpr; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] = self.e[i][0]
                    .mul(&other.e[0][j])
                    .add(&self.e[i][1].mul(&other.e[1][j]));
            }
        }
        SymbolicMat2::new(e)
    }

    pub fn add(&self, other: &SymbolicMat2) -> SymbolicMat2 {
        let mut e: [[WordExpr; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] = self.e[i][j].add(&other.e[i][j]);
            }
        }
        SymbolicMat2::new(e)
    }

    pub fn sub(&self, other: &SymbolicMat2) -> SymbolicMat2 {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> SymbolicMat2 {
        let mut e: [[WordExpr; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                e[i][j] = self.e[i][j].scale(c);
            }
        }
        SymbolicMat2::new(e)
    }

    /// Entrywise adjoint, transposed.
    pub fn adjoint(&self) -> SymbolicMat2 {
        SymbolicMat2::new([
            [self.e[0][0].adjoint(), self.e[1][0].adjoint()],
            [self.e[0][1].adjoint(), self.e[1][1].adjoint()],
        ])
    }

    pub fn pow(&self, k: u32) -> SymbolicMat2 {
        let mut acc = SymbolicMat2::identity();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max_word_len(&self) -> usize {
        self.e
            .iter()
            .flatten()
            .map(WordExpr::max_word_len)
            .max()
            .unwrap_or(0)
    }
}

/// Express an element of the second matrix copy, with entries
/// `[[alpha, beta], [gamma, sigma]]`, as a 2x2 matrix over words in
/// `h`, `u`, `v` with respect to the matrix units of the first copy.
pub fn decompose(b: &Mat2) -> SymbolicMat2 {
    let alpha = b.entry(0, 0);
    let beta = b.entry(0, 1);
    let gamma = b.entry(1, 0);
    let sigma = b.entry(1, 1);
    let ad = alpha - sigma;

    let h = |h_pow: u32, s_pow: u32| Letter::H { h_pow, s_pow };
    let u = |pow: i32| Letter::U { pow };
    let v = |pow: i32| Letter::V { pow };

    let term = |letters: &[Letter], c: Complex64| WordExpr::from_letters(letters).scale(c);

    // b11 = sigma + (alpha - sigma) h^2 + gamma s v h + beta h v* s
    let b11 = WordExpr::scalar(sigma)
        .add(&term(&[h(2, 0)], ad))
        .add(&term(&[h(0, 1), v(1), h(1, 0)], gamma))
        .add(&term(&[h(1, 0), v(-1), h(0, 1)], beta));
    // b12 = (alpha - sigma) h s u + gamma s v s u - beta h v* h u
    let b12 = term(&[h(1, 1), u(1)], ad)
        .add(&term(&[h(0, 1), v(1), h(0, 1), u(1)], gamma))
        .add(&term(&[h(1, 0), v(-1), h(1, 0), u(1)], -beta));
    // b21 = (alpha - sigma) u* h s - gamma u* h v h + beta u* s v* s
    let b21 = term(&[u(-1), h(1, 1)], ad)
        .add(&term(&[u(-1), h(1, 0), v(1), h(1, 0)], -gamma))
        .add(&term(&[u(-1), h(0, 1), v(-1), h(0, 1)], beta));
    // b22 = alpha + (sigma - alpha) u* h^2 u - gamma u* h v s u - beta u* s v* h u
    let b22 = WordExpr::scalar(alpha)
        .add(&term(&[u(-1), h(2, 0), u(1)], -ad))
        .add(&term(&[u(-1), h(1, 0), v(1), h(0, 1), u(1)], -gamma))
        .add(&term(&[u(-1), h(0, 1), v(-1), h(1, 0), u(1)], -beta));

    SymbolicMat2::new([[b11, b12], [b21, b22]])
}

/// The two fixed conjugation matrices: the image of the first-copy unit
/// `E_11` (a projection, so the matrix is self-adjoint) and of `E_12`.
pub fn v1_conjugations() -> (SymbolicMat2, SymbolicMat2) {
    let h = |h_pow: u32, s_pow: u32| Letter::H { h_pow, s_pow };
    let u = |pow: i32| Letter::U { pow };
    let v = |pow: i32| Letter::V { pow };
    let one = |letters: &[Letter]| WordExpr::from_letters(letters);

    // [[h^2, h s u], [u* h s, u* (1-h^2) u]]
    let e11 = SymbolicMat2::new([
        [one(&[h(2, 0)]), one(&[h(1, 1), u(1)])],
        [
            one(&[u(-1), h(1, 1)]),
            one(&[u(-1), h(0, 2), u(1)]),
        ],
    ]);
    // [[h v* s, -h v* h u], [u* s v* s, -u* s v* h u]]
    let e12 = SymbolicMat2::new([
        [
            one(&[h(1, 0), v(-1), h(0, 1)]),
            one(&[h(1, 0), v(-1), h(1, 0), u(1)]).scale(Complex64::new(-1.0, 0.0)),
        ],
        [
            one(&[u(-1), h(0, 1), v(-1), h(0, 1)]),
            one(&[u(-1), h(0, 1), v(-1), h(1, 0), u(1)]).scale(Complex64::new(-1.0, 0.0)),
        ],
    ]);
    (e11, e12)
}

// ---------------------------------------------------------------------------
// Exact traces.

/// `(2/pi) int_0^{pi/2} sin^a cos^b` by the Wallis recurrence: the trace of
/// `h^a sqrt(1-h^2)^b` under the arcsine functional calculus.
pub fn tau_h_monomial(a: u32, b: u32) -> f64 {
    std::f64::consts::FRAC_2_PI * wallis(a, b)
}

fn wallis(a: u32, b: u32) -> f64 {
    if a >= 2 {
        (a - 1) as f64 / (a + b) as f64 * wallis(a - 2, b)
    } else if b >= 2 {
        (b - 1) as f64 / (a + b) as f64 * wallis(a, b - 2)
    } else {
        match (a, b) {
            (0, 0) => std::f64::consts::FRAC_PI_2,
            (1, 0) | (0, 1) => 1.0,
            (1, 1) => 0.5,
            _ => unreachable!(),
        }
    }
}

/// Internal letters for the centering recursion: polynomials in the
/// `h`-monomials (centering and merging leave the monomial class), powers of
/// `u`, powers of `v`.
#[derive(Clone, Debug)]
enum PolyLetter {
    H(Vec<((u32, u32), f64)>),
    U(i32),
    V(i32),
}

impl PolyLetter {
    fn tau(&self) -> f64 {
        match self {
            PolyLetter::H(poly) => poly
                .iter()
                .map(|&((a, b), c)| c * tau_h_monomial(a, b))
                .sum(),
            PolyLetter::U(_) | PolyLetter::V(_) => 0.0,
        }
    }

    fn scale_hint(&self) -> f64 {
        match self {
            PolyLetter::H(poly) => poly
                .iter()
                .map(|&((a, b), c)| (c * tau_h_monomial(a, b)).abs())
                .sum::<f64>()
                .max(1e-30),
            _ => 1.0,
        }
    }
}

fn poly_mul(p: &[((u32, u32), f64)], q: &[((u32, u32), f64)]) -> Vec<((u32, u32), f64)> {
    let mut acc: HashMap<(u32, u32), f64> = HashMap::new();
    for &((a1, b1), c1) in p {
        for &((a2, b2), c2) in q {
            *acc.entry((a1 + a2, b1 + b2)).or_insert(0.0) += c1 * c2;
        }
    }
    let mut out: Vec<((u32, u32), f64)> = acc.into_iter().filter(|&(_, c)| c != 0.0).collect();
    out.sort_by_key(|&(k, _)| k);
    out
}

/// Rebuild a word with fusion of adjacent same-algebra letters; returns a
/// scalar factor when letters collapse to multiples of the identity, `None`
/// when the product vanishes.
fn fuse_poly_word(letters: Vec<PolyLetter>) -> Option<(f64, Vec<PolyLetter>)> {
    let mut scalar = 1.0;
    let mut word: Vec<PolyLetter> = Vec::with_capacity(letters.len());
    for l in letters {
        let mut current = l;
        loop {
            // Fold scalar-only letters into the coefficient.
            match &current {
                PolyLetter::H(poly) => {
                    if poly.is_empty() {
                        return None;
                    }
                    if poly.len() == 1 && poly[0].0 == (0, 0) {
                        scalar *= poly[0].1;
                        if scalar == 0.0 {
                            return None;
                        }
                        break;
                    }
                }
                PolyLetter::U(0) | PolyLetter::V(0) => break,
                _ => {}
            }
            match (word.last(), &current) {
                (Some(PolyLetter::H(p)), PolyLetter::H(q)) => {
                    let merged = poly_mul(p, q);
                    word.pop();
                    current = PolyLetter::H(merged);
                }
                (Some(PolyLetter::U(p)), PolyLetter::U(q)) => {
                    let pow = p + q;
                    word.pop();
                    current = PolyLetter::U(pow);
                    if pow == 0 {
                        break;
                    }
                }
                (Some(PolyLetter::V(p)), PolyLetter::V(q)) => {
                    let pow = p + q;
                    word.pop();
                    current = PolyLetter::V(pow);
                    if pow == 0 {
                        break;
                    }
                }
                _ => {
                    word.push(current);
                    break;
                }
            }
        }
    }
    Some((scalar, word))
}

fn poly_key(word: &[PolyLetter], out: &mut Vec<u64>) {
    for l in word {
        match l {
            PolyLetter::H(poly) => {
                out.push(0);
                out.push(poly.len() as u64);
                for &((a, b), c) in poly {
                    out.push(((a as u64) << 32) | b as u64);
                    out.push(c.to_bits());
                }
            }
            PolyLetter::U(p) => {
                out.push(1);
                out.push(*p as i64 as u64);
            }
            PolyLetter::V(p) => {
                out.push(2);
                out.push(*p as i64 as u64);
            }
        }
    }
}

/// Centering recursion over an alternating word of letters from the three
/// free algebras: replace the first letter with nonvanishing trace by
/// `tau(g) + (g - tau(g))`; the scalar branch shortens the word (merging the
/// exposed neighbors), the centered branch advances, and a fully centered
/// alternating word has trace zero.
fn tau_word_rec(word: &[PolyLetter], memo: &mut HashMap<Vec<u64>, f64>) -> f64 {
    if word.is_empty() {
        return 1.0;
    }
    let pivot = word.iter().position(|l| {
        let t = l.tau();
        t.abs() > 1e-14 * l.scale_hint()
    });
    let Some(k) = pivot else {
        return 0.0;
    };
    let mut key = Vec::with_capacity(word.len() * 4);
    poly_key(word, &mut key);
    if let Some(&v) = memo.get(&key) {
        return v;
    }

    let c = word[k].tau();

    // Scalar branch: remove the letter, fuse the exposed neighbors.
    let mut removed: Vec<PolyLetter> = Vec::with_capacity(word.len() - 1);
    removed.extend_from_slice(&word[..k]);
    removed.extend_from_slice(&word[k + 1..]);
    let scalar_branch = match fuse_poly_word(removed) {
        Some((s, w)) => c * s * tau_word_rec(&w, memo),
        None => 0.0,
    };

    // Centered branch: subtract the trace from the letter.
    let centered_branch = match &word[k] {
        PolyLetter::H(poly) => {
            let mut centered = poly.clone();
            match centered.iter_mut().find(|(m, _)| *m == (0, 0)) {
                Some(entry) => entry.1 -= c,
                None => centered.push(((0, 0), -c)),
            }
            centered.sort_by_key(|&(m, _)| m);
            let mut replaced = word.to_vec();
            replaced[k] = PolyLetter::H(centered);
            tau_word_rec(&replaced, memo)
        }
        // Unitary letters with nonzero power are already centered.
        _ => unreachable!("unitary letters have zero trace"),
    };

    let value = scalar_branch + centered_branch;
    memo.insert(key, value);
    value
}

fn word_to_poly(word: &[Letter]) -> Vec<PolyLetter> {
    word.iter()
        .map(|l| match *l {
            Letter::H { h_pow, s_pow } => PolyLetter::H(vec![((h_pow, s_pow), 1.0)]),
            Letter::U { pow } => PolyLetter::U(pow),
            Letter::V { pow } => PolyLetter::V(pow),
        })
        .collect()
}

/// Exact trace of a word expression under the free-product trace.
pub fn tau_p(expr: &WordExpr) -> Result<Complex64> {
    if expr.max_word_len() > MAX_WORD_LEN {
        return Err(Error::Resource(format!(
            "word length {} exceeds the bound {MAX_WORD_LEN}",
            expr.max_word_len()
        )));
    }
    let mut memo = HashMap::new();
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, c) in expr.terms() {
        let poly = word_to_poly(w);
        let Some((s, fused)) = fuse_poly_word(poly) else {
            continue;
        };
        acc += c * s * tau_word_rec(&fused, &mut memo);
    }
    Ok(acc)
}

/// Trace on the 2x2-over-words algebra: half the sum of the diagonal traces.
pub fn symbolic_trace(m: &SymbolicMat2) -> Result<Complex64> {
    if m.max_word_len() > MAX_WORD_LEN {
        return Err(Error::Resource(format!(
            "word length {} exceeds the bound {MAX_WORD_LEN}",
            m.max_word_len()
        )));
    }
    Ok((tau_p(m.entry(0, 0))? + tau_p(m.entry(1, 1))?) * 0.5)
}

// ---------------------------------------------------------------------------
// Matrix-model realization.

/// Concrete `2N x 2N` matrix realizing a symbolic 2x2 matrix: `h` becomes an
/// i.i.d. diagonal sample of `|H|` with `H` arcsine-distributed on `[-1, 1]`,
/// `u` and `v` independent Haar unitaries of size `N`. Normalized traces of
/// words converge to the symbolic trace as `N` grows (asymptotic freeness of
/// the three families).
pub fn evaluate_matrix_model(m: &SymbolicMat2, n: usize, seed: u64) -> Array2<c64> {
    assert!(n >= 2, "matrix model needs N >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_diag: Vec<f64> = (0..n)
        .map(|_| {
            let q: f64 = rng.random();
            (std::f64::consts::PI * (q - 0.5)).sin().abs()
        })
        .collect();
    let u = matrixmodel::haar_unitary(n, &mut rng);
    let v = matrixmodel::haar_unitary(n, &mut rng);

    let h_values = |h_pow: u32, s_pow: u32| -> Vec<f64> {
        h_diag
            .iter()
            .map(|&hi| {
                hi.powi(h_pow as i32) * (1.0 - hi * hi).max(0.0).sqrt().powi(s_pow as i32)
            })
            .collect()
    };
    let eval_expr = |expr: &WordExpr| -> Array2<c64> {
        let mut acc = Array2::<c64>::zeros((n, n));
        for (w, c) in expr.terms() {
            // Right-multiplication by a diagonal letter is a column scaling;
            // a full product is only needed for unitary letters.
            let mut prod: Option<Array2<c64>> = None;
            for l in w {
                match *l {
                    Letter::H { h_pow, s_pow } => {
                        let d = h_values(h_pow, s_pow);
                        let mut m = prod.take().unwrap_or_else(|| Array2::eye(n));
                        for (j, &dj) in d.iter().enumerate() {
                            m.column_mut(j).mapv_inplace(|x| x * dj);
                        }
                        prod = Some(m);
                    }
                    Letter::U { pow } => {
                        let f = unitary_power(&u, pow);
                        prod = Some(match prod.take() {
                            Some(m) => m.dot(&f),
                            None => f,
                        });
                    }
                    Letter::V { pow } => {
                        let f = unitary_power(&v, pow);
                        prod = Some(match prod.take() {
                            Some(m) => m.dot(&f),
                            None => f,
                        });
                    }
                }
            }
            let prod = prod.unwrap_or_else(|| Array2::eye(n));
            acc = acc + prod.mapv(|x| x * c64::new(c.re, c.im));
        }
        acc
    };

    let mut out = Array2::<c64>::zeros((2 * n, 2 * n));
    for i in 0..2 {
        for j in 0..2 {
            let block = eval_expr(m.entry(i, j));
            out.slice_mut(ndarray::s![i * n..(i + 1) * n, j * n..(j + 1) * n])
                .assign(&block);
        }
    }
    out
}

fn unitary_power(u: &Array2<c64>, pow: i32) -> Array2<c64> {
    let base = if pow >= 0 {
        u.clone()
    } else {
        u.t().mapv(|x| x.conj())
    };
    let mut acc = base.clone();
    for _ in 1..pow.unsigned_abs() {
        acc = acc.dot(&base);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_mat(rng: &mut impl Rng) -> Mat2 {
        let mut e = [[c(0.0, 0.0); 2]; 2];
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x = c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
            }
        }
        Mat2::new(e)
    }

    fn expr_close(a: &WordExpr, b: &WordExpr, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn identity_decomposes_to_identity() {
        let d = decompose(&Mat2::identity());
        let id = SymbolicMat2::identity();
        for i in 0..2 {
            for j in 0..2 {
                assert!(expr_close(d.entry(i, j), id.entry(i, j), 1e-14));
            }
        }
    }

    #[test]
    fn normal_form_fuses_and_expands() {
        // u* (1-h^2) u = 1 - u* h^2 u.
        let lhs = WordExpr::u_star()
            .mul(&WordExpr::one_minus_h2())
            .mul(&WordExpr::u());
        let rhs = WordExpr::one().sub(
            &WordExpr::u_star()
                .mul(&WordExpr::h_squared())
                .mul(&WordExpr::u()),
        );
        assert!(expr_close(&lhs, &rhs, 1e-14));
        // s * s = 1 - h^2 and h s * h s = h^2 - h^4.
        assert!(expr_close(&WordExpr::s().mul(&WordExpr::s()), &WordExpr::one_minus_h2(), 1e-14));
        let hs2 = WordExpr::h_s().mul(&WordExpr::h_s());
        let expected = WordExpr::h_squared().sub(
            &WordExpr::h_squared().mul(&WordExpr::h_squared()),
        );
        assert!(expr_close(&hs2, &expected, 1e-14));
    }

    #[test]
    fn diagonal_and_upper_triangular_cases() {
        // beta = gamma = 0: off-diagonal words carry a single u.
        let d = decompose(&Mat2::diag(c(2.0, 0.0), c(0.5, 0.0)));
        let expected12 = WordExpr::h_s().mul(&WordExpr::u()).scale(c(1.5, 0.0));
        assert!(expr_close(d.entry(0, 1), &expected12, 1e-12));

        // alpha = sigma, gamma = 0: the (2,1) entry is beta u* s v* s.
        let b = Mat2::new([[c(1.0, 0.0), c(2.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        let d = decompose(&b);
        let expected21 = WordExpr::u_star()
            .mul(&WordExpr::s())
            .mul(&WordExpr::v_star())
            .mul(&WordExpr::s())
            .scale(c(2.0, 0.0));
        assert!(expr_close(d.entry(1, 0), &expected21, 1e-12));
    }

    #[test]
    fn conjugation_matrices_match_decompositions() {
        let (e11, e12) = v1_conjugations();
        let d11 = decompose(&Mat2::unit(0, 0));
        let d12 = decompose(&Mat2::unit(0, 1));
        for i in 0..2 {
            for j in 0..2 {
                assert!(expr_close(e11.entry(i, j), d11.entry(i, j), 1e-14));
                assert!(expr_close(e12.entry(i, j), d12.entry(i, j), 1e-14));
            }
        }
        // The projection image is self-adjoint.
        let adj = e11.adjoint();
        for i in 0..2 {
            for j in 0..2 {
                assert!(expr_close(adj.entry(i, j), e11.entry(i, j), 1e-14));
            }
        }
        // (1,1) entry of the projection image is h^2.
        assert!(expr_close(e11.entry(0, 0), &WordExpr::h_squared(), 1e-14));
    }

    #[test]
    fn wallis_traces() {
        assert_abs_diff_eq!(tau_h_monomial(2, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(tau_h_monomial(4, 0), 0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(tau_h_monomial(2, 2), 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(tau_h_monomial(1, 0), std::f64::consts::FRAC_2_PI, epsilon = 1e-15);
    }

    #[test]
    fn traces_of_projections_and_symmetries() {
        // tau is preserved: trace of the decomposition of diag(1,-1) is 0.
        let d = decompose(&Mat2::diag(c(1.0, 0.0), c(-1.0, 0.0)));
        assert_abs_diff_eq!(symbolic_trace(&d).unwrap().norm(), 0.0, epsilon = 1e-12);

        // diag(1,0) is a projection of trace 1/2, and so is its square.
        let q = decompose(&Mat2::diag(c(1.0, 0.0), c(0.0, 0.0)));
        let q2 = q.mul(&q);
        assert_abs_diff_eq!(symbolic_trace(&q2).unwrap().re, 0.5, epsilon = 1e-12);
        for i in 0..2 {
            for j in 0..2 {
                assert!(expr_close(q2.entry(i, j), q.entry(i, j), 1e-12));
            }
        }
    }

    #[test]
    fn mixed_words_vanish_by_freeness() {
        // u* h^2 v h u-type alternating words of centered letters.
        let centered_h = WordExpr::h_squared().sub(&WordExpr::scalar(c(0.5, 0.0)));
        let w = WordExpr::u_star()
            .mul(&centered_h)
            .mul(&WordExpr::v())
            .mul(&centered_h)
            .mul(&WordExpr::u());
        // Alternating word of centered letters from the three algebras.
        assert_abs_diff_eq!(tau_p(&w).unwrap().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn decompose_is_star_homomorphism_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let b1 = random_mat(&mut rng);
            let b2 = random_mat(&mut rng);
            let product = decompose(&b1).mul(&decompose(&b2));
            let direct = decompose(&(b1 * b2));
            let diff = product.sub(&direct);
            let gram = diff.mul(&diff.adjoint());
            let defect = symbolic_trace(&gram).unwrap();
            assert!(
                defect.norm() <= 1e-10,
                "homomorphism defect {} for {:?} {:?}",
                defect.norm(),
                b1,
                b2
            );
        }
    }

    #[test]
    fn trace_preservation_and_adjoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let b = random_mat(&mut rng);
            let d = decompose(&b);
            let t = symbolic_trace(&d).unwrap();
            assert_abs_diff_eq!(t.re, b.tau().re, epsilon = 1e-12);
            assert_abs_diff_eq!(t.im, b.tau().im, epsilon = 1e-12);

            let adj = decompose(&b.adjoint());
            let star = d.adjoint();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(expr_close(adj.entry(i, j), star.entry(i, j), 1e-12));
                }
            }
        }
    }

    #[test]
    fn projection_entry_moments_match_arcsine() {
        // The (1,1) entry of the projection image is h^2, whose moments are
        // the arcsine moments.
        let arcsine = crate::measures::MeasureR::arcsine01();
        let (e11, _) = v1_conjugations();
        let mut power = e11.entry(0, 0).clone();
        for k in 1..=4 {
            let t = tau_p(&power).unwrap();
            assert_abs_diff_eq!(t.re, arcsine.moment(k).unwrap(), epsilon = 1e-8);
            power = power.mul(e11.entry(0, 0));
        }
    }

    #[test]
    fn word_length_bound_enforced() {
        let mut long = WordExpr::one();
        for _ in 0..9 {
            long = long.mul(&WordExpr::h()).mul(&WordExpr::u());
        }
        assert!(matches!(tau_p(&long), Err(Error::Resource(_))));
    }

    #[test]
    fn matrix_model_identity_is_exact() {
        let id = evaluate_matrix_model(&SymbolicMat2::identity(), 8, 3);
        for i in 0..16 {
            for j in 0..16 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(id[[i, j]].re, expected, epsilon = 0.0);
                assert_abs_diff_eq!(id[[i, j]].im, 0.0, epsilon = 0.0);
            }
        }
    }

    #[test]
    fn matrix_model_trace_estimates() {
        // tau(B^2) = 2 for B = diag(2, 0); the model trace over independent
        // seeds must agree within three standard errors.
        let d = decompose(&Mat2::diag(c(2.0, 0.0), c(0.0, 0.0)));
        let n = 512;
        let trials = 6;
        let mut values = Vec::new();
        for seed in 0..trials {
            let m = evaluate_matrix_model(&d, n, 1000 + seed);
            // tr(M^2) = sum_ij M[i,j] M[j,i], no full product needed.
            let mut tr = c64::new(0.0, 0.0);
            for i in 0..2 * n {
                for j in 0..2 * n {
                    tr += m[[i, j]] * m[[j, i]];
                }
            }
            values.push(tr.re / (2 * n) as f64);
        }
        let mean = values.iter().sum::<f64>() / trials as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt().max(1e-4);
        assert!(
            (mean - 2.0).abs() <= 3.0 * se,
            "mean {mean}, se {se}"
        );
    }

    #[test]
    fn matrix_model_second_moment_of_rank_one_entry() {
        // Empirical second moment of the singular values of the realization
        // of h sqrt(1-h^2) u: tau((1-h^2) h^2) = 1/8.
        let n = 1024;
        let e = WordExpr::h_s().mul(&WordExpr::u());
        let m = SymbolicMat2::new([
            [e, WordExpr::zero()],
            [WordExpr::zero(), WordExpr::zero()],
        ]);
        let big = evaluate_matrix_model(&m, n, 77);
        let block = big.slice(ndarray::s![0..n, 0..n]);
        // second moment of singular values = (1/N) Tr(X* X)
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += block[[i, j]].norm_sqr();
            }
        }
        let second = acc / n as f64;
        assert!((second - 0.125).abs() < 0.01, "second moment {second}");
    }
}
