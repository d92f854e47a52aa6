//! Noncommutative monomials and the direct-sum maps built from them.
//!
//! A [`WordSystem`] `(p_1, …, p_n)` over `r` generators defines
//! `ψ(X_1, …, X_r) = p_1(X) ⊕ ⋯ ⊕ p_n(X)`, an `m × mn` matrix. Column
//! `t` of block `ℓ` is global column `(ℓ − 1)·m + t`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{generic_matrix, PolyMatrix};

/// A word `x_{f(1)} ⋯ x_{f(k)}` in the free monoid on `x_1, …, x_r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<u32>,
}

impl Word {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidInput("words must be nonempty".into()));
        }
        if letters.contains(&0) {
            return Err(Error::InvalidInput("generator indices start at 1".into()));
        }
        Ok(Self { letters })
    }

    pub fn from_slice(letters: &[u32]) -> Result<Self> {
        Self::new(letters.to_vec())
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_letter(&self) -> u32 {
        *self.letters.iter().max().expect("nonempty")
    }

    /// Concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Exponent vector in `ℕ^r`: component `q − 1` counts the letter `q`.
    pub fn abelianize(&self, r: usize) -> Vec<u32> {
        let mut v = vec![0; r.max(self.max_letter() as usize)];
        for &l in &self.letters {
            v[l as usize - 1] += 1;
        }
        v
    }

    /// The ordered product `X_{f(1)} ⋯ X_{f(k)}`.
    pub fn evaluate(&self, xs: &[PolyMatrix]) -> Result<PolyMatrix> {
        let first = xs
            .first()
            .ok_or_else(|| Error::InvalidInput("no generator matrices".into()))?;
        let m = first.rows();
        if xs.iter().any(|x| x.rows() != m || x.cols() != m) {
            return Err(Error::DimensionMismatch(
                "generator matrices must be square of equal size".into(),
            ));
        }
        let pick = |l: u32| {
            xs.get(l as usize - 1).ok_or(Error::IndexOutOfRange {
                index: l as usize,
                max: xs.len(),
            })
        };
        let mut acc = pick(self.letters[0])?.clone();
        for &l in &self.letters[1..] {
            acc = acc.matmul(pick(l)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let run = self.letters[i..].iter().take_while(|&&x| x == l).count();
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{l}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(m, r, (p_1, …, p_n))`: matrix size, generator count, and the words.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSystem {
    m: usize,
    r: usize,
    words: Vec<Word>,
}

impl WordSystem {
    pub fn new(m: usize, r: usize, words: Vec<Word>) -> Result<Self> {
        if m == 0 || r == 0 {
            return Err(Error::InvalidInput("m and r must be at least 1".into()));
        }
        if words.is_empty() {
            return Err(Error::InvalidInput(
                "a word system needs at least one word".into(),
            ));
        }
        for w in &words {
            let top = w.max_letter() as usize;
            if top > r {
                return Err(Error::IndexOutOfRange { index: top, max: r });
            }
        }
        Ok(Self { m, r, words })
    }

    /// Convenience constructor from letter slices.
    pub fn from_letters(m: usize, r: usize, words: &[&[u32]]) -> Result<Self> {
        let words = words
            .iter()
            .map(|w| Word::from_slice(w))
            .collect::<Result<_>>()?;
        Self::new(m, r, words)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of words `n`.
    pub fn n(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Word `p_ℓ`, 1-based.
    pub fn word(&self, label: usize) -> &Word {
        &self.words[label - 1]
    }

    /// Width `m·n` of `ψ`.
    pub fn width(&self) -> usize {
        self.m * self.words.len()
    }

    /// Global 1-based column of column `t` in block `ℓ`.
    pub fn column(&self, t: usize, label: usize) -> usize {
        (label - 1) * self.m + t
    }

    /// Inverse of [`WordSystem::column`]: `(t, ℓ)`.
    pub fn decode_column(&self, j: usize) -> Result<(usize, usize)> {
        if j == 0 || j > self.width() {
            return Err(Error::InvalidInput(format!(
                "column {j} outside 1..={}",
                self.width()
            )));
        }
        Ok(((j - 1) % self.m + 1, (j - 1) / self.m + 1))
    }

    pub fn with_word(&self, w: Word) -> Result<Self> {
        let mut words = self.words.clone();
        words.push(w);
        Self::new(self.m, self.r, words)
    }

    pub fn distinct_abelianizations(&self) -> bool {
        let mut seen: Vec<Vec<u32>> = self.words.iter().map(|w| w.abelianize(self.r)).collect();
        seen.sort();
        seen.windows(2).all(|p| p[0] != p[1])
    }

    /// The symbolic `m × mn` matrix `p_1(X) ⊕ ⋯ ⊕ p_n(X)` with generic `X_q`.
    pub fn build_psi(&self) -> Result<PolyMatrix> {
        let xs = self.generic_generators()?;
        let mut blocks = self.words.iter().map(|w| w.evaluate(&xs));
        let mut acc = blocks.next().expect("nonempty")?;
        for b in blocks {
            acc = acc.hcat(&b?)?;
        }
        Ok(acc)
    }

    pub fn generic_generators(&self) -> Result<Vec<PolyMatrix>> {
        (1..=self.r).map(|q| generic_matrix(self.m, q)).collect()
    }
}

impl fmt::Display for WordSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WordSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordSystem(m={}, r={}, [{}])", self.m, self.r, self)
    }
}

/// All words `x_1^{n_1} ⋯ x_r^{n_r}` with `1 ≤ Σ n_k ≤ n`, by total degree
/// and then by descending exponent vector.
pub fn veronese_system(m: usize, n: usize, r: usize) -> Result<WordSystem> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut words = Vec::new();
    for d in 1..=n {
        for exps in exponent_vectors(r, d) {
            let letters = exps
                .iter()
                .enumerate()
                .flat_map(|(q, &e)| std::iter::repeat_n(q as u32 + 1, e as usize))
                .collect();
            words.push(Word::new(letters)?);
        }
    }
    WordSystem::new(m, r, words)
}

/// Exponent vectors of length `r` summing to `d`, lexicographically descending.
fn exponent_vectors(r: usize, d: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    if r == 1 {
        return vec![vec![d as u32]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponent_vectors(r - 1, d - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Parses `system := word (";" word)*`, `word := factor ("*" factor)*`,
/// `factor := "x" INDEX ("^" POWER)?`. Whitespace is ignored.
pub fn parse_word_list(text: &str) -> Result<Vec<Word>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> Result<u32> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::syntax(start, "expected a number"));
        }
        std::str::from_utf8(&bytes[start..*pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::syntax(start, "number too large"))
    };
    let mut words = Vec::new();
    loop {
        let mut letters = Vec::new();
        loop {
            skip(&mut pos);
            if pos >= bytes.len() || bytes[pos] != b'x' {
                return Err(Error::syntax(pos, "expected 'x'"));
            }
            pos += 1;
            skip(&mut pos);
            let at = pos;
            let idx = number(&mut pos)?;
            if idx == 0 {
                return Err(Error::syntax(at, "indices start at 1"));
            }
            skip(&mut pos);
            let mut power = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip(&mut pos);
                let at = pos;
                power = number(&mut pos)?;
                if power == 0 {
                    return Err(Error::syntax(at, "powers must be at least 1"));
                }
                skip(&mut pos);
            }
            letters.extend(std::iter::repeat_n(idx, power as usize));
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        words.push(Word::new(letters)?);
        if pos < bytes.len() && bytes[pos] == b';' {
            pos += 1;
            continue;
        }
        if pos < bytes.len() {
            return Err(Error::syntax(pos, "expected '*', ';' or end of input"));
        }
        return Ok(words);
    }
}

/// Parses a word list into a system with matrix size `m`. When `r` is not
/// given it is the largest generator index used.
pub fn parse_words(text: &str, m: usize, r: Option<usize>) -> Result<WordSystem> {
    let words = parse_word_list(text)?;
    let top = words.iter().map(Word::max_letter).max().unwrap_or(1) as usize;
    WordSystem::new(m, r.unwrap_or(top), words)
}
