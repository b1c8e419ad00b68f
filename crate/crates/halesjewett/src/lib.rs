//! Words over a finite alphabet `0..sigma`, parameter words with the
//! placeholder λ, combinatorial lines, and exhaustive bad-coloring search.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HjError {
    #[error("letter {letter} is not in an alphabet of size {sigma}")]
    LetterNotInAlphabet { letter: usize, sigma: usize },
    #[error("search exceeded the node budget of {0}")]
    SearchCapExceeded(u64),
    #[error("a parameter word needs at least one λ")]
    NoParameter,
}

/// A word is a sequence of letter indices.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParameterWord {
    /// `None` marks λ.
    letters: Vec<Option<usize>>,
}

impl ParameterWord {
    pub fn new(letters: Vec<Option<usize>>) -> Result<Self, HjError> {
        if letters.iter().all(|l| l.is_some()) {
            return Err(HjError::NoParameter);
        }
        Ok(ParameterWord { letters })
    }

    pub fn letters(&self) -> &[Option<usize>] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `W(a)`: every λ replaced by `a`.
    pub fn substitute(&self, a: usize, sigma: usize) -> Result<Word, HjError> {
        if a >= sigma {
            return Err(HjError::LetterNotInAlphabet { letter: a, sigma });
        }
        if let Some(&l) = self.letters.iter().flatten().find(|&&l| l >= sigma) {
            return Err(HjError::LetterNotInAlphabet { letter: l, sigma });
        }
        Ok(self.letters.iter().map(|l| l.unwrap_or(a)).collect())
    }

    /// The combinatorial line `{W(a) : a < sigma}` in letter order.
    pub fn line(&self, sigma: usize) -> Vec<Word> {
        (0..sigma).map(|a| self.substitute(a, sigma).expect("letters in range")).collect()
    }
}

impl fmt::Display for ParameterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.map_or("λ".to_string(), |x| x.to_string())).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `sigma^n` words in lexicographic order.
pub fn enumerate_words(sigma: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Word| {
                (0..sigma).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Position of `w` in `enumerate_words(sigma, w.len())`.
pub fn word_index(w: &[usize], sigma: usize) -> usize {
    w.iter().fold(0, |acc, &a| acc * sigma + a)
}

/// All `(sigma+1)^n - sigma^n` parameter words, lexicographic with λ after every letter.
pub fn enumerate_parameter_words(sigma: usize, n: usize) -> Vec<ParameterWord> {
    enumerate_words(sigma + 1, n)
        .into_iter()
        .filter(|w| w.contains(&sigma))
        .map(|w| ParameterWord { letters: w.into_iter().map(|a| (a < sigma).then_some(a)).collect() })
        .collect()
}

pub fn enumerate_lines(sigma: usize, n: usize) -> Vec<(ParameterWord, Vec<Word>)> {
    enumerate_parameter_words(sigma, n)
        .into_iter()
        .map(|w| {
            let l = w.line(sigma);
            (w, l)
        })
        .collect()
}

/// Lexicographically least `r`-coloring of `sigma^n` (as a color per word
/// index) with no monochromatic line, or `None` when every coloring has one.
pub fn find_bad_coloring(sigma: usize, n: usize, r: usize, budget: Option<u64>) -> Result<Option<Vec<usize>>, HjError> {
    let words = sigma.pow(n as u32);
    if r == 0 {
        return Ok(if words == 0 { Some(Vec::new()) } else { None });
    }
    // Lines indexed by their largest word, so each is checked once complete.
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); words];
    for (_, line) in enumerate_lines(sigma, n) {
        let mut idx: Vec<usize> = line.iter().map(|w| word_index(w, sigma)).collect();
        idx.sort_unstable();
        let last = *idx.last().expect("non-empty alphabet");
        closing[last].push(idx);
    }
    let mut color = vec![usize::MAX; words];
    let mut nodes = 0u64;
    fn rec(
        k: usize,
        max_used: usize,
        r: usize,
        color: &mut Vec<usize>,
        closing: &[Vec<Vec<usize>>],
        nodes: &mut u64,
        budget: Option<u64>,
    ) -> Result<bool, HjError> {
        if k == color.len() {
            return Ok(true);
        }
        // Colors are introduced in order, so the least bad coloring is canonical.
        let top = if k == 0 { 1 } else { (max_used + 2).min(r) };
        for c in 0..top {
            *nodes += 1;
            if budget.is_some_and(|b| *nodes > b) {
                return Err(HjError::SearchCapExceeded(budget.unwrap_or_default()));
            }
            color[k] = c;
            let mono = closing[k].iter().any(|line| line.iter().all(|&w| color[w] == c));
            if !mono && rec(k + 1, max_used.max(c), r, color, closing, nodes, budget)? {
                return Ok(true);
            }
        }
        color[k] = usize::MAX;
        Ok(false)
    }
    Ok(rec(0, 0, r, &mut color, &closing, &mut nodes, budget)?.then_some(color))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HjNumber {
    Exact(usize),
    ExceedsCap,
}

/// Least `n <= cap` at which every `r`-coloring of `sigma^n` has a monochromatic line.
pub fn hj_number(sigma: usize, r: usize, cap: usize, budget: Option<u64>) -> Result<HjNumber, HjError> {
    for n in 1..=cap {
        if find_bad_coloring(sigma, n, r, budget)?.is_none() {
            return Ok(HjNumber::Exact(n));
        }
    }
    Ok(HjNumber::ExceedsCap)
}
