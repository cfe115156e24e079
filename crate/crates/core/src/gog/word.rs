use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GogError;

/// A freely reduced word; each letter carries exponent `±1`.
///
/// Written as tokens `name` or `name^k` separated by spaces or `.`; `1`
/// is the empty word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(Vec<(String, i64)>);

impl Word {
    pub fn letter(name: &str) -> Self {
        Word(vec![(name.to_string(), 1)])
    }

    pub fn from_letters<I: IntoIterator<Item = (String, i64)>>(letters: I) -> Self {
        let mut w = Word::default();
        for (g, e) in letters {
            let step = e.signum();
            for _ in 0..e.abs() {
                w.push(g.clone(), step);
            }
        }
        w
    }

    fn push(&mut self, g: String, e: i64) {
        if let Some((h, f)) = self.0.last() {
            if *h == g && *f == -e {
                self.0.pop();
                return;
            }
        }
        self.0.push((g, e));
    }

    pub fn letters(&self) -> impl Iterator<Item = (&String, i64)> {
        self.0.iter().map(|(g, e)| (g, *e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (g, e) in &other.0 {
            w.push(g.clone(), *e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|(g, e)| (g.clone(), -e)).collect())
    }

    pub(crate) fn check_letters(&self, allowed: &BTreeSet<&str>) -> Result<(), GogError> {
        match self.0.iter().find(|(g, _)| !allowed.contains(g.as_str())) {
            Some((g, _)) => Err(GogError::UnknownGenerator(g.clone())),
            None => Ok(()),
        }
    }

    /// The generator `x` if the word is `x` or `x^-1`.
    pub fn single_generator(&self) -> Option<&str> {
        match self.0.as_slice() {
            [(g, _)] => Some(g),
            _ => None,
        }
    }

    /// Deletes the given generators and reduces.
    pub fn without(&self, dead: &BTreeSet<String>) -> Word {
        Word::from_letters(self.0.iter().filter(|(g, _)| !dead.contains(g)).cloned())
    }

    /// Replaces letters by their images; letters without an image are kept.
    pub fn substitute(&self, map: &BTreeMap<String, Word>) -> Word {
        let mut w = Word::default();
        for (g, e) in &self.0 {
            let img = match map.get(g) {
                Some(x) if *e > 0 => x.clone(),
                Some(x) => x.inverse(),
                None => Word(vec![(g.clone(), *e)]),
            };
            w = w.concat(&img);
        }
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let (g, e) = &self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == (g.clone(), *e) {
                j += 1;
            }
            let k = (j - i) as i64 * e;
            parts.push(if k == 1 { g.clone() } else { format!("{g}^{k}") });
            i = j;
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = GogError;

    fn from_str(s: &str) -> Result<Self, GogError> {
        let bad = || GogError::InvalidWord(s.to_string());
        let mut letters = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '.').filter(|t| !t.is_empty()) {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, k)) => (n, k.parse::<i64>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
            if !valid {
                return Err(bad());
            }
            letters.push((name.to_string(), exp));
        }
        Ok(Word::from_letters(letters))
    }
}

impl TryFrom<String> for Word {
    type Error = GogError;

    fn try_from(s: String) -> Result<Self, GogError> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}
