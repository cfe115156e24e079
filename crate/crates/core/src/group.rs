//! Built-in group oracles with canonical element encodings.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("oracle inconsistent: {0}")]
    OracleInconsistent(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid group: {0}")]
    Invalid(String),
    #[error("group has more than {0} elements")]
    TooLarge(usize),
}

/// Canonical form of an element.
pub type Element = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Group {
    /// `ℤ/m`, element `[k]` with `0 ≤ k < m`, generator `t`.
    Cyclic { order: u64 },
    /// `ℤⁿ`, elements are integer vectors.
    FreeAbelian { rank: usize },
    /// Free group on `a, b, …`; elements are reduced words with letters
    /// `±(i+1)`.
    Free { rank: usize },
    /// Permutations of `0..degree`, elements as image lists; the product
    /// `ab` applies `a` first.
    Permutation { degree: usize, generators: Vec<Vec<usize>> },
}

impl Group {
    pub fn integers() -> Self {
        Group::FreeAbelian { rank: 1 }
    }

    /// The symmetric group on `n` letters, generated by a transposition and
    /// an `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        let mut swap: Vec<usize> = (0..n).collect();
        if n >= 2 {
            swap.swap(0, 1);
        }
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Group::Permutation {
            degree: n,
            generators: vec![swap, cycle],
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            Group::Cyclic { order: 0 } => Err(GroupError::Invalid("cyclic group of order 0".into())),
            Group::Permutation { degree, generators } => {
                for g in generators {
                    let set: BTreeSet<usize> = g.iter().copied().collect();
                    if g.len() != *degree || set.len() != *degree || set.iter().any(|&i| i >= *degree) {
                        return Err(GroupError::Invalid(format!("{g:?} is not a permutation of {degree} letters")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Cyclic { .. } => vec![0],
            Group::FreeAbelian { rank } => vec![0; *rank],
            Group::Free { .. } => Vec::new(),
            Group::Permutation { degree, .. } => (0..*degree as i64).collect(),
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        match self {
            Group::Cyclic { order } => vec![(a[0] + b[0]).rem_euclid(*order as i64)],
            Group::FreeAbelian { .. } => a.iter().zip(b).map(|(x, y)| x + y).collect(),
            Group::Free { .. } => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                out
            }
            Group::Permutation { .. } => a.iter().map(|&i| b[i as usize]).collect(),
        }
    }

    pub fn invert(&self, a: &Element) -> Element {
        match self {
            Group::Cyclic { order } => vec![(-a[0]).rem_euclid(*order as i64)],
            Group::FreeAbelian { .. } => a.iter().map(|x| -x).collect(),
            Group::Free { .. } => a.iter().rev().map(|l| -l).collect(),
            Group::Permutation { .. } => {
                let mut inv = vec![0; a.len()];
                for (i, &j) in a.iter().enumerate() {
                    inv[j as usize] = i as i64;
                }
                inv
            }
        }
    }

    /// The standard generators, before symmetrization.
    pub fn base_generators(&self) -> Vec<Element> {
        match self {
            Group::Cyclic { .. } => vec![vec![1]],
            Group::FreeAbelian { rank } => (0..*rank)
                .map(|i| {
                    let mut e = vec![0; *rank];
                    e[i] = 1;
                    e
                })
                .collect(),
            Group::Free { rank } => (0..*rank as i64).map(|i| vec![i + 1]).collect(),
            Group::Permutation { generators, .. } => generators
                .iter()
                .map(|g| g.iter().map(|&i| i as i64).collect())
                .collect(),
        }
    }

    /// The symmetric generating set: base generators and their inverses,
    /// without the identity and without repeats, in order of first
    /// appearance.
    pub fn generators(&self) -> Vec<Element> {
        let id = self.identity();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in self.base_generators() {
            for h in [self.invert(&g), g].into_iter().rev() {
                if h != id && seen.insert(h.clone()) {
                    out.push(h);
                }
            }
        }
        out
    }

    pub fn label(&self, a: &Element) -> String {
        match self {
            Group::Cyclic { .. } => match a[0] {
                0 => "1".into(),
                1 => "t".into(),
                k => format!("t^{k}"),
            },
            Group::FreeAbelian { rank: 1 } => a[0].to_string(),
            Group::FreeAbelian { .. } => format!(
                "({})",
                a.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            ),
            Group::Free { .. } => {
                if a.is_empty() {
                    return "1".into();
                }
                a.iter()
                    .map(|&l| {
                        let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                        if l > 0 {
                            c
                        } else {
                            c.to_ascii_uppercase()
                        }
                    })
                    .collect()
            }
            Group::Permutation { .. } => format!(
                "[{}]",
                a.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            ),
        }
    }

    /// The symmetric generator with the given label.
    pub fn generator(&self, label: &str) -> Result<Element, GroupError> {
        self.generators()
            .into_iter()
            .find(|g| self.label(g) == label)
            .ok_or_else(|| GroupError::UnknownGenerator(label.to_string()))
    }

    /// Product of generators named by label.
    pub fn word(&self, labels: &[String]) -> Result<Element, GroupError> {
        let mut out = self.identity();
        for l in labels {
            out = self.multiply(&out, &self.generator(l)?);
        }
        Ok(out)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Group::Cyclic { .. } | Group::Permutation { .. })
            || matches!(self, Group::FreeAbelian { rank: 0 } | Group::Free { rank: 0 })
    }

    /// All elements of a finite group, by breadth-first closure.
    pub fn elements(&self, cap: usize) -> Result<Vec<Element>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::TooLarge(cap));
        }
        let gens = self.generators();
        let id = self.identity();
        let mut seen = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let h = self.multiply(&g, s);
                if seen.insert(h.clone()) {
                    if out.len() >= cap {
                        return Err(GroupError::TooLarge(cap));
                    }
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(out)
    }

    /// Identity, inverse and associativity laws on all triples from
    /// `samples`.
    pub fn check_axioms(&self, samples: &[Element]) -> Result<(), GroupError> {
        let id = self.identity();
        for a in samples {
            if self.multiply(a, &id) != *a || self.multiply(&id, a) != *a {
                return Err(GroupError::OracleInconsistent(format!("identity law fails at {}", self.label(a))));
            }
            if self.multiply(a, &self.invert(a)) != id {
                return Err(GroupError::OracleInconsistent(format!("inverse law fails at {}", self.label(a))));
            }
            for b in samples {
                for c in samples {
                    let l = self.multiply(&self.multiply(a, b), c);
                    let r = self.multiply(a, &self.multiply(b, c));
                    if l != r {
                        return Err(GroupError::OracleInconsistent(format!(
                            "associativity fails at ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_has_six_elements() {
        let s3 = Group::symmetric(3);
        let els = s3.elements(100).unwrap();
        assert_eq!(els.len(), 6);
        s3.check_axioms(&els).unwrap();
    }

    #[test]
    fn free_words_reduce() {
        let f = Group::Free { rank: 2 };
        let a = f.generator("a").unwrap();
        let ai = f.generator("A").unwrap();
        assert_eq!(f.multiply(&a, &ai), f.identity());
        assert_eq!(f.generators().len(), 4);
        assert_eq!(f.label(&f.word(&["a".into(), "B".into()]).unwrap()), "aB");
    }

    #[test]
    fn cyclic_generators() {
        let c = Group::Cyclic { order: 3 };
        let labels: Vec<String> = c.generators().iter().map(|g| c.label(g)).collect();
        assert_eq!(labels, vec!["t", "t^2"]);
        assert_eq!(Group::Cyclic { order: 2 }.generators().len(), 1);
        assert_eq!(Group::integers().generators(), vec![vec![1], vec![-1]]);
    }
}
