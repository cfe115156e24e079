//! Signed axis maps between cube coordinate systems.
//!
//! Corners of a `d`-cube are indexed by `u32` bit masks: bit `i` is the
//! coordinate along axis `i`.

use std::fmt;

/// Maps each source axis to a target axis, optionally reversing it.
///
/// Used for face attachments (face coordinates into the restricted parent
/// coordinates), for cube alignments of cubical maps, and for the axis
/// bookkeeping of sub-faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxisMap {
    targets: Vec<(usize, bool)>,
}

impl AxisMap {
    pub fn identity(n: usize) -> Self {
        AxisMap {
            targets: (0..n).map(|i| (i, false)).collect(),
        }
    }

    pub fn new(targets: Vec<(usize, bool)>) -> Self {
        AxisMap { targets }
    }

    /// Parses the file encoding: entry `t` is `±(k+1)`, meaning source axis
    /// `t` goes to target axis `k`, reversed when negative.
    pub fn from_signed(entries: &[i64]) -> Option<Self> {
        let n = entries.len();
        let mut seen = vec![false; n];
        let mut targets = Vec::with_capacity(n);
        for &e in entries {
            if e == 0 {
                return None;
            }
            let k = (e.unsigned_abs() - 1) as usize;
            if k >= n || seen[k] {
                return None;
            }
            seen[k] = true;
            targets.push((k, e < 0));
        }
        Some(AxisMap { targets })
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.targets
            .iter()
            .map(|&(k, flip)| {
                let v = k as i64 + 1;
                if flip {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.targets
            .iter()
            .enumerate()
            .all(|(i, &(k, flip))| i == k && !flip)
    }

    pub fn target(&self, axis: usize) -> (usize, bool) {
        self.targets[axis]
    }

    pub fn targets(&self) -> &[(usize, bool)] {
        &self.targets
    }

    /// Image of a source corner in target coordinates. Target axes not hit
    /// by any source axis are left at 0.
    pub fn apply(&self, x: u32) -> u32 {
        let mut y = 0;
        for (i, &(k, flip)) in self.targets.iter().enumerate() {
            let bit = ((x >> i) & 1 == 1) ^ flip;
            if bit {
                y |= 1 << k;
            }
        }
        y
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &AxisMap) -> AxisMap {
        AxisMap {
            targets: self
                .targets
                .iter()
                .map(|&(k, f)| {
                    let (k2, f2) = then.targets[k];
                    (k2, f ^ f2)
                })
                .collect(),
        }
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> AxisMap {
        let mut targets = vec![(0, false); self.targets.len()];
        for (i, &(k, f)) in self.targets.iter().enumerate() {
            targets[k] = (i, f);
        }
        AxisMap { targets }
    }

    /// All signed permutations of `n` axes, identity first.
    pub fn all(n: usize) -> Vec<AxisMap> {
        let mut perms = Vec::new();
        permutations(n, &mut Vec::new(), &mut vec![false; n], &mut perms);
        let mut out = Vec::with_capacity(perms.len() << n);
        for p in perms {
            for flips in 0u32..(1 << n) {
                out.push(AxisMap {
                    targets: p
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| (k, (flips >> i) & 1 == 1))
                        .collect(),
                });
            }
        }
        out
    }
}

fn permutations(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for k in 0..n {
        if !used[k] {
            used[k] = true;
            cur.push(k);
            permutations(n, cur, used, out);
            cur.pop();
            used[k] = false;
        }
    }
}

impl fmt::Display for AxisMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_signed())
    }
}

/// Inserts bit `s` at position `i`, shifting higher bits up.
pub fn insert_bit(y: u32, i: usize, s: bool) -> u32 {
    let low = y & ((1u32 << i) - 1);
    let high = (y >> i) << (i + 1);
    low | high | ((s as u32) << i)
}

/// Removes bit `i`, shifting higher bits down.
pub fn remove_bit(x: u32, i: usize) -> u32 {
    let low = x & ((1u32 << i) - 1);
    let high = (x >> (i + 1)) << i;
    low | high
}

pub fn bit(x: u32, i: usize) -> bool {
    (x >> i) & 1 == 1
}
