//! Weighted bookkeeping of triplets and portal orbits: sizes, virtual
//! modification, gluing equations and portal matching.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("invalid ledger: {0}")]
    Invalid(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{class}` is unbalanced: {plus} on the + side, {minus} on the - side")]
    Unbalanced { class: String, plus: u64, minus: u64 },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("matching would list more than {0} portals")]
    TooLarge(u64),
}

fn one() -> u64 {
    1
}

/// A region triplet counted `weight` times; `index` is the index of the
/// finite-index subgroup it will be passed to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplet {
    pub id: String,
    pub weight: u64,
    #[serde(default = "one")]
    pub index: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PortalSide {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl std::fmt::Display for PortalSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PortalSide::Plus => "+",
            PortalSide::Minus => "-",
        })
    }
}

/// `orbits` orbits of portals per copy of the owner, each of size `size`
/// with stabilizer index `stabilizer_index` in the pending subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortalRecord {
    pub id: String,
    pub owner: String,
    pub class: String,
    pub side: PortalSide,
    pub size: u64,
    #[serde(default = "one")]
    pub stabilizer_index: u64,
    #[serde(default = "one")]
    pub orbits: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modified_size: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyLedger {
    pub triplets: Vec<Triplet>,
    pub classes: Vec<String>,
    pub portals: Vec<PortalRecord>,
}

impl HierarchyLedger {
    pub fn from_json(text: &str) -> Result<Self, LedgerError> {
        let l: HierarchyLedger = serde_json::from_str(text).map_err(|e| LedgerError::Invalid(e.to_string()))?;
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<(), LedgerError> {
        let bad = |m: String| Err(LedgerError::Invalid(m));
        let mut ids = BTreeSet::new();
        for t in &self.triplets {
            if !ids.insert(&t.id) {
                return bad(format!("duplicate triplet `{}`", t.id));
            }
            if t.weight == 0 || t.index == 0 {
                return bad(format!("triplet `{}` needs positive weight and index", t.id));
            }
        }
        let classes: BTreeSet<&String> = self.classes.iter().collect();
        if classes.len() != self.classes.len() {
            return bad("duplicate class".into());
        }
        let mut pids = BTreeSet::new();
        for p in &self.portals {
            if !pids.insert(&p.id) {
                return bad(format!("duplicate portal `{}`", p.id));
            }
            if !ids.contains(&p.owner) {
                return bad(format!("portal `{}` has unknown owner `{}`", p.id, p.owner));
            }
            if !classes.contains(&p.class) {
                return Err(LedgerError::UnknownClass(p.class.clone()));
            }
            if p.size == 0 || p.stabilizer_index == 0 || p.orbits == 0 || p.modified_size == Some(0) {
                return bad(format!("portal `{}` needs positive size, index and orbit count", p.id));
            }
        }
        Ok(())
    }

    fn weight_of(&self, owner: &str) -> u64 {
        self.triplets.iter().find(|t| t.id == owner).map_or(0, |t| t.weight)
    }

    fn index_of(&self, owner: &str) -> u64 {
        self.triplets.iter().find(|t| t.id == owner).map_or(1, |t| t.index)
    }
}

fn mul(a: u64, b: u64) -> Result<u64, LedgerError> {
    a.checked_mul(b).ok_or(LedgerError::Overflow)
}

fn add(a: u64, b: u64) -> Result<u64, LedgerError> {
    a.checked_add(b).ok_or(LedgerError::Overflow)
}

/// Passes every triplet to its subgroup: the weight of `Z` becomes
/// `α_Z ∏_{Z'≠Z} i_{Z'}` and indices reset to 1. Each portal orbit splits
/// into `i_Z / k_P` orbits of size `k_P · sz`.
pub fn virtual_modify(l: &HierarchyLedger) -> Result<HierarchyLedger, LedgerError> {
    l.validate()?;
    let mut triplets = Vec::with_capacity(l.triplets.len());
    for (k, t) in l.triplets.iter().enumerate() {
        let mut w = t.weight;
        for (k2, t2) in l.triplets.iter().enumerate() {
            if k2 != k {
                w = mul(w, t2.index)?;
            }
        }
        triplets.push(Triplet {
            id: t.id.clone(),
            weight: w,
            index: 1,
        });
    }
    let mut portals = Vec::with_capacity(l.portals.len());
    for p in &l.portals {
        let i = l.index_of(&p.owner);
        if i % p.stabilizer_index != 0 {
            return Err(LedgerError::Invalid(format!(
                "stabilizer index {} of `{}` does not divide index {i} of `{}`",
                p.stabilizer_index, p.id, p.owner
            )));
        }
        portals.push(PortalRecord {
            size: mul(p.size, p.stabilizer_index)?,
            stabilizer_index: 1,
            orbits: mul(p.orbits, i / p.stabilizer_index)?,
            modified_size: None,
            ..p.clone()
        });
    }
    Ok(HierarchyLedger {
        triplets,
        classes: l.classes.clone(),
        portals,
    })
}

/// Number of portals of a class on one side, duplicates of triplets
/// counted separately.
pub fn weighted_class_count(l: &HierarchyLedger, class: &str, side: PortalSide) -> Result<u64, LedgerError> {
    if !l.classes.iter().any(|c| c == class) {
        return Err(LedgerError::UnknownClass(class.to_string()));
    }
    let mut n = 0;
    for p in l.portals.iter().filter(|p| p.class == class && p.side == side) {
        n = add(n, mul(l.weight_of(&p.owner), p.orbits)?)?;
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassBalance {
    pub class: String,
    /// Weighted size sums per side.
    pub plus_size: u64,
    pub minus_size: u64,
    /// Weighted portal counts per side.
    pub plus_count: u64,
    pub minus_count: u64,
    /// Whether every portal of the class has the same size.
    pub uniform_size: bool,
}

impl ClassBalance {
    pub fn size_balanced(&self) -> bool {
        self.plus_size == self.minus_size
    }

    pub fn count_balanced(&self) -> bool {
        self.plus_count == self.minus_count
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingReport {
    pub classes: Vec<ClassBalance>,
    pub size_balanced: bool,
    pub count_balanced: bool,
}

impl GluingReport {
    pub fn unbalanced(&self) -> Option<LedgerError> {
        self.classes.iter().find(|c| !c.size_balanced()).map(|c| LedgerError::Unbalanced {
            class: c.class.clone(),
            plus: c.plus_size,
            minus: c.minus_size,
        })
    }
}

/// Per-class sums `Σ α·sz` and counts on both sides.
pub fn class_balances(l: &HierarchyLedger) -> Result<GluingReport, LedgerError> {
    l.validate()?;
    let mut classes = Vec::new();
    for c in &l.classes {
        let mut b = ClassBalance {
            class: c.clone(),
            plus_size: 0,
            minus_size: 0,
            plus_count: 0,
            minus_count: 0,
            uniform_size: true,
        };
        let mut sizes = BTreeSet::new();
        for p in l.portals.iter().filter(|p| &p.class == c) {
            let n = mul(l.weight_of(&p.owner), p.orbits)?;
            let s = mul(n, p.size)?;
            sizes.insert(p.size);
            let (sz, ct) = match p.side {
                PortalSide::Plus => (&mut b.plus_size, &mut b.plus_count),
                PortalSide::Minus => (&mut b.minus_size, &mut b.minus_count),
            };
            *sz = add(*sz, s)?;
            *ct = add(*ct, n)?;
        }
        b.uniform_size = sizes.len() <= 1;
        classes.push(b);
    }
    Ok(GluingReport {
        size_balanced: classes.iter().all(ClassBalance::size_balanced),
        count_balanced: classes.iter().all(ClassBalance::count_balanced),
        classes,
    })
}

/// The gluing equations in size-sum form; fails on the first class whose
/// sides differ.
pub fn gluing_check(l: &HierarchyLedger) -> Result<GluingReport, LedgerError> {
    let r = class_balances(l)?;
    match r.unbalanced() {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

pub const MATCHING_CAP: u64 = 1_000_000;

/// Pairs every `+` portal with a `-` portal of the same class. Portals are
/// named `record#copy.orbit` and paired in record-id order.
pub fn portal_matching(l: &HierarchyLedger) -> Result<Vec<(String, String)>, LedgerError> {
    let report = class_balances(l)?;
    let total: u64 = report.classes.iter().map(|c| c.plus_count).sum();
    if total > MATCHING_CAP {
        return Err(LedgerError::TooLarge(MATCHING_CAP));
    }
    let mut out = Vec::new();
    for c in &report.classes {
        if !c.count_balanced() {
            return Err(LedgerError::Unbalanced {
                class: c.class.clone(),
                plus: c.plus_count,
                minus: c.minus_count,
            });
        }
        let expand = |side: PortalSide| {
            let mut recs: Vec<&PortalRecord> = l.portals.iter().filter(|p| p.class == c.class && p.side == side).collect();
            recs.sort_by(|a, b| a.id.cmp(&b.id));
            let mut names = Vec::new();
            for p in recs {
                for copy in 0..l.weight_of(&p.owner) {
                    for orbit in 0..p.orbits {
                        names.push(format!("{}#{copy}.{orbit}", p.id));
                    }
                }
            }
            names
        };
        out.extend(expand(PortalSide::Plus).into_iter().zip(expand(PortalSide::Minus)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub violations: Vec<String>,
    pub holds: bool,
}

/// Checks `ŝz(P) = k_P · sz(P)` for every record and that compatible
/// portals share `ŝz`. Modified sizes come from `modified`, falling back
/// to the records' own `modified_size`.
pub fn size_identities(l: &HierarchyLedger, modified: &BTreeMap<String, u64>) -> SizeReport {
    let mut violations = Vec::new();
    let mut per_class: BTreeMap<&str, BTreeMap<u64, Vec<&str>>> = BTreeMap::new();
    for p in &l.portals {
        let Some(hat) = modified.get(&p.id).copied().or(p.modified_size) else {
            violations.push(format!("portal `{}` has no modified size", p.id));
            continue;
        };
        match p.stabilizer_index.checked_mul(p.size) {
            Some(x) if x == hat => {}
            _ => violations.push(format!(
                "portal `{}`: modified size {hat} != {} * {}",
                p.id, p.stabilizer_index, p.size
            )),
        }
        per_class.entry(&p.class).or_default().entry(hat).or_default().push(&p.id);
    }
    for (class, sizes) in per_class {
        if sizes.len() > 1 {
            let parts: Vec<String> = sizes.iter().map(|(s, ps)| format!("{s} ({})", ps.join(", "))).collect();
            violations.push(format!("class `{class}` has modified sizes {}", parts.join(" vs ")));
        }
    }
    SizeReport {
        holds: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger(triplets: &[(u64, u64)], portals: &[(usize, PortalSide, u64, u64)]) -> HierarchyLedger {
        HierarchyLedger {
            triplets: triplets
                .iter()
                .enumerate()
                .map(|(i, &(weight, index))| Triplet {
                    id: format!("Z{i}"),
                    weight,
                    index,
                })
                .collect(),
            classes: vec!["c".into()],
            portals: portals
                .iter()
                .enumerate()
                .map(|(i, &(owner, side, size, k))| PortalRecord {
                    id: format!("P{i}"),
                    owner: format!("Z{owner}"),
                    class: "c".into(),
                    side,
                    size,
                    stabilizer_index: k,
                    orbits: 1,
                    modified_size: None,
                })
                .collect(),
        }
    }

    fn weights(l: &HierarchyLedger) -> Vec<u64> {
        l.triplets.iter().map(|t| t.weight).collect()
    }

    use PortalSide::{Minus, Plus};

    #[test]
    fn modification_weights() {
        let m = virtual_modify(&ledger(&[(1, 2), (1, 3)], &[])).unwrap();
        assert_eq!(weights(&m), vec![3, 2]);
        assert!(m.triplets.iter().all(|t| t.index == 1));
        let m = virtual_modify(&ledger(&[(4, 5)], &[])).unwrap();
        assert_eq!(weights(&m), vec![4]);
        let m = virtual_modify(&ledger(&[(1, 2), (2, 2), (1, 3)], &[])).unwrap();
        assert_eq!(weights(&m), vec![6, 12, 4]);
    }

    #[test]
    fn balance() {
        let l = ledger(&[(1, 1)], &[(0, Plus, 2, 1), (0, Plus, 1, 1), (0, Minus, 3, 1)]);
        let r = gluing_check(&l).unwrap();
        assert_eq!((r.classes[0].plus_size, r.classes[0].minus_size), (3, 3));
        let l = ledger(&[(1, 1)], &[(0, Plus, 2, 1), (0, Minus, 3, 1)]);
        assert_eq!(
            gluing_check(&l),
            Err(LedgerError::Unbalanced {
                class: "c".into(),
                plus: 2,
                minus: 3
            })
        );
    }

    #[test]
    fn class_counts() {
        let mut l = ledger(&[(3, 2), (1, 3)], &[(0, Plus, 1, 1)]);
        l.classes.push("empty".into());
        assert_eq!(weighted_class_count(&l, "empty", Plus).unwrap(), 0);
        assert_eq!(weighted_class_count(&l, "c", Plus).unwrap(), 3);
        let m = virtual_modify(&l).unwrap();
        // weight 3·3, each orbit splits in two
        assert_eq!(weighted_class_count(&m, "c", Plus).unwrap(), 18);
        assert_eq!(
            weighted_class_count(&l, "nope", Plus),
            Err(LedgerError::UnknownClass("nope".into()))
        );
    }

    #[test]
    fn sizes() {
        let l = ledger(&[(1, 2)], &[(0, Plus, 3, 2)]);
        let m = BTreeMap::from([("P0".to_string(), 6)]);
        assert!(size_identities(&l, &m).holds);
        let l = ledger(&[(1, 2)], &[(0, Plus, 3, 2), (0, Minus, 2, 2)]);
        let m = BTreeMap::from([("P0".to_string(), 6), ("P1".to_string(), 4)]);
        let r = size_identities(&l, &m);
        assert!(!r.holds);
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn matching_after_modification() {
        // every modified size is 2
        let l = ledger(&[(1, 2), (1, 2)], &[(0, Plus, 2, 1), (1, Minus, 1, 2), (1, Minus, 1, 2)]);
        gluing_check(&l).unwrap();
        let m = virtual_modify(&l).unwrap();
        let r = gluing_check(&m).unwrap();
        assert!(r.count_balanced);
        let pairs = portal_matching(&m).unwrap();
        assert_eq!(pairs.len(), 4);
        assert_eq!(pairs[0], ("P0#0.0".to_string(), "P1#0.0".to_string()));
        assert_eq!(pairs[3], ("P0#1.1".to_string(), "P2#1.0".to_string()));
        assert!(portal_matching(&ledger(&[(1, 1)], &[(0, Plus, 1, 1)])).is_err());
    }
}
