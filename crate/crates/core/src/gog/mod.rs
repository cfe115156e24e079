//! Graphs of groups: presentations of their fundamental groups, circuit
//! elements, and homomorphism counting into finite groups.

mod ledger;
mod word;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Element, Group, GroupError};

pub use ledger::{
    class_balances, gluing_check, portal_matching, size_identities, virtual_modify, weighted_class_count, ClassBalance,
    GluingReport, HierarchyLedger, LedgerError, PortalRecord, PortalSide, SizeReport, Triplet,
};
pub use word::Word;

#[derive(Debug, Error)]
pub enum GogError {
    #[error("invalid word `{0}`")]
    InvalidWord(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("generator `{0}` is used more than once")]
    DuplicateGenerator(String),
    #[error("`{0}` is not a generator here")]
    UnknownGenerator(String),
    #[error("edge `{edge}` has no image for generator `{generator}`")]
    MissingImage { edge: String, generator: String },
    #[error("graph is empty or disconnected")]
    Disconnected,
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("not a circuit at position {0}")]
    NotACircuit(usize),
    #[error("attaching map of `{0}` does not respect relators")]
    NotAHomomorphism(String),
    #[error("{0} assignments exceed the budget")]
    BudgetExceeded(u128),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: &[&str], relators: &[&str]) -> Result<Self, GogError> {
        let p = Presentation {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relators: relators.iter().map(|r| r.parse()).collect::<Result<_, _>>()?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), GogError> {
        let mut seen = BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g.as_str()) {
                return Err(GogError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &self.relators {
            r.check_letters(&seen)?;
        }
        Ok(())
    }

    /// Removes every generator that is itself a relator, deleting it from
    /// the other relators; trivial relators are dropped.
    pub fn eliminate_trivial_generators(&self) -> Presentation {
        let dead: BTreeSet<String> = self
            .relators
            .iter()
            .filter_map(|r| r.single_generator().map(str::to_string))
            .collect();
        Presentation {
            generators: self.generators.iter().filter(|g| !dead.contains(*g)).cloned().collect(),
            relators: self
                .relators
                .iter()
                .map(|r| r.without(&dead))
                .filter(|r| !r.is_empty())
                .collect(),
        }
    }
}

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(Word::to_string).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GogVertex {
    pub id: String,
    pub group: Presentation,
}

/// An edge `e` from `origin` to `terminus`; its reverse `ē` is implicit.
/// `psi` maps edge-group generators into the terminus group and `psi_bar`
/// into the origin group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GogEdge {
    pub id: String,
    pub origin: String,
    pub terminus: String,
    #[serde(default)]
    pub group: Presentation,
    #[serde(default)]
    pub psi: BTreeMap<String, Word>,
    #[serde(default)]
    pub psi_bar: BTreeMap<String, Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphOfGroups {
    pub vertices: Vec<GogVertex>,
    pub edges: Vec<GogEdge>,
}

impl GraphOfGroups {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn vertex(&self, id: &str) -> Result<&GogVertex, GogError> {
        self.vertices
            .iter()
            .find(|v| v.id == id)
            .ok_or_else(|| GogError::UnknownVertex(id.to_string()))
    }

    fn edge(&self, id: &str) -> Result<&GogEdge, GogError> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| GogError::UnknownEdge(id.to_string()))
    }

    /// Structural checks. Attaching maps into relator-free vertex groups are
    /// checked to send edge relators to the identity; the others are
    /// returned as warnings.
    pub fn validate(&self) -> Result<Vec<String>, GogError> {
        if self.vertices.is_empty() {
            return Err(GogError::Disconnected);
        }
        let mut names = BTreeSet::new();
        for v in &self.vertices {
            v.group.validate()?;
            for g in &v.group.generators {
                if !names.insert(g.clone()) {
                    return Err(GogError::DuplicateGenerator(g.clone()));
                }
            }
        }
        let mut warnings = Vec::new();
        for e in &self.edges {
            if !names.insert(e.id.clone()) {
                return Err(GogError::DuplicateGenerator(e.id.clone()));
            }
            e.group.validate()?;
            for (map, end) in [(&e.psi, &e.terminus), (&e.psi_bar, &e.origin)] {
                let target = self.vertex(end)?;
                let gens: BTreeSet<&str> = target.group.generators.iter().map(String::as_str).collect();
                for g in &e.group.generators {
                    let img = map.get(g).ok_or_else(|| GogError::MissingImage {
                        edge: e.id.clone(),
                        generator: g.clone(),
                    })?;
                    img.check_letters(&gens)?;
                }
                for r in &e.group.relators {
                    if target.group.relators.is_empty() {
                        if !r.substitute(map).is_empty() {
                            return Err(GogError::NotAHomomorphism(e.id.clone()));
                        }
                    } else {
                        warnings.push(format!(
                            "image of relator `{r}` of `{}` in `{}` not checked",
                            e.id, target.id
                        ));
                    }
                }
            }
        }
        let mut uf = UnionFind::new(&self.vertices);
        for e in &self.edges {
            uf.union(&e.origin, &e.terminus);
        }
        if uf.classes() != 1 {
            return Err(GogError::Disconnected);
        }
        Ok(warnings)
    }
}

struct UnionFind {
    index: BTreeMap<String, usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(vs: &[GogVertex]) -> Self {
        UnionFind {
            index: vs.iter().enumerate().map(|(i, v)| (v.id.clone(), i)).collect(),
            parent: (0..vs.len()).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Returns false when the two were already joined.
    fn union(&mut self, a: &str, b: &str) -> bool {
        let (a, b) = (self.index[a], self.index[b]);
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
        ra != rb
    }

    fn classes(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// The tree presentation of `π₁(Γ, 𝒢, v₀)`: vertex generators and
/// relators, one generator per edge, the relators `e ψ_e(g) e⁻¹ ψ_ē(g)⁻¹`
/// and `e` for every edge of the spanning tree.
pub fn pi1_presentation(gog: &GraphOfGroups, v0: &str, tree: &[String]) -> Result<Presentation, GogError> {
    gog.validate()?;
    gog.vertex(v0)?;
    let mut uf = UnionFind::new(&gog.vertices);
    let mut tree_set = BTreeSet::new();
    for t in tree {
        let e = gog.edge(t)?;
        if !tree_set.insert(t.clone()) {
            return Err(GogError::NotSpanningTree(format!("edge `{t}` listed twice")));
        }
        if !uf.union(&e.origin, &e.terminus) {
            return Err(GogError::NotSpanningTree(format!("edge `{t}` closes a cycle")));
        }
    }
    if uf.classes() != 1 {
        return Err(GogError::NotSpanningTree("tree does not reach every vertex".into()));
    }
    let mut generators = Vec::new();
    let mut relators = Vec::new();
    for v in &gog.vertices {
        generators.extend(v.group.generators.iter().cloned());
        relators.extend(v.group.relators.iter().cloned());
    }
    for e in &gog.edges {
        generators.push(e.id.clone());
        let sym = Word::letter(&e.id);
        for g in &e.group.generators {
            relators.push(
                sym.concat(&e.psi[g])
                    .concat(&sym.inverse())
                    .concat(&e.psi_bar[g].inverse()),
            );
        }
    }
    for t in tree {
        relators.push(Word::letter(t));
    }
    Ok(Presentation { generators, relators })
}

/// An edge traversed forwards or backwards (`ē`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedEdge {
    pub edge: String,
    pub reversed: bool,
}

impl std::str::FromStr for OrientedEdge {
    type Err = GogError;

    fn from_str(s: &str) -> Result<Self, GogError> {
        let s = s.trim();
        match s.strip_suffix("^-1") {
            Some(e) => Ok(OrientedEdge {
                edge: e.to_string(),
                reversed: true,
            }),
            None => Ok(OrientedEdge {
                edge: s.to_string(),
                reversed: false,
            }),
        }
    }
}

/// The element `g₀ e₁ g₁ ⋯ eₙ gₙ` of a circuit based at `v0`, as a word in
/// the generators of [`pi1_presentation`].
pub fn circuit_element(
    gog: &GraphOfGroups,
    v0: &str,
    edges: &[OrientedEdge],
    elements: &[Word],
) -> Result<Word, GogError> {
    gog.vertex(v0)?;
    if elements.len() != edges.len() + 1 {
        return Err(GogError::NotACircuit(elements.len().min(edges.len())));
    }
    let mut at = v0.to_string();
    let mut out = Word::default();
    for (i, g) in elements.iter().enumerate() {
        let vg = gog.vertex(&at)?;
        let gens: BTreeSet<&str> = vg.group.generators.iter().map(String::as_str).collect();
        g.check_letters(&gens)?;
        out = out.concat(g);
        if let Some(oe) = edges.get(i) {
            let e = gog.edge(&oe.edge)?;
            let (from, to) = if oe.reversed {
                (&e.terminus, &e.origin)
            } else {
                (&e.origin, &e.terminus)
            };
            if *from != at {
                return Err(GogError::NotACircuit(i));
            }
            let sym = Word::letter(&e.id);
            out = out.concat(&if oe.reversed { sym.inverse() } else { sym });
            at = to.clone();
        }
    }
    if at != v0 {
        return Err(GogError::NotACircuit(edges.len()));
    }
    Ok(out)
}

fn evaluate(word: &Word, slots: &BTreeMap<&str, usize>, assign: &[usize], elements: &[Element], inv: &[usize], target: &Group) -> Element {
    let mut acc = target.identity();
    for (g, e) in word.letters() {
        let k = assign[slots[g.as_str()]];
        let x = if e > 0 { k } else { inv[k] };
        acc = target.multiply(&acc, &elements[x]);
    }
    acc
}

pub const DEFAULT_HOM_BUDGET: u128 = 50_000_000;

/// Number of homomorphisms from the presented group to a finite `target`,
/// by exhaustive search over generator images.
pub fn hom_count(p: &Presentation, target: &Group, budget: u128) -> Result<u64, GogError> {
    p.validate()?;
    let elements = target.elements(100_000)?;
    let n = elements.len() as u128;
    let total = n.checked_pow(p.generators.len() as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(GogError::BudgetExceeded(total));
    }
    let inv: Vec<usize> = elements
        .iter()
        .map(|e| {
            let i = target.invert(e);
            elements.iter().position(|x| *x == i).expect("closed under inverses")
        })
        .collect();
    let slots: BTreeMap<&str, usize> = p.generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
    // relators become checkable once their last generator is assigned
    let mut due: Vec<Vec<&Word>> = vec![Vec::new(); p.generators.len() + 1];
    for r in &p.relators {
        let last = r.letters().map(|(g, _)| slots[g.as_str()] + 1).max().unwrap_or(0);
        due[last].push(r);
    }
    let id = target.identity();
    let ok = |level: usize, assign: &[usize]| {
        due[level]
            .iter()
            .all(|r| evaluate(r, &slots, assign, &elements, &inv, target) == id)
    };
    if !ok(0, &[]) {
        return Ok(0);
    }
    let k = p.generators.len();
    let mut assign = vec![0usize; k];
    let mut count = 0u64;
    let mut level = 0usize;
    // iterative depth-first search; assign[level] is the next candidate
    let mut next = vec![0usize; k + 1];
    loop {
        if level == k {
            count += 1;
            if k == 0 {
                break;
            }
            level -= 1;
            continue;
        }
        if next[level] == elements.len() {
            next[level] = 0;
            if level == 0 {
                break;
            }
            level -= 1;
            continue;
        }
        assign[level] = next[level];
        next[level] += 1;
        if ok(level + 1, &assign) {
            level += 1;
        }
    }
    Ok(count)
}

/// Rank of the abelianization (first Betti number), by integer row
/// reduction of the exponent-sum matrix.
pub fn homology_rank(p: &Presentation) -> usize {
    let slots: BTreeMap<&str, usize> = p.generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
    let n = p.generators.len();
    let mut rows: Vec<Vec<i128>> = p
        .relators
        .iter()
        .map(|r| {
            let mut row = vec![0i128; n];
            for (g, e) in r.letters() {
                row[slots[g.as_str()]] += e as i128;
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let (a, b) = (rows[rank][col], rows[i][col]);
                for c in 0..n {
                    rows[i][c] = rows[i][c] * a - rows[rank][c] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    for x in &mut rows[i] {
                        *x /= g;
                    }
                }
            }
        }
        rank += 1;
    }
    n - rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertex(id: &str, gens: &[&str], rels: &[&str]) -> GogVertex {
        GogVertex {
            id: id.into(),
            group: Presentation::new(gens, rels).unwrap(),
        }
    }

    fn plain_edge(id: &str, o: &str, t: &str) -> GogEdge {
        GogEdge {
            id: id.into(),
            origin: o.into(),
            terminus: t.into(),
            group: Presentation::default(),
            psi: BTreeMap::new(),
            psi_bar: BTreeMap::new(),
        }
    }

    #[test]
    fn loop_with_trivial_groups() {
        let g = GraphOfGroups {
            vertices: vec![vertex("v", &[], &[])],
            edges: vec![plain_edge("e", "v", "v")],
        };
        let p = pi1_presentation(&g, "v", &[]).unwrap();
        assert_eq!(p.to_string(), "< e |  >");
        assert_eq!(homology_rank(&p), 1);
    }

    #[test]
    fn free_product() {
        let g = GraphOfGroups {
            vertices: vec![vertex("u", &["x"], &["x^2"]), vertex("w", &["y"], &["y^3"])],
            edges: vec![plain_edge("e", "u", "w")],
        };
        let p = pi1_presentation(&g, "u", &["e".into()]).unwrap();
        assert_eq!(p.eliminate_trivial_generators().to_string(), "< x, y | x^2, y^3 >");
        let s3 = Group::symmetric(3);
        assert_eq!(hom_count(&p, &s3, DEFAULT_HOM_BUDGET).unwrap(), 12);
        assert!(matches!(
            pi1_presentation(&g, "u", &[]),
            Err(GogError::NotSpanningTree(_))
        ));
    }

    #[test]
    fn abelian_loop() {
        let mut e = plain_edge("e", "v", "v");
        e.group = Presentation::new(&["z"], &[]).unwrap();
        e.psi.insert("z".into(), "x".parse().unwrap());
        e.psi_bar.insert("z".into(), "x".parse().unwrap());
        let g = GraphOfGroups {
            vertices: vec![vertex("v", &["x"], &[])],
            edges: vec![e],
        };
        let p = pi1_presentation(&g, "v", &[]).unwrap();
        assert_eq!(p.to_string(), "< x, e | e x e^-1 x^-1 >");
        assert_eq!(homology_rank(&p), 2);
        let elt = circuit_element(&g, "v", &["e".parse().unwrap()], &[Word::default(), Word::default()]).unwrap();
        assert_eq!(elt.to_string(), "e");
    }

    #[test]
    fn circuits() {
        let g = GraphOfGroups {
            vertices: vec![vertex("u", &[], &[]), vertex("w", &[], &[])],
            edges: vec![plain_edge("e", "u", "w")],
        };
        assert!(circuit_element(&g, "u", &[], &[Word::default()]).unwrap().is_empty());
        assert!(matches!(
            circuit_element(&g, "u", &["e".parse().unwrap()], &[Word::default(), Word::default()]),
            Err(GogError::NotACircuit(1))
        ));
        assert!(matches!(
            circuit_element(&g, "w", &["e".parse().unwrap()], &[Word::default(), Word::default()]),
            Err(GogError::NotACircuit(0))
        ));
    }

    #[test]
    fn hom_counts() {
        let s3 = Group::symmetric(3);
        let p = Presentation::new(&["x"], &["x^2"]).unwrap();
        assert_eq!(hom_count(&p, &s3, DEFAULT_HOM_BUDGET).unwrap(), 4);
        let q = Presentation::new(&["y"], &["y^3"]).unwrap();
        assert_eq!(hom_count(&q, &s3, DEFAULT_HOM_BUDGET).unwrap(), 3);
        assert_eq!(hom_count(&Presentation::default(), &s3, DEFAULT_HOM_BUDGET).unwrap(), 1);
    }
}
