//! Truncated combinatorial cusped spaces, horoballs and a slim-triangle
//! probe.
//!
//! Horizontal and Cayley edges are stored once per unordered pair
//! `{v, vs}` and inverse pair `{s, s⁻¹}`; an involution `s` contributes two
//! parallel edges.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Element, Group, GroupError};

#[derive(Debug, Error)]
pub enum CuspedError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("ball has more than {0} vertices")]
    BallBudgetExceeded(usize),
    #[error("peripheral generator `{0}` is not in the generating set")]
    NotAGenerator(String),
    #[error("unknown coset {0}")]
    UnknownCoset(usize),
    #[error("depth {got} exceeds the truncation depth {max}")]
    TooDeep { got: usize, max: usize },
    #[error("graph is not connected")]
    Disconnected,
}

/// `S_0 = seed \ {1}` and `S_n = S_{n−1} ∪ {s₁s₂ ≠ 1 : s₁, s₂ ∈ S_{n−1}}`.
/// Each set is sorted by canonical form.
pub fn doubling_sets(g: &Group, seed: &[Element], n: usize) -> Result<Vec<Vec<Element>>, CuspedError> {
    g.check_axioms(seed)?;
    let id = g.identity();
    let mut current: BTreeSet<Element> = seed.iter().filter(|s| **s != id).cloned().collect();
    let mut out = vec![current.iter().cloned().collect::<Vec<_>>()];
    for _ in 0..n {
        let mut next = current.clone();
        for a in &current {
            for b in &current {
                let p = g.multiply(a, b);
                if p != id {
                    next.insert(p);
                }
            }
        }
        current = next;
        out.push(current.iter().cloned().collect());
    }
    Ok(out)
}

/// One element from each inverse pair, in canonical order. Involutions are
/// listed twice so that they yield two parallel edges.
fn edge_generators(g: &Group, set: &[Element]) -> Vec<Element> {
    let mut out = Vec::new();
    for s in set {
        let inv = g.invert(s);
        if *s < inv {
            out.push(s.clone());
        } else if *s == inv {
            out.push(s.clone());
            out.push(s.clone());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralSpec {
    /// Labels of elements of the generating set lying in the subgroup.
    pub generators: Vec<String>,
    /// Coset representatives as words in generator labels; all cosets
    /// meeting the ball when omitted.
    #[serde(default)]
    pub cosets: Option<Vec<Vec<String>>>,
}

/// File form of a cusped-space input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub group: Group,
    #[serde(default)]
    pub peripherals: Vec<PeripheralSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspedEdgeKind {
    Cayley,
    Vertical,
    Horizontal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspedVertex {
    pub id: String,
    pub depth: usize,
    /// Horoball index for depth ≥ 1.
    pub horoball: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspedEdge {
    pub a: usize,
    pub b: usize,
    pub kind: CuspedEdgeKind,
    pub generator: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoroballInfo {
    pub peripheral: usize,
    pub representative: String,
    /// Vertices by level, level 0 being the Cayley vertices of the coset.
    pub levels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspedBall {
    pub rho: usize,
    pub depth: usize,
    pub vertices: Vec<CuspedVertex>,
    pub edges: Vec<CuspedEdge>,
    pub horoballs: Vec<HoroballInfo>,
    /// `S_n` labels per peripheral and level.
    pub doubling: Vec<Vec<Vec<String>>>,
    /// Cayley vertices with a neighbour outside the ball; edges there are
    /// not represented.
    pub frontier: Vec<usize>,
}

impl CuspedBall {
    pub fn count(&self, kind: CuspedEdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn graph(&self) -> SimpleGraph {
        SimpleGraph::new(self.vertices.len(), self.edges.iter().map(|e| (e.a, e.b)))
    }
}

pub const DEFAULT_BALL_BUDGET: usize = 200_000;

/// The Cayley ball of radius `rho` with horoballs of depth `depth` glued
/// over every requested coset.
pub fn build_cusped_ball(spec: &GroupSpec, rho: usize, depth: usize, budget: usize) -> Result<CuspedBall, CuspedError> {
    let g = &spec.group;
    g.validate()?;
    let gens = g.generators();
    g.check_axioms(&gens)?;

    // Cayley ball
    let id = g.identity();
    let mut index: HashMap<Element, usize> = HashMap::from([(id.clone(), 0)]);
    let mut elements = vec![id];
    let mut dist = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if dist[i] == rho {
            continue;
        }
        for s in &gens {
            let h = g.multiply(&elements[i], s);
            if !index.contains_key(&h) {
                if elements.len() >= budget {
                    return Err(CuspedError::BallBudgetExceeded(budget));
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
                dist.push(dist[i] + 1);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    let mut vertices: Vec<CuspedVertex> = elements
        .iter()
        .map(|e| CuspedVertex {
            id: g.label(e),
            depth: 0,
            horoball: None,
        })
        .collect();
    let mut edges = Vec::new();
    for s in edge_generators(g, &gens) {
        for (i, e) in elements.iter().enumerate() {
            if let Some(&k) = index.get(&g.multiply(e, &s)) {
                edges.push(CuspedEdge {
                    a: i,
                    b: k,
                    kind: CuspedEdgeKind::Cayley,
                    generator: Some(g.label(&s)),
                });
            }
        }
    }
    let frontier = (0..elements.len())
        .filter(|&i| gens.iter().any(|s| !index.contains_key(&g.multiply(&elements[i], s))))
        .collect();

    let mut horoballs = Vec::new();
    let mut doubling = Vec::new();
    for (pi, per) in spec.peripherals.iter().enumerate() {
        let mut seed = Vec::new();
        for l in &per.generators {
            let s = gens
                .iter()
                .position(|x| g.label(x) == *l)
                .ok_or_else(|| CuspedError::NotAGenerator(l.clone()))?;
            seed.push(gens[s].clone());
            let inv = g.invert(&gens[s]);
            if gens.contains(&inv) {
                seed.push(inv);
            }
        }
        let sets = doubling_sets(g, &seed, depth)?;
        doubling.push(
            sets.iter()
                .map(|s| s.iter().map(|e| g.label(e)).collect())
                .collect(),
        );
        let s0 = &sets[0];
        // coset vertices: S_0-components inside the ball
        let component = |start: usize| {
            let mut seen = BTreeSet::from([start]);
            let mut q = VecDeque::from([start]);
            while let Some(u) = q.pop_front() {
                for s in s0 {
                    if let Some(&k) = index.get(&g.multiply(&elements[u], s)) {
                        if seen.insert(k) {
                            q.push_back(k);
                        }
                    }
                }
            }
            seen
        };
        let mut cosets: Vec<BTreeSet<usize>> = Vec::new();
        match &per.cosets {
            Some(reps) => {
                for w in reps {
                    let e = g.word(w)?;
                    if let Some(&k) = index.get(&e) {
                        let c = component(k);
                        if !cosets.contains(&c) {
                            cosets.push(c);
                        }
                    }
                }
            }
            None => {
                let mut covered = BTreeSet::new();
                for k in 0..elements.len() {
                    if !covered.contains(&k) {
                        let c = component(k);
                        covered.extend(c.iter().copied());
                        cosets.push(c);
                    }
                }
            }
        }
        for base in cosets {
            let h = horoballs.len();
            let rep = *base.iter().next().expect("non-empty coset");
            let mut levels = vec![base.iter().copied().collect::<Vec<_>>()];
            let mut at_level: BTreeMap<usize, usize> = base.iter().map(|&v| (v, v)).collect();
            for n in 0..=depth {
                if n > 0 {
                    let mut next = BTreeMap::new();
                    for (&v, &below) in &at_level {
                        let idx = vertices.len();
                        vertices.push(CuspedVertex {
                            id: format!("P{pi}:{}@{n}", vertices[v].id),
                            depth: n,
                            horoball: Some(h),
                        });
                        edges.push(CuspedEdge {
                            a: below,
                            b: idx,
                            kind: CuspedEdgeKind::Vertical,
                            generator: None,
                        });
                        next.insert(v, idx);
                    }
                    at_level = next;
                    levels.push(at_level.values().copied().collect());
                }
                for s in edge_generators(g, &sets[n]) {
                    for (&v, &here) in &at_level {
                        if let Some(there) = index
                            .get(&g.multiply(&elements[v], &s))
                            .and_then(|k| at_level.get(k))
                        {
                            edges.push(CuspedEdge {
                                a: here,
                                b: *there,
                                kind: CuspedEdgeKind::Horizontal,
                                generator: Some(g.label(&s)),
                            });
                        }
                    }
                }
            }
            horoballs.push(HoroballInfo {
                peripheral: pi,
                representative: vertices[rep].id.clone(),
                levels,
            });
        }
    }
    Ok(CuspedBall {
        rho,
        depth,
        vertices,
        edges,
        horoballs,
        doubling,
        frontier,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Horoball {
    pub coset: usize,
    pub min_depth: usize,
    pub vertices: BTreeSet<usize>,
    /// Indices into the ball's edge list.
    pub edges: Vec<usize>,
}

/// Full subgraph on the vertices of horoball `coset` at depth ≥ `r`.
pub fn horoball(ball: &CuspedBall, coset: usize, r: usize) -> Result<Horoball, CuspedError> {
    let info = ball.horoballs.get(coset).ok_or(CuspedError::UnknownCoset(coset))?;
    if r > ball.depth {
        return Err(CuspedError::TooDeep {
            got: r,
            max: ball.depth,
        });
    }
    let vertices: BTreeSet<usize> = info.levels[r..].iter().flatten().copied().collect();
    let edges = ball
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| vertices.contains(&e.a) && vertices.contains(&e.b))
        .map(|(i, _)| i)
        .collect();
    Ok(Horoball {
        coset,
        min_depth: r,
        vertices,
        edges,
    })
}

/// An undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        SimpleGraph {
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Distances and parents (smallest-index predecessor) from `src`.
    fn bfs(&self, src: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.len();
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push_back(v);
                }
            }
        }
        (dist, parent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlimReport {
    /// Largest distance from a point of one side of a sampled geodesic
    /// triangle to the union of the other two sides.
    pub delta: usize,
    pub worst: Option<(usize, usize, usize)>,
    pub triples: usize,
    /// Four-point constant over the sampled quadruples.
    pub four_point: f64,
    pub quadruples: usize,
}

/// Slim-triangle probe. Geodesics follow smallest-index BFS parents. With
/// `samples = None` all triples (and all quadruples up to 60 vertices) are
/// examined; otherwise that many of each are drawn with a ChaCha8 generator
/// seeded by `seed`.
pub fn slim_probe(graph: &SimpleGraph, samples: Option<usize>, seed: u64) -> Result<SlimReport, CuspedError> {
    let n = graph.len();
    let tables: Vec<(Vec<usize>, Vec<usize>)> = (0..n).map(|v| graph.bfs(v)).collect();
    if n > 0 && tables[0].0.contains(&usize::MAX) {
        return Err(CuspedError::Disconnected);
    }
    let geodesic = |a: usize, b: usize| {
        // walk from b back to a along parents of the BFS rooted at a
        let parent = &tables[a].1;
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            path.push(cur);
        }
        path
    };
    let d = |a: usize, b: usize| tables[a].0[b];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<(usize, usize, usize)> = match samples {
        None => {
            let mut t = Vec::new();
            for a in 0..n {
                for b in a..n {
                    for c in b..n {
                        t.push((a, b, c));
                    }
                }
            }
            t
        }
        Some(k) if n > 0 => (0..k)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)))
            .collect(),
        Some(_) => Vec::new(),
    };
    let mut delta = 0;
    let mut worst = None;
    for &(a, b, c) in &triples {
        let sides = [geodesic(a, b), geodesic(b, c), geodesic(c, a)];
        for i in 0..3 {
            let others: Vec<usize> = sides[(i + 1) % 3]
                .iter()
                .chain(&sides[(i + 2) % 3])
                .copied()
                .collect();
            for &p in &sides[i] {
                let m = others.iter().map(|&q| d(p, q)).min().unwrap_or(0);
                if m > delta || worst.is_none() {
                    delta = delta.max(m);
                    worst = Some((a, b, c));
                }
            }
        }
    }
    let quads: Vec<[usize; 4]> = match samples {
        None if n <= 60 => {
            let mut qs = Vec::new();
            for a in 0..n {
                for b in a..n {
                    for c in b..n {
                        for e in c..n {
                            qs.push([a, b, c, e]);
                        }
                    }
                }
            }
            qs
        }
        None => Vec::new(),
        Some(k) if n > 0 => (0..k)
            .map(|_| std::array::from_fn(|_| rng.random_range(0..n)))
            .collect(),
        Some(_) => Vec::new(),
    };
    let mut four = 0usize;
    for q in &quads {
        let mut sums = [
            d(q[0], q[1]) + d(q[2], q[3]),
            d(q[0], q[2]) + d(q[1], q[3]),
            d(q[0], q[3]) + d(q[1], q[2]),
        ];
        sums.sort_unstable();
        four = four.max(sums[2] - sums[1]);
    }
    Ok(SlimReport {
        delta,
        worst,
        triples: triples.len(),
        four_point: four as f64 / 2.0,
        quadruples: quads.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic3() -> GroupSpec {
        GroupSpec {
            group: Group::Cyclic { order: 3 },
            peripherals: vec![PeripheralSpec {
                generators: vec!["t".into(), "t^2".into()],
                cosets: None,
            }],
        }
    }

    #[test]
    fn doubling_cyclic() {
        let g = Group::Cyclic { order: 3 };
        let sets = doubling_sets(&g, &g.generators(), 3).unwrap();
        assert!(sets.iter().all(|s| s.len() == 2));
        let z = Group::integers();
        let sets = doubling_sets(&z, &z.generators(), 3).unwrap();
        assert_eq!(sets.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 4, 8, 16]);
        assert!(doubling_sets(&z, &[], 2).unwrap().iter().all(Vec::is_empty));
    }

    #[test]
    fn cyclic_ball() {
        let b = build_cusped_ball(&cyclic3(), 2, 2, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(b.vertices.len(), 9);
        assert_eq!(b.count(CuspedEdgeKind::Cayley), 3);
        assert_eq!(b.count(CuspedEdgeKind::Horizontal), 9);
        assert_eq!(b.count(CuspedEdgeKind::Vertical), 6);
        let h = horoball(&b, 0, 1).unwrap();
        assert_eq!(h.vertices.len(), 6);
        assert_eq!(horoball(&b, 0, 0).unwrap().vertices.len(), 9);
        assert!(matches!(horoball(&b, 1, 0), Err(CuspedError::UnknownCoset(1))));
    }

    #[test]
    fn free_group_tree() {
        let spec = GroupSpec {
            group: Group::Free { rank: 2 },
            peripherals: vec![],
        };
        let b = build_cusped_ball(&spec, 2, 3, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(b.vertices.len(), 17);
        assert_eq!(b.edges.len(), 16);
        assert_eq!(slim_probe(&b.graph(), None, 0).unwrap().delta, 0);
    }

    #[test]
    fn twelve_cycle() {
        let g = SimpleGraph::new(12, (0..12).map(|i| (i, (i + 1) % 12)));
        let r = slim_probe(&g, None, 0).unwrap();
        assert_eq!(r.delta, 3);
    }

    #[test]
    fn budget() {
        let spec = GroupSpec {
            group: Group::Free { rank: 3 },
            peripherals: vec![],
        };
        assert!(matches!(
            build_cusped_ball(&spec, 6, 0, 100),
            Err(CuspedError::BallBudgetExceeded(100))
        ));
    }
}
