//! Brute-force oracles and random instance generators shared by the
//! integration tests. Oracles use only face records, corners and the
//! edge-end primitive of the complex; everything else is recomputed here.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use cubetool_core::complex::{build, CubeComplex, CubeComplexDescription, CubeDescription, CubicalMap, LinkVertex};
use cubetool_core::corpus;
use cubetool_core::gog::{HierarchyLedger, PortalRecord, PortalSide, Triplet};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- links

type End = (usize, bool);

fn end(lv: LinkVertex) -> End {
    (lv.edge, lv.end)
}

fn end_vertex(x: &CubeComplex, (e, at_end): End) -> usize {
    let c = x.cube(e).corners();
    if at_end {
        c[1]
    } else {
        c[0]
    }
}

/// Per vertex: link vertices and the corner simplices (possibly repeated).
pub struct BruteLink {
    pub vertices: BTreeSet<End>,
    pub simplices: Vec<Vec<End>>,
}

pub fn brute_links(x: &CubeComplex) -> BTreeMap<usize, BruteLink> {
    let mut out: BTreeMap<usize, BruteLink> = x
        .vertices()
        .map(|v| {
            (
                v,
                BruteLink {
                    vertices: BTreeSet::new(),
                    simplices: Vec::new(),
                },
            )
        })
        .collect();
    for e in x.edges() {
        for at_end in [false, true] {
            out.get_mut(&end_vertex(x, (e, at_end))).unwrap().vertices.insert((e, at_end));
        }
    }
    for (c, cube) in x.cubes().iter().enumerate() {
        if cube.dim() < 2 {
            continue;
        }
        for corner in 0..(1u32 << cube.dim()) {
            let v = cube.corners()[corner as usize];
            let s: Vec<End> = x.corner_edge_ends(c, corner).into_iter().map(end).collect();
            out.get_mut(&v).unwrap().simplices.push(s);
        }
    }
    out
}

/// Link condition by exhaustive clique enumeration.
pub fn brute_npc(x: &CubeComplex) -> bool {
    for (_, l) in brute_links(x) {
        let mut sets = BTreeSet::new();
        for s in &l.simplices {
            let set: BTreeSet<End> = s.iter().copied().collect();
            if set.len() != s.len() || !sets.insert(set) {
                return false;
            }
        }
        let mut adj: BTreeMap<End, BTreeSet<End>> = l.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for s in &sets {
            let s: Vec<End> = s.iter().copied().collect();
            for i in 0..s.len() {
                for j in 0..s.len() {
                    if i != j {
                        adj.get_mut(&s[i]).unwrap().insert(s[j]);
                    }
                }
            }
        }
        // faces of simplices are simplices (cube faces are cubes)
        let mut all = BTreeSet::new();
        for s in &sets {
            let s: Vec<End> = s.iter().copied().collect();
            for mask in 1u32..(1 << s.len()) {
                all.insert((0..s.len()).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect::<BTreeSet<_>>());
            }
        }
        // every clique of size >= 3 must be a simplex
        let verts: Vec<End> = l.vertices.iter().copied().collect();
        let mut stack: Vec<(Vec<usize>, usize)> = (0..verts.len()).map(|i| (vec![i], i + 1)).collect();
        while let Some((clique, next)) = stack.pop() {
            if clique.len() >= 3 && !all.contains(&clique.iter().map(|&i| verts[i]).collect::<BTreeSet<_>>()) {
                return false;
            }
            for k in next..verts.len() {
                if clique.iter().all(|&i| adj[&verts[i]].contains(&verts[k])) {
                    let mut c = clique.clone();
                    c.push(k);
                    stack.push((c, k + 1));
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------- walls

struct Uf(Vec<usize>);

impl Uf {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            i = self.0[i];
        }
        i
    }
    fn join(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct BruteSpecial {
    /// Per wall (keyed by smallest dual edge): self-crossing, one-sided,
    /// direct self-osculation (only for two-sided walls).
    pub walls: BTreeMap<usize, (bool, bool, Option<bool>)>,
    pub inter_osculating: BTreeSet<(usize, usize)>,
    pub special: bool,
}

/// The four pathologies from their definitions: walls as classes of
/// parallel edges across squares, sidedness by parity propagation.
pub fn brute_special(x: &CubeComplex) -> BruteSpecial {
    let n = x.len();
    let mut uf = Uf((0..n).collect());
    // (edge, edge, parity): e1 and e2 parallel in a square, parity of ends at the low side
    let mut constraints = Vec::new();
    let mut square_axes = Vec::new();
    let mut link_edges = BTreeSet::new();
    for s in x.cubes_of_dim(2) {
        for axis in 0..2 {
            let other = 1 - axis;
            let lo = x.edge_end(s, 0, axis);
            let hi = x.edge_end(s, 1 << other, axis);
            uf.join(lo.edge, hi.edge);
            constraints.push((lo.edge, hi.edge, lo.end ^ hi.end));
        }
        square_axes.push((x.edge_end(s, 0, 0).edge, x.edge_end(s, 0, 1).edge));
        for corner in 0..4 {
            let ee = x.corner_edge_ends(s, corner);
            let (a, b) = (end(ee[0]), end(ee[1]));
            link_edges.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<usize> = x.edges().collect();
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in &edges {
        let r = uf.find(e);
        classes.entry(r).or_default().push(e);
    }
    let classes: BTreeMap<usize, Vec<usize>> = classes.into_values().map(|es| (es[0], es)).collect();
    let key_of: HashMap<usize, usize> = classes
        .values()
        .flat_map(|es| es.iter().map(move |&e| (e, es[0])))
        .collect();
    // orientation parity per edge, by BFS over constraints
    let mut nbrs: HashMap<usize, Vec<(usize, bool)>> = HashMap::new();
    for &(a, b, p) in &constraints {
        nbrs.entry(a).or_default().push((b, p));
        nbrs.entry(b).or_default().push((a, p));
    }
    let mut orient: HashMap<usize, bool> = HashMap::new();
    let mut one_sided: BTreeSet<usize> = BTreeSet::new();
    for &e in &edges {
        if orient.contains_key(&e) {
            continue;
        }
        orient.insert(e, false);
        let mut q = VecDeque::from([e]);
        while let Some(a) = q.pop_front() {
            for &(b, p) in nbrs.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
                let want = orient[&a] ^ p;
                match orient.get(&b) {
                    None => {
                        orient.insert(b, want);
                        q.push_back(b);
                    }
                    Some(&o) if o != want => {
                        one_sided.insert(key_of[&e]);
                    }
                    _ => {}
                }
            }
        }
    }
    let mut walls = BTreeMap::new();
    for (_, es) in &classes {
        let key = es[0];
        let crossing = square_axes.iter().any(|&(a, b)| key_of[&a] == key && key_of[&b] == key);
        let os = one_sided.contains(&key);
        let direct = if os {
            None
        } else {
            // ends on the same side of the wall at a common vertex
            let mut found = false;
            for terminal in [false, true] {
                let mut by_vertex: BTreeMap<usize, Vec<End>> = BTreeMap::new();
                for &e in es {
                    let en = (e, orient[&e] ^ terminal);
                    by_vertex.entry(end_vertex(x, en)).or_default().push(en);
                }
                for ends in by_vertex.values() {
                    for i in 0..ends.len() {
                        for j in (i + 1)..ends.len() {
                            let (a, b) = (ends[i].min(ends[j]), ends[i].max(ends[j]));
                            if !link_edges.contains(&(a, b)) {
                                found = true;
                            }
                        }
                    }
                }
            }
            Some(found)
        };
        walls.insert(key, (crossing, os, direct));
    }
    let mut inter = BTreeSet::new();
    let crossing_pairs: BTreeSet<(usize, usize)> = square_axes
        .iter()
        .map(|&(a, b)| (key_of[&a], key_of[&b]))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    for &(w1, w2) in &crossing_pairs {
        'v: for v in x.vertices() {
            let ends_of = |w: usize| -> Vec<End> {
                classes[&w]
                    .iter()
                    .flat_map(|&e| [(e, false), (e, true)])
                    .filter(|&en| end_vertex(x, en) == v)
                    .collect()
            };
            for a in ends_of(w1) {
                for b in ends_of(w2) {
                    if !link_edges.contains(&(a.min(b), a.max(b))) {
                        inter.insert((w1, w2));
                        break 'v;
                    }
                }
            }
        }
    }
    let special = inter.is_empty() && walls.values().all(|&(c, o, d)| !c && !o && d == Some(false));
    BruteSpecial {
        walls,
        inter_osculating: inter,
        special,
    }
}

// ---------------------------------------------------------------- random complexes

fn rebuild(desc: &CubeComplexDescription) -> Option<CubeComplex> {
    CubeComplex::from_description(desc).ok()
}

/// Closed edge paths `a -e1- b -e2- c -e3- d -e4- a` with distinct edges.
fn four_cycles(x: &CubeComplex) -> Vec<[(usize, usize); 4]> {
    let mut out = Vec::new();
    let es: Vec<usize> = x.edges().collect();
    let mut at: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &e in &es {
        let c = x.cube(e).corners();
        at.entry(c[0]).or_default().push((e, c[1]));
        if c[0] != c[1] {
            at.entry(c[1]).or_default().push((e, c[0]));
        }
    }
    for &a in at.keys() {
        for &(e1, b) in &at[&a] {
            for &(e2, c) in at.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
                for &(e3, d) in at.get(&c).map(Vec::as_slice).unwrap_or(&[]) {
                    for &(e4, back) in at.get(&d).map(Vec::as_slice).unwrap_or(&[]) {
                        let set: BTreeSet<usize> = [e1, e2, e3, e4].into_iter().collect();
                        if back == a && set.len() == 4 {
                            out.push([(e1, a), (e2, b), (e3, c), (e4, d)]);
                        }
                    }
                }
            }
        }
        if out.len() > 200 {
            break;
        }
    }
    out
}

fn square_on(x: &CubeComplex, cyc: &[(usize, usize); 4], id: &str) -> CubeDescription {
    let [(e1, a), (e2, b), (e3, c), (e4, d)] = *cyc;
    CubeDescription {
        id: id.to_string(),
        dim: 2,
        faces: [e4, e2, e1, e3].iter().map(|&e| x.id(e).to_string()).collect(),
        corners: [a, b, d, c].iter().map(|&v| x.id(v).to_string()).collect(),
        face_maps: None,
    }
}

/// A connected simple graph on `n` vertices with about `extra` edges beyond
/// a random spanning tree.
pub fn random_simple_graph(r: &mut ChaCha8Rng, n: usize, extra: usize, name: &str) -> CubeComplex {
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 1..n {
        let u = r.random_range(0..v);
        edges.insert((u, v));
    }
    for _ in 0..extra {
        let (u, v) = (r.random_range(0..n), r.random_range(0..n));
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let es: Vec<(String, String, String)> = edges
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| (format!("e{k}"), vs[u].clone(), vs[v].clone()))
        .collect();
    let vr: Vec<&str> = vs.iter().map(String::as_str).collect();
    let er: Vec<(&str, &str, &str)> = es.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    build::graph(name, &vr, &er).unwrap()
}

/// Random mutation of a corpus complex or random graph: squares glued on
/// 4-cycles, duplicated squares, removed maximal cubes, extra edges.
pub fn random_complex(r: &mut ChaCha8Rng, max_cubes: usize) -> CubeComplex {
    loop {
        let base = match r.random_range(0..4) {
            0 => {
                let items = corpus::complexes();
                items.choose(r).unwrap().1.clone()
            }
            1 => build::grid(r.random_range(1..3), r.random_range(1..3)),
            _ => {
                let (n, extra) = (r.random_range(3..8), r.random_range(0..12));
                random_simple_graph(r, n, extra, "g")
            }
        };
        let mut x = base;
        for step in 0..r.random_range(1..9) {
            let mut desc = x.to_description();
            match r.random_range(0..7) {
                0..=3 => {
                    let cycles = four_cycles(&x);
                    if let Some(c) = cycles.choose(r) {
                        desc.cubes.push(square_on(&x, c, &format!("m{step}")));
                    }
                }
                4 => {
                    let squares: Vec<CubeDescription> = desc.cubes.iter().filter(|c| c.dim == 2).cloned().collect();
                    if let Some(sq) = squares.choose(r) {
                        desc.cubes.push(CubeDescription {
                            id: format!("d{step}"),
                            ..sq.clone()
                        });
                    }
                }
                5 => {
                    let maximal: Vec<usize> = (0..x.len()).filter(|&c| x.cofaces(c).is_empty() && x.cube(c).dim() > 0).collect();
                    if let Some(&c) = maximal.choose(r) {
                        let id = x.id(c).to_string();
                        desc.cubes.retain(|d| d.id != id);
                    }
                }
                _ => {
                    let vs: Vec<usize> = x.vertices().collect();
                    let (u, v) = (*vs.choose(r).unwrap(), *vs.choose(r).unwrap());
                    desc.cubes.push(CubeDescription {
                        id: format!("n{step}"),
                        dim: 1,
                        faces: vec![x.id(u).to_string(), x.id(v).to_string()],
                        corners: vec![x.id(u).to_string(), x.id(v).to_string()],
                        face_maps: None,
                    });
                }
            }
            if let Some(y) = rebuild(&desc) {
                x = y;
            }
        }
        if x.len() <= max_cubes {
            return x;
        }
    }
}

// ---------------------------------------------------------------- maps

/// Cell-by-cell agreement of two maps with a common domain, through
/// dimension `max_dim`.
pub fn maps_agree(m1: &CubicalMap, m2: &CubicalMap, max_dim: usize) -> Result<(), String> {
    let x = m1.domain();
    for c in 0..x.len() {
        let d = x.cube(c).dim();
        if d > max_dim {
            continue;
        }
        if m1.codomain().id(m1.image(c)) != m2.codomain().id(m2.image(c)) {
            return Err(format!("cube {} has images {} and {}", x.id(c), m1.image(c), m2.image(c)));
        }
        for corner in 0..(1u32 << d) {
            if m1.corner_image(c, corner) != m2.corner_image(c, corner) {
                return Err(format!("cube {} corner {corner} disagrees", x.id(c)));
            }
        }
    }
    Ok(())
}

/// Random local isometry into a simple graph with at most `max_cells`
/// cells: a subgraph inclusion or a non-backtracking walk.
pub fn random_graph_isometry(r: &mut ChaCha8Rng, max_cells: usize) -> CubicalMap {
    let b = loop {
        let (n, extra) = (r.random_range(2..8), r.random_range(0..5));
        let g = random_simple_graph(r, n, extra, "B");
        if g.len() <= max_cells {
            break g;
        }
    };
    let endpoints = |e: usize| {
        let c = b.cube(e).corners();
        (c[0], c[1])
    };
    let edge_between = |u: usize, v: usize| {
        b.edges().find(|&e| {
            let (a, c) = endpoints(e);
            (a, c) == (u, v) || (a, c) == (v, u)
        })
    };
    let vs: Vec<usize> = b.vertices().collect();
    if r.random_bool(0.5) {
        // walk
        let len = r.random_range(1..7);
        let mut walk = vec![*vs.choose(r).unwrap()];
        for _ in 0..len {
            let cur = *walk.last().unwrap();
            let prev = walk.len().checked_sub(2).map(|i| walk[i]);
            let nb: Vec<usize> = b
                .edges()
                .filter_map(|e| {
                    let (a, c) = endpoints(e);
                    if a == cur {
                        Some(c)
                    } else if c == cur {
                        Some(a)
                    } else {
                        None
                    }
                })
                .filter(|&w| Some(w) != prev)
                .collect();
            match nb.choose(r) {
                Some(&w) => walk.push(w),
                None => break,
            }
        }
        let a = build::path(walk.len() - 1).renamed("A");
        let mut images = vec![0; a.len()];
        for i in 0..walk.len() {
            images[a.index_of(&format!("v{i}")).unwrap()] = walk[i];
        }
        for i in 0..walk.len() - 1 {
            images[a.index_of(&format!("e{i}")).unwrap()] = edge_between(walk[i], walk[i + 1]).unwrap();
        }
        CubicalMap::infer(Arc::new(a), Arc::new(b), images, &[]).unwrap()
    } else {
        // connected subgraph: grow from a vertex
        let mut keep_v = BTreeSet::from([*vs.choose(r).unwrap()]);
        let mut keep_e = BTreeSet::new();
        for _ in 0..r.random_range(0..8) {
            let cand: Vec<usize> = b
                .edges()
                .filter(|&e| {
                    let (u, v) = endpoints(e);
                    !keep_e.contains(&e) && (keep_v.contains(&u) || keep_v.contains(&v))
                })
                .collect();
            if let Some(&e) = cand.choose(r) {
                let (u, v) = endpoints(e);
                keep_e.insert(e);
                keep_v.insert(u);
                keep_v.insert(v);
            }
        }
        let vnames: Vec<String> = keep_v.iter().map(|&v| format!("a{}", b.id(v))).collect();
        let enames: Vec<(String, String, String)> = keep_e
            .iter()
            .map(|&e| {
                let (u, v) = endpoints(e);
                (format!("a{}", b.id(e)), format!("a{}", b.id(u)), format!("a{}", b.id(v)))
            })
            .collect();
        let vr: Vec<&str> = vnames.iter().map(String::as_str).collect();
        let er: Vec<(&str, &str, &str)> = enames.iter().map(|(p, q, s)| (p.as_str(), q.as_str(), s.as_str())).collect();
        let a = build::graph("A", &vr, &er).unwrap();
        let images = (0..a.len())
            .map(|c| b.index_of(&a.id(c)[1..]).unwrap())
            .collect();
        CubicalMap::infer(Arc::new(a), Arc::new(b), images, &[]).unwrap()
    }
}

// ---------------------------------------------------------------- ledgers

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// A random ledger whose classes are balanced and whose modified sizes
/// `k·sz` are constant on each class. Stabilizer indices divide both the
/// class size and the owner's index. The last triplet has weight 1 and
/// index 12 and absorbs the imbalance.
pub fn random_balanced_ledger(r: &mut ChaCha8Rng) -> HierarchyLedger {
    const SIZES: [u64; 6] = [1, 2, 3, 4, 6, 12];
    let nt = r.random_range(1..5);
    let mut triplets: Vec<Triplet> = (0..nt)
        .map(|i| Triplet {
            id: format!("Z{i}"),
            weight: r.random_range(1..4),
            index: *SIZES.choose(r).unwrap(),
        })
        .collect();
    triplets.push(Triplet {
        id: format!("Z{nt}"),
        weight: 1,
        index: 12,
    });
    let nc = r.random_range(1..4);
    let classes: Vec<String> = (0..nc).map(|i| format!("c{i}")).collect();
    let mut portals: Vec<PortalRecord> = Vec::new();
    for c in &classes {
        let s = *SIZES.choose(r).unwrap();
        let push = |portals: &mut Vec<PortalRecord>, owner: &Triplet, side: usize, k: u64| {
            portals.push(PortalRecord {
                id: format!("{c}P{}", portals.len()),
                owner: owner.id.clone(),
                class: c.clone(),
                side: if side == 0 { PortalSide::Plus } else { PortalSide::Minus },
                size: s / k,
                stabilizer_index: k,
                orbits: 1,
                modified_size: Some(s),
            });
        };
        for _ in 0..r.random_range(0..5) {
            let owner = triplets.choose(r).unwrap();
            let ks: Vec<u64> = divisors(s).into_iter().filter(|k| owner.index % k == 0).collect();
            let k = *ks.choose(r).unwrap();
            push(&mut portals, owner, r.random_range(0..2), k);
        }
        let sum = |portals: &[PortalRecord], side: PortalSide| -> u64 {
            portals
                .iter()
                .filter(|p| &p.class == c && p.side == side)
                .map(|p| triplets.iter().find(|t| t.id == p.owner).unwrap().weight * p.size)
                .sum()
        };
        let (plus, minus) = (sum(&portals, PortalSide::Plus), sum(&portals, PortalSide::Minus));
        let (light, diff) = if plus < minus { (0, minus - plus) } else { (1, plus - minus) };
        let balancer = triplets.last().unwrap();
        for _ in 0..diff / s {
            push(&mut portals, balancer, light, 1);
        }
        for _ in 0..diff % s {
            push(&mut portals, balancer, light, s);
        }
    }
    HierarchyLedger {
        triplets,
        classes,
        portals,
    }
}

// ---------------------------------------------------------------- metric

/// Edge classes under "opposite in a square".
pub fn wall_classes(x: &CubeComplex) -> Vec<Vec<usize>> {
    let mut uf = Uf((0..x.len()).collect());
    for s in x.cubes_of_dim(2) {
        for axis in 0..2 {
            let lo = x.edge_end(s, 0, axis).edge;
            let hi = x.edge_end(s, 1 << (1 - axis), axis).edge;
            uf.join(lo, hi);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in x.edges() {
        let r = uf.find(e);
        classes.entry(r).or_default().push(e);
    }
    classes.into_values().collect()
}

fn neighbours(x: &CubeComplex, skip: &BTreeSet<usize>) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = x.vertices().map(|v| (v, Vec::new())).collect();
    for e in x.edges().filter(|e| !skip.contains(e)) {
        let c = x.cube(e).corners();
        out.get_mut(&c[0]).unwrap().push(c[1]);
        out.get_mut(&c[1]).unwrap().push(c[0]);
    }
    out
}

fn bfs_in(nb: &BTreeMap<usize, Vec<usize>>, src: usize) -> HashMap<usize, usize> {
    let mut d = HashMap::from([(src, 0)]);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        for &v in &nb[&u] {
            if !d.contains_key(&v) {
                d.insert(v, d[&u] + 1);
                q.push_back(v);
            }
        }
    }
    d
}

pub struct Metric {
    pub dist: HashMap<usize, HashMap<usize, usize>>,
    pub walls: Vec<Vec<usize>>,
    /// Per wall: the vertices in the component of the first dual edge's
    /// first endpoint once the dual edges are removed.
    pub minus: Vec<BTreeSet<usize>>,
}

impl Metric {
    pub fn new(x: &CubeComplex) -> Metric {
        let nb = neighbours(x, &BTreeSet::new());
        let dist = x.vertices().map(|v| (v, bfs_in(&nb, v))).collect();
        let walls = wall_classes(x);
        let minus = walls
            .iter()
            .map(|w| {
                let skip: BTreeSet<usize> = w.iter().copied().collect();
                let nb = neighbours(x, &skip);
                bfs_in(&nb, x.cube(w[0]).corners()[0]).into_keys().collect()
            })
            .collect();
        Metric { dist, walls, minus }
    }

    pub fn d(&self, u: usize, v: usize) -> usize {
        self.dist[&u][&v]
    }

    /// Walls whose removal separates `u` from `v`, as indices into `walls`.
    pub fn separating(&self, u: usize, v: usize) -> BTreeSet<usize> {
        (0..self.walls.len())
            .filter(|&w| self.minus[w].contains(&u) != self.minus[w].contains(&v))
            .collect()
    }

    /// Every triple of vertices has exactly one median.
    pub fn is_median(&self) -> bool {
        let vs: Vec<usize> = self.dist.keys().copied().collect();
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                for &c in &vs[j + 1..] {
                    let medians = vs
                        .iter()
                        .filter(|&&m| {
                            self.d(a, m) + self.d(m, b) == self.d(a, b)
                                && self.d(b, m) + self.d(m, c) == self.d(b, c)
                                && self.d(a, m) + self.d(m, c) == self.d(a, c)
                        })
                        .count();
                    if medians != 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Geodesic convexity by interval closure.
    pub fn is_convex(&self, set: &BTreeSet<usize>) -> bool {
        let all: Vec<usize> = self.dist.keys().copied().collect();
        for &u in set {
            for &v in set {
                if u < v {
                    let duv = self.d(u, v);
                    for &z in &all {
                        if !set.contains(&z) && self.d(u, z) + self.d(z, v) == duv {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------- face posets

/// Number of pairs `σ ≤ τ` in the face poset with `dim τ − dim σ = k`,
/// per `k`. Faces are found by closing under face records, so this is
/// only meaningful when distinct faces are distinct cubes.
pub fn face_intervals(x: &CubeComplex) -> Vec<usize> {
    let mut out = vec![0; x.dim() + 1];
    for c in 0..x.len() {
        let mut below = BTreeSet::from([c]);
        let mut stack = vec![c];
        while let Some(f) = stack.pop() {
            for &g in x.cube(f).faces() {
                if below.insert(g) {
                    stack.push(g);
                }
            }
        }
        for f in below {
            out[x.cube(c).dim() - x.cube(f).dim()] += 1;
        }
    }
    out
}
