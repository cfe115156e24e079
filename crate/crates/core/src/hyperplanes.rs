//! Walls of a cube complex and the specialness pathologies.
//!
//! A midcube is a pair `(cube, axis)`. Two midcubes are adjacent when one is
//! a face of the other; walls are the connected components. Dual edges of a
//! wall are the edges whose (unique) midcube it contains.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    barycentric_subdivision, bit, ComplexError, CubeComplex, CubicalMap, LinkVertex, Subdivision,
};

#[derive(Debug, Error)]
pub enum HyperplaneError {
    #[error("wall {0} is one-sided; direct self-osculation needs a co-orientation")]
    RequiresTwoSided(usize),
    #[error("wall {0} of the subdivision is one-sided")]
    OneSidedWall(usize),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub id: usize,
    /// `(cube, axis)` pairs, sorted.
    pub midcubes: Vec<(usize, usize)>,
    /// Sorted edge indices.
    pub dual_edges: Vec<usize>,
    /// Cubes containing a midcube of the wall.
    pub carrier: BTreeSet<usize>,
}

/// All walls of a complex with lookup tables.
#[derive(Clone, Debug)]
pub struct WallSet {
    pub walls: Vec<Wall>,
    of_midcube: HashMap<(usize, usize), usize>,
}

impl WallSet {
    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    pub fn wall(&self, id: usize) -> &Wall {
        &self.walls[id]
    }

    /// `W(e)` for an edge index.
    pub fn of_edge(&self, edge: usize) -> usize {
        self.of_midcube[&(edge, 0)]
    }

    pub fn of_midcube(&self, cube: usize, axis: usize) -> usize {
        self.of_midcube[&(cube, axis)]
    }

    /// Vertices of the wall's carrier.
    pub fn carrier_vertices(&self, x: &CubeComplex, id: usize) -> BTreeSet<usize> {
        self.walls[id]
            .carrier
            .iter()
            .flat_map(|&c| x.cube(c).corners().iter().copied())
            .collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Partition of all midcubes into walls, numbered by smallest dual edge.
pub fn walls(x: &CubeComplex) -> WallSet {
    let mut mids: Vec<(usize, usize)> = Vec::new();
    for (c, cube) in x.cubes().iter().enumerate() {
        for k in 0..cube.dim() {
            mids.push((c, k));
        }
    }
    let idx: HashMap<(usize, usize), usize> = mids.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut uf = UnionFind::new(mids.len());
    for &(c, k) in &mids {
        let cube = x.cube(c);
        for i in 0..cube.dim() {
            if i == k {
                continue;
            }
            for s in [false, true] {
                let f = cube.face(i, s);
                let sigma = cube.face_map(i, s);
                let kk = if k < i { k } else { k - 1 };
                let t = (0..sigma.len()).find(|&t| sigma.target(t).0 == kk).unwrap();
                uf.union(idx[&(c, k)], idx[&(f, t)]);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, &m) in mids.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(m);
    }
    let mut walls: Vec<Wall> = groups
        .into_values()
        .map(|mut ms| {
            ms.sort_unstable();
            let dual_edges: Vec<usize> = ms
                .iter()
                .filter(|&&(c, _)| x.cube(c).dim() == 1)
                .map(|&(c, _)| c)
                .collect();
            let carrier = ms.iter().map(|&(c, _)| c).collect();
            Wall {
                id: 0,
                midcubes: ms,
                dual_edges,
                carrier,
            }
        })
        .collect();
    walls.sort_by_key(|w| w.dual_edges[0]);
    let mut of_midcube = HashMap::new();
    for (i, w) in walls.iter_mut().enumerate() {
        w.id = i;
        for &m in &w.midcubes {
            of_midcube.insert(m, i);
        }
    }
    WallSet { walls, of_midcube }
}

/// Orientation data for one wall. For a two-sided wall, `orientation[k]`
/// belongs to `dual_edges[k]` and names the end of the edge lying on the
/// negative side (its initial end). For a one-sided wall, `odd_cycle` lists
/// dual edges around a cycle of constraints with odd total parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidednessCertificate {
    pub wall: usize,
    pub two_sided: bool,
    pub orientation: Option<Vec<bool>>,
    pub odd_cycle: Option<Vec<usize>>,
}

impl SidednessCertificate {
    /// Initial end of a dual edge, for two-sided walls.
    pub fn initial_end(&self, w: &Wall, edge: usize) -> Option<bool> {
        let o = self.orientation.as_ref()?;
        let k = w.dual_edges.binary_search(&edge).ok()?;
        Some(o[k])
    }
}

/// Edges of `cube` parallel to `axis`, with whether each runs against it.
fn parallel_edges(x: &CubeComplex, cube: usize, axis: usize) -> Vec<(usize, bool)> {
    let d = x.cube(cube).dim();
    let mask = ((1u32 << d) - 1) & !(1 << axis);
    let mut out = Vec::new();
    for rest in 0..(1u32 << d) {
        if bit(rest, axis) {
            continue;
        }
        let (e, phi) = x.subface(cube, mask, rest);
        out.push((e, phi.target(0).1));
    }
    out
}

/// Two-colours the orientation constraints of a wall: in every cube, all
/// dual edges parallel to the wall's axis must point the same way.
pub fn sidedness(x: &CubeComplex, ws: &WallSet, wall: usize) -> SidednessCertificate {
    let w = &ws.walls[wall];
    let pos: HashMap<usize, usize> = w.dual_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let n = w.dual_edges.len();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for &(c, k) in &w.midcubes {
        if x.cube(c).dim() < 2 {
            continue;
        }
        let edges = parallel_edges(x, c, k);
        let (e0, f0) = edges[0];
        for &(e, f) in &edges[1..] {
            let (a, b) = (pos[&e0], pos[&e]);
            adj[a].push((b, f0 ^ f));
            adj[b].push((a, f0 ^ f));
        }
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &(v, par) in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(cu ^ par);
                        parent[v] = Some(u);
                        queue.push_back(v);
                    }
                    Some(cv) if cv != cu ^ par => {
                        let cycle = tree_cycle(&parent, u, v)
                            .into_iter()
                            .map(|i| w.dual_edges[i])
                            .collect();
                        return SidednessCertificate {
                            wall,
                            two_sided: false,
                            orientation: None,
                            odd_cycle: Some(cycle),
                        };
                    }
                    _ => {}
                }
            }
        }
    }
    SidednessCertificate {
        wall,
        two_sided: true,
        orientation: Some(color.into_iter().map(Option::unwrap).collect()),
        odd_cycle: None,
    }
}

/// Closed walk `u → … → lca → … → v` in a BFS forest, then back to `u`.
fn tree_cycle(parent: &[Option<usize>], u: usize, v: usize) -> Vec<usize> {
    let chain = |mut a: usize| {
        let mut out = vec![a];
        while let Some(p) = parent[a] {
            out.push(p);
            a = p;
        }
        out
    };
    let cu = chain(u);
    let cv = chain(v);
    let set: BTreeSet<usize> = cv.iter().copied().collect();
    let lca = *cu.iter().find(|a| set.contains(a)).unwrap();
    let mut cycle: Vec<usize> = cu.iter().copied().take_while(|&a| a != lca).collect();
    cycle.push(lca);
    let back: Vec<usize> = cv.iter().copied().take_while(|&a| a != lca).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

/// Pairs of distinct walls crossing in some cube.
pub fn crossings(x: &CubeComplex, ws: &WallSet) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for (c, cube) in x.cubes().iter().enumerate() {
        for a in 0..cube.dim() {
            for b in (a + 1)..cube.dim() {
                let (w1, w2) = (ws.of_midcube(c, a), ws.of_midcube(c, b));
                if w1 != w2 {
                    out.entry((w1.min(w2), w1.max(w2))).or_insert(c);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Osculation {
    pub vertex: String,
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallReport {
    pub wall: usize,
    pub midcubes: usize,
    pub dual_edges: usize,
    pub self_crossing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_crossing_cube: Option<String>,
    pub one_sided: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd_cycle: Option<Vec<String>>,
    /// `None` when the wall is one-sided.
    pub direct_self_osculation: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_osculation_witness: Option<Osculation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterOsculation {
    pub walls: (usize, usize),
    pub crossing_cube: String,
    pub witness: Osculation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialnessReport {
    pub walls: Vec<WallReport>,
    pub inter_osculations: Vec<InterOsculation>,
    pub special: bool,
}

/// Link 1-simplices at every vertex, as sorted edge-end pairs.
fn link_edges(x: &CubeComplex) -> BTreeSet<(LinkVertex, LinkVertex)> {
    let mut out = BTreeSet::new();
    for s in x.cubes_of_dim(2) {
        for corner in 0..4u32 {
            let ee = x.corner_edge_ends(s, corner);
            out.insert((ee[0].min(ee[1]), ee[0].max(ee[1])));
        }
    }
    out
}

fn end_vertex(x: &CubeComplex, lv: LinkVertex) -> usize {
    let (a, b) = x.endpoints(lv.edge);
    if lv.end {
        b
    } else {
        a
    }
}

/// Whether two distinct dual edges of a two-sided wall both leave, or both
/// enter, the same vertex without spanning a square there.
pub fn direct_self_osculation(
    x: &CubeComplex,
    ws: &WallSet,
    cert: &SidednessCertificate,
) -> Result<Option<Osculation>, HyperplaneError> {
    let w = &ws.walls[cert.wall];
    let orientation = cert
        .orientation
        .as_ref()
        .ok_or(HyperplaneError::RequiresTwoSided(cert.wall))?;
    let squares = link_edges(x);
    // keyed by (vertex, terminal?): both edges leave v, or both enter it
    let mut by_vertex: BTreeMap<(usize, bool), Vec<LinkVertex>> = BTreeMap::new();
    for (k, &e) in w.dual_edges.iter().enumerate() {
        for terminal in [false, true] {
            let lv = LinkVertex {
                edge: e,
                end: orientation[k] ^ terminal,
            };
            by_vertex.entry((end_vertex(x, lv), terminal)).or_default().push(lv);
        }
    }
    for ((v, _), ends) in by_vertex {
        for i in 0..ends.len() {
            for j in (i + 1)..ends.len() {
                let (a, b) = (ends[i].min(ends[j]), ends[i].max(ends[j]));
                if !squares.contains(&(a, b)) {
                    return Ok(Some(Osculation {
                        vertex: x.id(v).to_string(),
                        first: a.label(x),
                        second: b.label(x),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The four pathologies for every wall and wall pair.
pub fn pathologies(x: &CubeComplex) -> SpecialnessReport {
    let ws = walls(x);
    pathologies_with(x, &ws)
}

pub fn pathologies_with(x: &CubeComplex, ws: &WallSet) -> SpecialnessReport {
    let squares = link_edges(x);
    let mut reports = Vec::with_capacity(ws.len());
    for w in &ws.walls {
        let mut crossing_cube = None;
        for (c, cube) in x.cubes().iter().enumerate() {
            let hits = (0..cube.dim()).filter(|&k| ws.of_midcube(c, k) == w.id).count();
            if hits >= 2 {
                crossing_cube = Some(x.id(c).to_string());
                break;
            }
        }
        let cert = sidedness(x, ws, w.id);
        let osc = direct_self_osculation(x, ws, &cert).ok();
        reports.push(WallReport {
            wall: w.id,
            midcubes: w.midcubes.len(),
            dual_edges: w.dual_edges.len(),
            self_crossing: crossing_cube.is_some(),
            self_crossing_cube: crossing_cube,
            one_sided: !cert.two_sided,
            odd_cycle: cert
                .odd_cycle
                .map(|c| c.iter().map(|&e| x.id(e).to_string()).collect()),
            direct_self_osculation: osc.as_ref().map(Option::is_some),
            self_osculation_witness: osc.flatten(),
        });
    }

    let mut inter = Vec::new();
    // dual edges per vertex and wall
    let mut at_vertex: BTreeMap<usize, Vec<(usize, LinkVertex)>> = BTreeMap::new();
    for e in x.edges() {
        let w = ws.of_edge(e);
        for lv in [LinkVertex { edge: e, end: false }, LinkVertex { edge: e, end: true }] {
            at_vertex.entry(end_vertex(x, lv)).or_default().push((w, lv));
        }
    }
    for ((w1, w2), cube) in crossings(x, ws) {
        'pair: for (&v, list) in &at_vertex {
            for &(_, a) in list.iter().filter(|(wa, _)| *wa == w1) {
                for &(_, b) in list.iter().filter(|(wb, _)| *wb == w2) {
                    let key = (a.min(b), a.max(b));
                    if !squares.contains(&key) {
                        inter.push(InterOsculation {
                            walls: (w1, w2),
                            crossing_cube: x.id(cube).to_string(),
                            witness: Osculation {
                                vertex: x.id(v).to_string(),
                                first: a.label(x),
                                second: b.label(x),
                            },
                        });
                        break 'pair;
                    }
                }
            }
        }
    }
    let special = inter.is_empty()
        && reports.iter().all(|r| {
            !r.self_crossing && !r.one_sided && r.direct_self_osculation == Some(false)
        });
    SpecialnessReport {
        walls: reports,
        inter_osculations: inter,
        special,
    }
}

/// Co-orientation of the walls of a subdivision together with the
/// automorphisms that exchange the sides of some wall.
#[derive(Clone, Debug)]
pub struct CoOrientation {
    pub subdivision: Subdivision,
    pub walls: WallSet,
    /// Initial end of every edge of the subdivision, indexed by cube index.
    pub initial_end: BTreeMap<usize, bool>,
    /// `(automorphism index, wall)` pairs where the transported
    /// co-orientation disagrees with the assigned one.
    pub flips: Vec<(usize, usize)>,
    pub equivariant: bool,
}

/// Lifts an automorphism of `X` to the subdivision.
pub fn induce_on_subdivision(
    sub: &Subdivision,
    g: &CubicalMap,
) -> Result<CubicalMap, HyperplaneError> {
    let y = &sub.complex;
    let x = g.domain();
    let mut key: HashMap<(usize, Vec<usize>, Vec<bool>), usize> = HashMap::new();
    for (i, c) in sub.cells.iter().enumerate() {
        key.insert((c.top, c.axes.clone(), c.signs.clone()), i);
    }
    let mut images = Vec::with_capacity(y.len());
    let mut alignments = Vec::with_capacity(y.len());
    for c in &sub.cells {
        let al = g.alignment(c.top);
        let mut moved: Vec<(usize, bool, usize)> = c
            .axes
            .iter()
            .zip(&c.signs)
            .enumerate()
            .map(|(i, (&a, &s))| {
                let (t, flip) = al[a].ok_or_else(|| {
                    HyperplaneError::NotAutomorphism(format!("collapses `{}`", x.id(c.top)))
                })?;
                Ok((t, s ^ flip, i))
            })
            .collect::<Result<_, HyperplaneError>>()?;
        moved.sort_unstable();
        let axes: Vec<usize> = moved.iter().map(|m| m.0).collect();
        let signs: Vec<bool> = moved.iter().map(|m| m.1).collect();
        let target = *key
            .get(&(g.image(c.top), axes, signs))
            .ok_or_else(|| HyperplaneError::NotAutomorphism("image cell missing".into()))?;
        images.push(target);
        let mut cal = vec![None; c.axes.len()];
        for (pos, m) in moved.iter().enumerate() {
            cal[m.2] = Some((pos, false));
        }
        alignments.push(cal);
    }
    let yy = Arc::new(y.clone());
    Ok(CubicalMap::new(yy.clone(), yy, images, alignments)?)
}

fn check_automorphism(x: &CubeComplex, g: &CubicalMap) -> Result<(), HyperplaneError> {
    if g.domain().to_json() != x.to_json() || g.codomain().to_json() != x.to_json() {
        return Err(HyperplaneError::NotAutomorphism("not a self-map".into()));
    }
    let set: BTreeSet<usize> = g.images().iter().copied().collect();
    if set.len() != x.len() || !g.is_dimension_preserving() {
        return Err(HyperplaneError::NotAutomorphism("not bijective".into()));
    }
    Ok(())
}

/// Subdivides `X`, lifts the given automorphisms of `X`, co-orients every
/// wall orbit from its smallest wall (natural orientation: from the center of
/// the larger cube towards the smaller) and transports it along generators.
pub fn co_orient_subdivision(
    x: &CubeComplex,
    autos: &[CubicalMap],
) -> Result<CoOrientation, HyperplaneError> {
    for g in autos {
        check_automorphism(x, g)?;
    }
    let sub = barycentric_subdivision(x);
    let y = &sub.complex;
    let ws = walls(y);
    let certs: Vec<SidednessCertificate> = (0..ws.len()).map(|w| sidedness(y, &ws, w)).collect();
    if let Some(c) = certs.iter().find(|c| !c.two_sided) {
        return Err(HyperplaneError::OneSidedWall(c.wall));
    }
    let lifted: Vec<CubicalMap> = autos
        .iter()
        .map(|g| induce_on_subdivision(&sub, g))
        .collect::<Result<_, _>>()?;

    // orientation of a wall, given the initial end of one of its dual edges
    let orient_wall = |w: usize, e: usize, end: bool, out: &mut BTreeMap<usize, bool>| {
        let wall = &ws.walls[w];
        let cert = &certs[w];
        let base = cert.initial_end(wall, e).unwrap();
        for &f in &wall.dual_edges {
            out.insert(f, cert.initial_end(wall, f).unwrap() ^ base ^ end);
        }
    };

    let mut initial_end: BTreeMap<usize, bool> = BTreeMap::new();
    let mut done = vec![false; ws.len()];
    for w0 in 0..ws.len() {
        if done[w0] {
            continue;
        }
        // corner 0 of a subdivision edge is the center of the larger cube
        let e0 = ws.walls[w0].dual_edges[0];
        orient_wall(w0, e0, false, &mut initial_end);
        done[w0] = true;
        let mut queue = VecDeque::from([w0]);
        while let Some(w) = queue.pop_front() {
            let e = ws.walls[w].dual_edges[0];
            for g in &lifted {
                let img = g.image(e);
                let flip = g.alignment(e)[0].unwrap().1;
                let gw = ws.of_edge(img);
                if !done[gw] {
                    orient_wall(gw, img, initial_end[&e] ^ flip, &mut initial_end);
                    done[gw] = true;
                    queue.push_back(gw);
                }
            }
        }
    }
    let mut flips = Vec::new();
    for (gi, g) in lifted.iter().enumerate() {
        for w in &ws.walls {
            let bad = w.dual_edges.iter().any(|&e| {
                let flip = g.alignment(e)[0].unwrap().1;
                initial_end[&g.image(e)] != initial_end[&e] ^ flip
            });
            if bad {
                flips.push((gi, w.id));
            }
        }
    }
    Ok(CoOrientation {
        equivariant: flips.is_empty(),
        subdivision: sub,
        walls: ws,
        initial_end,
        flips,
    })
}
