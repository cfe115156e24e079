//! Canonical completion of a local isometry `f: A → B` and its functoriality.
//!
//! The completion has vertex set `A⁰ × B⁰`. Every cube of the completion
//! lies over a cube `Q` of `B` and is named `(a,Q)`, where `a` is the
//! `A`-coordinate of the lift of the corner 0 of `Q`. An edge over an edge of
//! `B` dual to the wall `W` is diagonal at `a` when some edge of `A` at `a`
//! maps to an edge dual to `W` (it then moves the `A`-coordinate along that
//! edge) and horizontal otherwise.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    all_links, flag_complete, insert_bit, is_npc, ComplexError, CubeComplex,
    CubeComplexDescription, CubeDescription, CubicalMap, LinkVertex,
};
use crate::hyperplanes::{pathologies_with, walls, WallSet};

#[derive(Debug, Error)]
pub enum CompletionError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("map is not a local isometry: {0}")]
    NotLocalIsometry(String),
    #[error("completion failed its consistency checks: {0}")]
    CoveringCheckFailed(String),
    #[error("not a covering at `{vertex}`: {reason}")]
    NotCovering { vertex: String, reason: String },
    #[error("the square of maps does not commute at `{0}`")]
    NotCommutative(String),
    #[error("condition ({condition}) fails: {witness}")]
    ConditionFailed { condition: String, witness: String },
    #[error("induced map fails: {0}")]
    DiagramFailed(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Structural checks standing in for full cleanliness, plus a simplicial
/// 1-skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreconditionReport {
    pub simplicial_one_skeleton: bool,
    pub npc: bool,
    pub embedded_walls: bool,
    pub two_sided_walls: bool,
    pub no_direct_self_osculation: bool,
    pub holds: bool,
}

impl PreconditionReport {
    fn failure(&self) -> String {
        let mut out = Vec::new();
        for (ok, what) in [
            (self.simplicial_one_skeleton, "1-skeleton is not simplicial"),
            (self.npc, "complex is not non-positively curved"),
            (self.embedded_walls, "some wall crosses itself"),
            (self.two_sided_walls, "some wall is one-sided"),
            (self.no_direct_self_osculation, "some wall directly self-osculates"),
        ] {
            if !ok {
                out.push(what);
            }
        }
        out.join("; ")
    }
}

pub fn completion_preconditions(b: &CubeComplex) -> PreconditionReport {
    let simplicial_one_skeleton = b.has_simplicial_one_skeleton();
    let npc = is_npc(b).is_npc;
    let report = pathologies_with(b, &walls(b));
    let embedded_walls = report.walls.iter().all(|w| !w.self_crossing);
    let two_sided_walls = report.walls.iter().all(|w| !w.one_sided);
    let no_direct_self_osculation = report
        .walls
        .iter()
        .all(|w| w.direct_self_osculation != Some(true));
    PreconditionReport {
        simplicial_one_skeleton,
        npc,
        embedded_walls,
        two_sided_walls,
        no_direct_self_osculation,
        holds: simplicial_one_skeleton
            && npc
            && embedded_walls
            && two_sided_walls
            && no_direct_self_osculation,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Horizontal,
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    /// Fibre size over each component of the base, in component order.
    pub degrees: Vec<usize>,
}

impl CoveringReport {
    /// The common fibre size, if all components agree.
    pub fn degree(&self) -> Option<usize> {
        let first = *self.degrees.first()?;
        self.degrees.iter().all(|&d| d == first).then_some(first)
    }
}

/// Checks that `p` is a bijection on links at every vertex and has constant
/// fibre size over each component of its codomain.
pub fn verify_covering(p: &CubicalMap) -> Result<CoveringReport, CompletionError> {
    let dom = p.domain();
    let cod = p.codomain();
    if let Some(c) = (0..dom.len()).find(|&c| p.alignment(c).iter().any(Option::is_none)) {
        return Err(CompletionError::NotCovering {
            vertex: dom.id(dom.cube(c).corner(0)).to_string(),
            reason: format!("cube `{}` is collapsed", dom.id(c)),
        });
    }
    if let Some(w) = p.local_bijection_defect()? {
        let vertex = match &w {
            crate::complex::LinkWitness::Collision { vertex, .. }
            | crate::complex::LinkWitness::MissingSimplex { vertex, .. }
            | crate::complex::LinkWitness::NotSurjective { vertex, .. } => vertex.clone(),
        };
        return Err(CompletionError::NotCovering {
            vertex,
            reason: serde_json::to_string(&w).expect("serializable"),
        });
    }
    let mut fibre: HashMap<usize, usize> = HashMap::new();
    for v in dom.vertices() {
        *fibre.entry(p.image(v)).or_default() += 1;
    }
    let mut degrees = Vec::new();
    for comp in cod.components() {
        let d = fibre.get(&comp[0]).copied().unwrap_or(0);
        if let Some(&bad) = comp.iter().find(|v| fibre.get(v).copied().unwrap_or(0) != d) {
            return Err(CompletionError::NotCovering {
                vertex: cod.id(bad).to_string(),
                reason: format!(
                    "fibre has {} points, expected {d}",
                    fibre.get(&bad).copied().unwrap_or(0)
                ),
            });
        }
        degrees.push(d);
    }
    Ok(CoveringReport { degrees })
}

#[derive(Clone, Debug)]
pub struct CompletionResult {
    pub completion: Arc<CubeComplex>,
    pub j: CubicalMap,
    pub r: CubicalMap,
    pub p: CubicalMap,
    /// Keyed by edge id of the completion.
    pub edge_kind: BTreeMap<String, EdgeKind>,
    /// `(a, Q)` for every cube of the completion, by index.
    pub cells: Vec<(usize, usize)>,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionReport {
    pub counts: Vec<usize>,
    pub horizontal_edges: usize,
    pub diagonal_edges: usize,
    pub degree: usize,
    pub components: usize,
}

impl CompletionResult {
    pub fn report(&self) -> CompletionReport {
        let diagonal = self
            .edge_kind
            .values()
            .filter(|&&k| k == EdgeKind::Diagonal)
            .count();
        CompletionReport {
            counts: self.completion.counts(),
            horizontal_edges: self.edge_kind.len() - diagonal,
            diagonal_edges: diagonal,
            degree: self.degree,
            components: self.completion.components().len(),
        }
    }

    /// The completion vertex `(a, b)`.
    pub fn vertex_of(&self, a: usize, b: usize) -> Option<usize> {
        let (x, y) = (self.j.domain(), self.p.codomain());
        self.completion.index_of(&pair_id(x.id(a), y.id(b)))
    }

    pub fn kind(&self, edge: usize) -> EdgeKind {
        self.edge_kind[self.completion.id(edge)]
    }
}

fn pair_id(a: &str, q: &str) -> String {
    format!("({a},{q})")
}

/// For each vertex `a` of `A` and wall `W` of `B`: the other end of the edge
/// at `a` whose image is dual to `W`. Absent entries mean "stay at `a`".
struct Steps(HashMap<(usize, usize), usize>);

impl Steps {
    fn new(f: &CubicalMap, wb: &WallSet) -> Result<Self, CompletionError> {
        let a = f.domain();
        let mut map: HashMap<(usize, usize), usize> = HashMap::new();
        for e in a.edges() {
            let w = wb.of_edge(f.image(e));
            let (u, v) = a.endpoints(e);
            for (x, y) in [(u, v), (v, u)] {
                if let Some(prev) = map.insert((x, w), y) {
                    if prev != y || u == v {
                        return Err(CompletionError::CoveringCheckFailed(format!(
                            "two edges at `{}` map to edges dual to wall {w}",
                            a.id(x)
                        )));
                    }
                }
            }
        }
        Ok(Steps(map))
    }

    fn step(&self, a: usize, w: usize) -> usize {
        self.0.get(&(a, w)).copied().unwrap_or(a)
    }
}

/// `A`-coordinates of the corners of the lift of `q` starting at `a`.
fn lift(b: &CubeComplex, wb: &WallSet, steps: &Steps, q: usize, a: usize) -> Result<Vec<usize>, CompletionError> {
    let d = b.cube(q).dim();
    let ws: Vec<usize> = (0..d).map(|i| wb.of_midcube(q, i)).collect();
    let mut coord = vec![a; 1 << d];
    for y in 1..(1u32 << d) {
        let i = y.trailing_zeros() as usize;
        coord[y as usize] = steps.step(coord[(y ^ (1 << i)) as usize], ws[i]);
    }
    for y in 0..(1u32 << d) {
        for (i, &w) in ws.iter().enumerate() {
            if y & (1 << i) != 0 && steps.step(coord[(y ^ (1 << i)) as usize], w) != coord[y as usize] {
                return Err(CompletionError::CoveringCheckFailed(format!(
                    "lift of `{}` does not close up",
                    b.id(q)
                )));
            }
        }
    }
    Ok(coord)
}

/// Builds `𝖢(A, B)` with its inclusion, retraction and projection, and
/// verifies `r∘j = 1`, `p∘j = f` and the covering property before returning.
pub fn canonical_completion(f: &CubicalMap) -> Result<CompletionResult, CompletionError> {
    let a = f.domain().clone();
    let b = f.codomain().clone();
    let pre = completion_preconditions(&b);
    if !pre.holds {
        return Err(CompletionError::PreconditionFailed(pre.failure()));
    }
    let li = f.is_local_isometry()?;
    if !li.is_local_isometry {
        return Err(CompletionError::NotLocalIsometry(
            serde_json::to_string(&li.witness).expect("serializable"),
        ));
    }
    let wb = walls(&b);
    let steps = Steps::new(f, &wb)?;
    let internal = |e: ComplexError| CompletionError::CoveringCheckFailed(e.to_string());

    // lifts of the cubes of dimension ≤ 2
    let b_desc = b.to_description();
    let b_maps: HashMap<&str, &Option<Vec<Vec<i64>>>> = b_desc
        .cubes
        .iter()
        .map(|c| (c.id.as_str(), &c.face_maps))
        .collect();
    let a_vertices: Vec<usize> = a.vertices().collect();
    let mut cubes = Vec::new();
    let mut cell_of: HashMap<String, (usize, usize)> = HashMap::new();
    for q in 0..b.len() {
        let cube = b.cube(q);
        if cube.dim() > 2 {
            continue;
        }
        for &x in &a_vertices {
            let coord = lift(&b, &wb, &steps, q, x)?;
            let id = pair_id(a.id(x), b.id(q));
            let corners = (0..(1usize << cube.dim()))
                .map(|y| pair_id(a.id(coord[y]), b.id(cube.corner(y as u32))))
                .collect();
            let mut faces = Vec::with_capacity(2 * cube.dim());
            for i in 0..cube.dim() {
                for s in [false, true] {
                    let y0 = insert_bit(cube.face_map(i, s).apply(0), i, s) as usize;
                    faces.push(pair_id(a.id(coord[y0]), b.id(cube.face(i, s))));
                }
            }
            cell_of.insert(id.clone(), (x, q));
            cubes.push(CubeDescription {
                id,
                dim: cube.dim(),
                faces,
                corners,
                face_maps: b_maps[b.id(q)].clone(),
            });
        }
    }
    let skeleton = CubeComplex::from_description(&CubeComplexDescription {
        name: format!("C({},{})", a.name(), b.name()),
        dim_cap: b.dim_cap(),
        cubes,
    })
    .map_err(internal)?;

    // higher cubes by flag completion, renamed after the cubes they cover
    let filled = flag_complete(&skeleton).map_err(internal)?;
    let completion = if filled.len() == skeleton.len() {
        skeleton
    } else {
        let b_index = b.vertex_set_index();
        let mut rename: HashMap<String, String> = HashMap::new();
        for k in 0..filled.len() {
            if cell_of.contains_key(filled.id(k)) {
                continue;
            }
            let cube = filled.cube(k);
            let coords: Vec<(usize, usize)> = cube
                .corners()
                .iter()
                .map(|&v| cell_of[filled.id(v)])
                .collect();
            let mut proj: Vec<usize> = coords.iter().map(|&(_, bv)| bv).collect();
            proj.sort_unstable();
            proj.dedup();
            let q = *b_index.get(&(cube.dim(), proj)).ok_or_else(|| {
                CompletionError::CoveringCheckFailed(format!("cube `{}` covers no cube", filled.id(k)))
            })?;
            let b0 = b.cube(q).corner(0);
            let (x, _) = *coords.iter().find(|&&(_, bv)| bv == b0).expect("corner present");
            let id = pair_id(a.id(x), b.id(q));
            cell_of.insert(id.clone(), (x, q));
            rename.insert(filled.id(k).to_string(), id);
        }
        let mut desc = filled.to_description();
        for c in &mut desc.cubes {
            if let Some(n) = rename.get(&c.id) {
                c.id = n.clone();
            }
            for f in &mut c.faces {
                if let Some(n) = rename.get(f) {
                    *f = n.clone();
                }
            }
        }
        CubeComplex::from_description(&desc).map_err(internal)?
    };
    let expected: Vec<usize> = b.counts().iter().map(|n| n * a_vertices.len()).collect();
    if completion.counts() != expected {
        return Err(CompletionError::CoveringCheckFailed(format!(
            "cube counts {:?}, expected {:?}",
            completion.counts(),
            expected
        )));
    }
    let completion = Arc::new(completion);
    let cells: Vec<(usize, usize)> = (0..completion.len())
        .map(|k| cell_of[completion.id(k)])
        .collect();
    // A-coordinate of each completion vertex
    let acoord = |v: usize| cells[v].0;

    // projection
    let p_images = cells.iter().map(|&(_, q)| q).collect();
    let p = CubicalMap::infer(completion.clone(), b.clone(), p_images, &[]).map_err(internal)?;

    // inclusion
    let c_index = completion.vertex_set_index();
    let mut j_images = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let cube = a.cube(k);
        let mut vs: Vec<usize> = cube
            .corners()
            .iter()
            .map(|&x| {
                completion
                    .index_of(&pair_id(a.id(x), b.id(f.image(x))))
                    .expect("vertex present")
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        let img = *c_index.get(&(cube.dim(), vs)).ok_or_else(|| {
            CompletionError::CoveringCheckFailed(format!("no lift of `{}`", a.id(k)))
        })?;
        j_images.push(img);
    }
    let j = CubicalMap::infer(a.clone(), completion.clone(), j_images, &[]).map_err(internal)?;

    // retraction: horizontal axes collapse
    let a_index = a.vertex_set_index();
    let mut r_images = Vec::with_capacity(completion.len());
    let mut collapsed = Vec::with_capacity(completion.len());
    let mut edge_kind = BTreeMap::new();
    for k in 0..completion.len() {
        let cube = completion.cube(k);
        let mut mask = 0u32;
        for i in 0..cube.dim() {
            let mut kinds = BTreeSet::new();
            for y in 0..(1u32 << cube.dim()) {
                if y & (1 << i) == 0 {
                    let (u, v) = (cube.corner(y), cube.corner(y | (1 << i)));
                    kinds.insert(acoord(u) == acoord(v));
                }
            }
            if kinds.len() != 1 {
                return Err(CompletionError::CoveringCheckFailed(format!(
                    "axis {i} of `{}` mixes horizontal and diagonal edges",
                    completion.id(k)
                )));
            }
            if kinds.contains(&true) {
                mask |= 1 << i;
            }
        }
        let mut vs: Vec<usize> = cube.corners().iter().map(|&v| acoord(v)).collect();
        vs.sort_unstable();
        vs.dedup();
        let dim = cube.dim() - mask.count_ones() as usize;
        let img = *a_index.get(&(dim, vs)).ok_or_else(|| {
            CompletionError::CoveringCheckFailed(format!("no retraction image for `{}`", completion.id(k)))
        })?;
        if cube.dim() == 1 {
            let kind = if mask == 0 { EdgeKind::Diagonal } else { EdgeKind::Horizontal };
            edge_kind.insert(completion.id(k).to_string(), kind);
        }
        r_images.push(img);
        collapsed.push(Some(mask));
    }
    let r = CubicalMap::infer(completion.clone(), a.clone(), r_images, &collapsed).map_err(internal)?;

    if let Some(c) = first_disagreement(&j.then(&r)?, &CubicalMap::identity(a.clone()), None) {
        return Err(CompletionError::CoveringCheckFailed(format!("r∘j differs from the identity at `{c}`")));
    }
    if let Some(c) = first_disagreement(&j.then(&p)?, f, None) {
        return Err(CompletionError::CoveringCheckFailed(format!("p∘j differs from f at `{c}`")));
    }
    let covering = verify_covering(&p).map_err(|e| CompletionError::CoveringCheckFailed(e.to_string()))?;
    if covering.degrees.iter().any(|&d| d != a_vertices.len()) {
        return Err(CompletionError::CoveringCheckFailed(format!(
            "fibre sizes {:?}, expected {}",
            covering.degrees,
            a_vertices.len()
        )));
    }
    Ok(CompletionResult {
        completion,
        j,
        r,
        p,
        edge_kind,
        cells,
        degree: a_vertices.len(),
    })
}

/// First domain cube (of dimension ≤ `max_dim`) where the two maps differ
/// in image or alignment.
pub fn first_disagreement(m1: &CubicalMap, m2: &CubicalMap, max_dim: Option<usize>) -> Option<String> {
    let dom = m1.domain();
    (0..dom.len())
        .filter(|&c| max_dim.is_none_or(|d| dom.cube(c).dim() <= d))
        .find(|&c| m1.image(c) != m2.image(c) || m1.alignment(c) != m2.alignment(c))
        .map(|c| dom.id(c).to_string())
}

/// A commutative square of local isometries
/// `f: V → Y`, `s: V → Z`, `g: Z → X`, `t: Y → X` with `t∘f = g∘s`.
#[derive(Clone, Debug)]
pub struct MapSquare {
    pub f: CubicalMap,
    pub s: CubicalMap,
    pub g: CubicalMap,
    pub t: CubicalMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FunctorialResult {
    pub t_hat: CubicalMap,
    pub source: CompletionResult,
    pub target: CompletionResult,
    pub conditions: Vec<ConditionReport>,
    pub local_isometry: bool,
}

fn condition(name: &str, witness: Option<String>) -> ConditionReport {
    ConditionReport {
        condition: name.to_string(),
        holds: witness.is_none(),
        witness,
    }
}

/// Evaluates conditions (i)–(iv) of the functoriality statement, each
/// reported separately.
pub fn functoriality_conditions(sq: &MapSquare) -> Result<Vec<ConditionReport>, CompletionError> {
    let x = sq.t.codomain();
    let y = sq.t.domain();
    let mut out = Vec::with_capacity(4);

    // (i)
    let px = completion_preconditions(x);
    let py = completion_preconditions(y);
    let w1 = if !px.holds {
        Some(format!("`{}`: {}", x.name(), px.failure()))
    } else if !py.holds {
        Some(format!("`{}`: {}", y.name(), py.failure()))
    } else {
        None
    };
    out.push(condition("i", w1));

    // (ii)
    let wx = walls(x);
    let wy = walls(y);
    let mut wall_image: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut w2 = None;
    for e in y.edges() {
        let target = wx.of_edge(sq.t.image(e));
        let source = wy.of_edge(e);
        match wall_image.get(&target) {
            Some(&(src, e0)) if src != source => {
                w2 = Some(format!(
                    "edges `{}` and `{}` lie on distinct walls with the same image",
                    y.id(e0),
                    y.id(e)
                ));
                break;
            }
            Some(_) => {}
            None => {
                wall_image.insert(target, (source, e));
            }
        }
    }
    out.push(condition("ii", w2));

    // (iii)
    let xl = all_links(x);
    let yl = all_links(y);
    let mut w3 = None;
    'iii: for (&yv, l) in &yl {
        let images: BTreeSet<LinkVertex> = l
            .link_vertices
            .iter()
            .filter_map(|&lv| sq.t.link_vertex_image(lv))
            .collect();
        for &lv in &xl[&sq.t.image(yv)].link_vertices {
            if wall_image.contains_key(&wx.of_edge(lv.edge)) && !images.contains(&lv) {
                w3 = Some(format!(
                    "edge `{}` at `{}` is not the image of an edge at `{}`",
                    x.id(lv.edge),
                    x.id(sq.t.image(yv)),
                    y.id(yv)
                ));
                break 'iii;
            }
        }
    }
    out.push(condition("iii", w3));

    // (iv)
    let v = sq.f.domain();
    let zl = all_links(sq.g.domain());
    let vl = all_links(v);
    let mut w4 = None;
    'iv: for (&vv, l) in &vl {
        let pairs: BTreeSet<(LinkVertex, LinkVertex)> = l
            .link_vertices
            .iter()
            .filter_map(|&lv| Some((sq.f.link_vertex_image(lv)?, sq.s.link_vertex_image(lv)?)))
            .collect();
        for &ly in &yl[&sq.f.image(vv)].link_vertices {
            for &lz in &zl[&sq.s.image(vv)].link_vertices {
                if sq.t.link_vertex_image(ly) == sq.g.link_vertex_image(lz) && !pairs.contains(&(ly, lz)) {
                    w4 = Some(format!(
                        "edges `{}` and `{}` share an image but no edge at `{}` maps to both",
                        y.id(ly.edge),
                        sq.g.domain().id(lz.edge),
                        v.id(vv)
                    ));
                    break 'iv;
                }
            }
        }
    }
    out.push(condition("iv", w4));
    Ok(out)
}

/// Builds `t̂: 𝖢(V,Y) → 𝖢(Z,X)` by `(v, y) ↦ (s(v), t(y))` and checks that it
/// commutes with inclusions, retractions and projections through the
/// 2-skeleton.
pub fn functorial_map(sq: &MapSquare) -> Result<FunctorialResult, CompletionError> {
    if let Some(c) = first_disagreement(&sq.f.then(&sq.t)?, &sq.s.then(&sq.g)?, None) {
        return Err(CompletionError::NotCommutative(c));
    }
    let conditions = functoriality_conditions(sq)?;
    if let Some(c) = conditions.iter().find(|c| !c.holds) {
        return Err(CompletionError::ConditionFailed {
            condition: c.condition.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    let source = canonical_completion(&sq.f)?;
    let target = canonical_completion(&sq.g)?;
    let c1 = &source.completion;
    let c2 = &target.completion;
    let index = c2.vertex_set_index();
    let mut images = Vec::with_capacity(c1.len());
    for k in 0..c1.len() {
        let cube = c1.cube(k);
        let mut vs = Vec::with_capacity(cube.corners().len());
        for &w in cube.corners() {
            let (vv, yv) = source.cells[w];
            let img = target
                .vertex_of(sq.s.image(vv), sq.t.image(yv))
                .ok_or_else(|| CompletionError::DiagramFailed(format!("no image for `{}`", c1.id(w))))?;
            vs.push(img);
        }
        vs.sort_unstable();
        vs.dedup();
        let img = *index
            .get(&(cube.dim(), vs))
            .ok_or_else(|| CompletionError::DiagramFailed(format!("no image cube for `{}`", c1.id(k))))?;
        if cube.dim() == 1 && source.kind(k) != target.kind(img) {
            return Err(CompletionError::DiagramFailed(format!(
                "edge `{}` changes kind under the induced map",
                c1.id(k)
            )));
        }
        images.push(img);
    }
    let t_hat = CubicalMap::infer(c1.clone(), c2.clone(), images, &[])
        .map_err(|e| CompletionError::DiagramFailed(e.to_string()))?;
    let checks = [
        ("t̂∘j = j'∘s", source.j.then(&t_hat)?, sq.s.then(&target.j)?),
        ("r'∘t̂ = s∘r", t_hat.then(&target.r)?, source.r.then(&sq.s)?),
        ("p'∘t̂ = t∘p", t_hat.then(&target.p)?, source.p.then(&sq.t)?),
    ];
    for (name, m1, m2) in &checks {
        if let Some(c) = first_disagreement(m1, m2, Some(2)) {
            return Err(CompletionError::DiagramFailed(format!("{name} fails at `{c}`")));
        }
    }
    let local_isometry = t_hat.is_local_isometry()?.is_local_isometry;
    Ok(FunctorialResult {
        t_hat,
        source,
        target,
        conditions,
        local_isometry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build;

    fn edge() -> CubeComplex {
        build::graph("edge", &["a0", "a1"], &[("e", "a0", "a1")]).unwrap()
    }

    fn inclusion(a: CubeComplex, b: CubeComplex, pairs: &[(&str, &str)]) -> CubicalMap {
        let images = (0..a.len())
            .map(|c| {
                let t = pairs.iter().find(|(s, _)| *s == a.id(c)).unwrap().1;
                b.index_of(t).unwrap()
            })
            .collect();
        CubicalMap::infer(Arc::new(a), Arc::new(b), images, &[]).unwrap()
    }

    #[test]
    fn preconditions() {
        assert!(completion_preconditions(&build::cycle(3)).holds);
        assert!(completion_preconditions(&build::standard_cube(2)).holds);
        let t = completion_preconditions(&build::torus());
        assert!(!t.holds && !t.simplicial_one_skeleton);
    }

    #[test]
    fn hexagon() {
        let f = inclusion(edge(), build::cycle(3), &[("a0", "v0"), ("a1", "v1"), ("e", "e0")]);
        let c = canonical_completion(&f).unwrap();
        let rep = c.report();
        assert_eq!(rep.counts, vec![6, 6]);
        assert_eq!((rep.diagonal_edges, rep.horizontal_edges), (2, 4));
        assert_eq!(rep.components, 1);
        assert_eq!(c.degree, 2);
    }

    #[test]
    fn edge_onto_itself() {
        let f = inclusion(edge(), edge(), &[("a0", "a0"), ("a1", "a1"), ("e", "e")]);
        let c = canonical_completion(&f).unwrap();
        assert_eq!(c.completion.counts(), vec![4, 2]);
        assert_eq!(c.report().components, 2);
        assert!(c.edge_kind.values().all(|&k| k == EdgeKind::Diagonal));
    }

    #[test]
    fn vertex_gives_copy_of_base() {
        let a = build::graph("pt", &["a"], &[]).unwrap();
        let f = inclusion(a, build::standard_cube(2), &[("a", "v00")]);
        let c = canonical_completion(&f).unwrap();
        assert_eq!(c.completion.counts(), vec![4, 4, 1]);
        assert!(c.edge_kind.values().all(|&k| k == EdgeKind::Horizontal));
        assert_eq!(c.completion.id(c.j.image(0)), "(a,v00)");
    }

    #[test]
    fn edge_into_square() {
        let sq = build::standard_cube(2);
        let f = inclusion(edge(), sq, &[("a0", "v00"), ("a1", "v10"), ("e", "e*0")]);
        let c = canonical_completion(&f).unwrap();
        assert_eq!(c.completion.counts(), vec![8, 8, 2]);
        assert!(is_npc(&c.completion).is_npc);
    }

    #[test]
    fn folding_is_not_a_covering() {
        let f = inclusion(edge(), build::path(2), &[("a0", "v0"), ("a1", "v1"), ("e", "e0")]);
        assert!(matches!(verify_covering(&f), Err(CompletionError::NotCovering { .. })));
        let id = CubicalMap::identity(Arc::new(build::cycle(3)));
        assert_eq!(verify_covering(&id).unwrap().degree(), Some(1));
    }

    #[test]
    fn functorial_identity() {
        let f = inclusion(edge(), build::cycle(3), &[("a0", "v0"), ("a1", "v1"), ("e", "e0")]);
        let y = f.codomain().clone();
        let v = f.domain().clone();
        let sq = MapSquare {
            f: f.clone(),
            s: CubicalMap::identity(v),
            g: f,
            t: CubicalMap::identity(y),
        };
        let out = functorial_map(&sq).unwrap();
        assert!(out.local_isometry);
        assert!(out.conditions.iter().all(|c| c.holds));
        let c = out.t_hat.domain();
        assert!((0..c.len()).all(|k| c.id(k) == out.t_hat.codomain().id(out.t_hat.image(k))));
    }

    #[test]
    fn functorial_vertex_into_edge() {
        let pt = || build::graph("pt", &["v"], &[]).unwrap();
        let tri = build::cycle(3);
        let sq = MapSquare {
            f: inclusion(pt(), edge(), &[("v", "a0")]),
            s: inclusion(pt(), edge(), &[("v", "a0")]),
            g: inclusion(edge(), tri.clone(), &[("a0", "v0"), ("a1", "v2"), ("e", "e2")]),
            t: inclusion(edge(), tri, &[("a0", "v0"), ("a1", "v1"), ("e", "e0")]),
        };
        let out = functorial_map(&sq).unwrap();
        assert_eq!(out.source.completion.counts(), vec![2, 1]);
        assert_eq!(out.target.completion.counts(), vec![6, 6]);
        assert!(out.local_isometry);
    }

    #[test]
    fn functorial_rejects_wrapped_path() {
        let pt = || build::graph("pt", &["v"], &[]).unwrap();
        let tri = build::cycle(3);
        let t = inclusion(
            build::path(3),
            tri.clone(),
            &[
                ("v0", "v0"),
                ("v1", "v1"),
                ("v2", "v2"),
                ("v3", "v0"),
                ("e0", "e0"),
                ("e1", "e1"),
                ("e2", "e2"),
            ],
        );
        let sq = MapSquare {
            f: inclusion(pt(), build::path(3), &[("v", "v1")]),
            s: inclusion(pt(), pt(), &[("v", "v")]),
            g: inclusion(pt(), tri, &[("v", "v1")]),
            t,
        };
        let conds = functoriality_conditions(&sq).unwrap();
        let failing: Vec<&str> = conds.iter().filter(|c| !c.holds).map(|c| c.condition.as_str()).collect();
        assert_eq!(failing, vec!["iii"]);
        assert!(matches!(
            functorial_map(&sq),
            Err(CompletionError::ConditionFailed { condition, .. }) if condition == "iii"
        ));
    }
}
