//! Finite combinatorial cube complexes.
//!
//! A cube of dimension `d` carries `2d` ordered face references
//! `(axis 0, −), (axis 0, +), (axis 1, −), …` and a corner map with `2^d`
//! vertex ids indexed by bit masks (bit `i` is the coordinate along axis `i`).
//! Each face may carry an attaching map from its own axes to the parent's
//! remaining axes; when omitted it is the identity. The attaching maps are
//! what distinguishes, say, a torus from a Klein bottle when the 1-skeleton is
//! a single vertex with loops.

mod axes;
pub mod build;
mod flag;
mod link;
mod map;
mod subdivision;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use axes::{bit, insert_bit, remove_bit, AxisMap};
pub use flag::flag_complete;
pub use link::{is_npc, link, LinkVertex, NpcVerdict, NpcWitness, VertexLink};
pub(crate) use link::all_links;
pub use map::{CubicalMap, LinkWitness, LocalIsometryVerdict, MapDescription};
pub use subdivision::{barycentric_subdivision, SmallCube, Subdivision};

pub const DEFAULT_DIM_CAP: usize = 3;

fn default_dim_cap() -> usize {
    DEFAULT_DIM_CAP
}

/// File form of a complex, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeComplexDescription {
    pub name: String,
    #[serde(default = "default_dim_cap")]
    pub dim_cap: usize,
    pub cubes: Vec<CubeDescription>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeDescription {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub faces: Vec<String>,
    #[serde(default)]
    pub corners: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_maps: Option<Vec<Vec<i64>>>,
}

/// One violated invariant of a complex description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateId { id: String },
    DimensionOverCap { cube: String, dim: usize, cap: usize },
    FaceCount { cube: String, expected: usize, found: usize },
    DanglingFace { cube: String, face: String },
    FaceDimension { cube: String, face: String, expected: usize, found: usize },
    CornerCount { cube: String, expected: usize, found: usize },
    DanglingCorner { cube: String, corner: String },
    CornerNotVertex { cube: String, corner: String },
    VertexCorner { cube: String },
    BadFaceMap { cube: String, face_index: usize },
    CornerMismatch { cube: String, face_index: usize, corner: u32 },
    FaceCommutation { cube: String, axes: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId { id } => write!(f, "duplicate cube id `{id}`"),
            Violation::DimensionOverCap { cube, dim, cap } => {
                write!(f, "cube `{cube}` has dimension {dim} above cap {cap}")
            }
            Violation::FaceCount { cube, expected, found } => {
                write!(f, "cube `{cube}` has {found} faces, expected {expected}")
            }
            Violation::DanglingFace { cube, face } => {
                write!(f, "cube `{cube}` references missing face `{face}`")
            }
            Violation::FaceDimension { cube, face, expected, found } => write!(
                f,
                "face `{face}` of `{cube}` has dimension {found}, expected {expected}"
            ),
            Violation::CornerCount { cube, expected, found } => {
                write!(f, "cube `{cube}` has {found} corners, expected {expected}")
            }
            Violation::DanglingCorner { cube, corner } => {
                write!(f, "cube `{cube}` references missing corner `{corner}`")
            }
            Violation::CornerNotVertex { cube, corner } => {
                write!(f, "corner `{corner}` of `{cube}` is not a vertex")
            }
            Violation::VertexCorner { cube } => {
                write!(f, "vertex `{cube}` must have itself as its only corner")
            }
            Violation::BadFaceMap { cube, face_index } => {
                write!(f, "face map {face_index} of `{cube}` is not a signed permutation")
            }
            Violation::CornerMismatch { cube, face_index, corner } => write!(
                f,
                "corner {corner} of face {face_index} of `{cube}` disagrees with the parent corner map"
            ),
            Violation::FaceCommutation { cube, axes } => write!(
                f,
                "faces of `{cube}` along axes {} and {} do not share their common face",
                axes.0, axes.1
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("malformed complex: {} ({} violation(s))", .0[0], .0.len())]
    MalformedComplex(Vec<Violation>),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown cube `{0}`")]
    UnknownCube(String),
    #[error("completion needs a cube of dimension {needed} above the cap {cap}")]
    DimensionCapExceeded { needed: usize, cap: usize },
    #[error("map is not dimension preserving at cube `{0}`")]
    NotDimensionPreserving(String),
    #[error("invalid cubical map: {0}")]
    InvalidMap(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// A validated cube.
#[derive(Clone, Debug)]
pub struct Cube {
    id: String,
    dim: usize,
    faces: Vec<usize>,
    corners: Vec<usize>,
    face_maps: Vec<AxisMap>,
}

impl Cube {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Face indices in order `(0,−), (0,+), (1,−), …`.
    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn face(&self, axis: usize, side: bool) -> usize {
        self.faces[2 * axis + side as usize]
    }

    pub fn face_map(&self, axis: usize, side: bool) -> &AxisMap {
        &self.face_maps[2 * axis + side as usize]
    }

    pub fn corners(&self) -> &[usize] {
        &self.corners
    }

    pub fn corner(&self, x: u32) -> usize {
        self.corners[x as usize]
    }
}

/// An immutable, validated finite cube complex.
///
/// Cubes are stored sorted by `(dim, id)`; indices into that order are used
/// throughout the crate as cube handles.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    name: String,
    dim_cap: usize,
    cubes: Vec<Cube>,
    index: HashMap<String, usize>,
    cofaces: Vec<Vec<usize>>,
}

impl CubeComplex {
    pub fn from_description(desc: &CubeComplexDescription) -> Result<Self, ComplexError> {
        validate(desc)
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let desc: CubeComplexDescription = serde_json::from_str(text)?;
        validate(&desc)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cube(&self, idx: usize) -> &Cube {
        &self.cubes[idx]
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.cubes[idx].id
    }

    pub fn dim(&self) -> usize {
        self.cubes.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn vertex(&self, id: &str) -> Result<usize, ComplexError> {
        match self.index_of(id) {
            Some(i) if self.cubes[i].dim == 0 => Ok(i),
            _ => Err(ComplexError::UnknownVertex(id.to_string())),
        }
    }

    pub fn cubes_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.cubes
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.dim == d)
            .map(|(i, _)| i)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.cubes_of_dim(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.cubes_of_dim(1)
    }

    /// Number of cubes in each dimension `0..=dim`.
    pub fn counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim() + 1];
        for c in &self.cubes {
            out[c.dim] += 1;
        }
        out
    }

    /// Cubes having `idx` as a codimension-one face (with multiplicity).
    pub fn cofaces(&self, idx: usize) -> &[usize] {
        &self.cofaces[idx]
    }

    /// The two endpoints of an edge, in corner order.
    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let c = &self.cubes[edge];
        (c.corners[0], c.corners[1])
    }

    /// Vertex set of a cube.
    pub fn vertex_set(&self, idx: usize) -> BTreeSet<usize> {
        self.cubes[idx].corners.iter().copied().collect()
    }

    /// The sub-face of `cube` obtained by fixing the axes in `mask` to the
    /// matching bits of `values`. Returns the face and the map from its axes
    /// into the free axes of `cube`.
    pub fn subface(&self, cube: usize, mask: u32, values: u32) -> (usize, AxisMap) {
        let c = &self.cubes[cube];
        if mask == 0 {
            return (cube, AxisMap::identity(c.dim));
        }
        let i = mask.trailing_zeros() as usize;
        let s = bit(values, i);
        let face = c.face(i, s);
        let sigma = c.face_map(i, s);
        let fdim = c.dim - 1;
        // translate the remaining fixed axes into face coordinates
        let mut fmask = 0u32;
        let mut fvalues = 0u32;
        for t in 0..fdim {
            let (k, flip) = sigma.target(t);
            let a = if k < i { k } else { k + 1 };
            if bit(mask, a) {
                fmask |= 1 << t;
                if bit(values, a) ^ flip {
                    fvalues |= 1 << t;
                }
            }
        }
        let (g, phi) = self.subface(face, fmask, fvalues);
        let composed = phi
            .targets()
            .iter()
            .map(|&(t, f1)| {
                let (k, f2) = sigma.target(t);
                let a = if k < i { k } else { k + 1 };
                (a, f1 ^ f2)
            })
            .collect();
        (g, AxisMap::new(composed))
    }

    /// The edge-end along `axis` at corner `x` of `cube`.
    pub fn edge_end(&self, cube: usize, x: u32, axis: usize) -> LinkVertex {
        let d = self.cubes[cube].dim;
        let mask = ((1u32 << d) - 1) & !(1 << axis);
        let (edge, phi) = self.subface(cube, mask, x);
        let (_, flip) = phi.target(0);
        LinkVertex {
            edge,
            end: bit(x, axis) ^ flip,
        }
    }

    /// Edge-ends at corner `x` of `cube`, one per axis.
    pub fn corner_edge_ends(&self, cube: usize, x: u32) -> Vec<LinkVertex> {
        (0..self.cubes[cube].dim)
            .map(|a| self.edge_end(cube, x, a))
            .collect()
    }

    /// Vertex adjacency lists (loops dropped, parallel edges merged).
    pub fn vertex_adjacency(&self) -> BTreeMap<usize, BTreeSet<usize>> {
        let mut adj: BTreeMap<usize, BTreeSet<usize>> =
            self.vertices().map(|v| (v, BTreeSet::new())).collect();
        for e in self.edges() {
            let (u, w) = self.endpoints(e);
            if u != w {
                adj.get_mut(&u).unwrap().insert(w);
                adj.get_mut(&w).unwrap().insert(u);
            }
        }
        adj
    }

    /// Edge-metric distances from `src` to every reachable vertex.
    pub fn bfs(&self, src: usize) -> HashMap<usize, usize> {
        let adj = self.vertex_adjacency();
        bfs_on(&adj, &[src])
    }

    /// Edge-metric distance from any vertex of `sources`.
    pub fn bfs_multi(&self, sources: &[usize]) -> HashMap<usize, usize> {
        let adj = self.vertex_adjacency();
        bfs_on(&adj, sources)
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.vertex_adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &v in adj.keys() {
            if seen.contains(&v) {
                continue;
            }
            let reach = bfs_on(&adj, &[v]);
            let mut comp: Vec<usize> = reach.keys().copied().collect();
            comp.sort_unstable();
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    /// Whether edges are determined by their endpoints: no loops and no
    /// parallel edges.
    pub fn has_simplicial_one_skeleton(&self) -> bool {
        let mut seen = BTreeSet::new();
        for e in self.edges() {
            let (u, w) = self.endpoints(e);
            if u == w || !seen.insert((u.min(w), u.max(w))) {
                return false;
            }
        }
        true
    }

    /// Lookup of cubes by `(dim, vertex set)`. Only meaningful for complexes
    /// where cubes are determined by their vertices (NPC with simplicial
    /// 1-skeleton); later entries do not overwrite earlier ones.
    pub fn vertex_set_index(&self) -> HashMap<(usize, Vec<usize>), usize> {
        let mut out = HashMap::new();
        for (i, c) in self.cubes.iter().enumerate() {
            let mut vs = c.corners.clone();
            vs.sort_unstable();
            vs.dedup();
            out.entry((c.dim, vs)).or_insert(i);
        }
        out
    }

    pub fn to_description(&self) -> CubeComplexDescription {
        CubeComplexDescription {
            name: self.name.clone(),
            dim_cap: self.dim_cap,
            cubes: self
                .cubes
                .iter()
                .map(|c| {
                    let maps = if c.face_maps.iter().all(AxisMap::is_identity) {
                        None
                    } else {
                        Some(c.face_maps.iter().map(AxisMap::to_signed).collect())
                    };
                    CubeDescription {
                        id: c.id.clone(),
                        dim: c.dim,
                        faces: c.faces.iter().map(|&f| self.cubes[f].id.clone()).collect(),
                        corners: c.corners.iter().map(|&v| self.cubes[v].id.clone()).collect(),
                        face_maps: maps,
                    }
                })
                .collect(),
        }
    }

    /// Deterministic JSON with cubes sorted by `(dim, id)`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_description()).expect("serializable")
    }

    /// A copy with a different name.
    pub fn renamed(&self, name: &str) -> CubeComplex {
        let mut out = self.clone();
        out.name = name.to_string();
        out
    }

    /// A copy with a different dimension cap (re-validated).
    pub fn with_dim_cap(&self, cap: usize) -> Result<CubeComplex, ComplexError> {
        let mut desc = self.to_description();
        desc.dim_cap = cap;
        validate(&desc)
    }
}

pub(crate) fn bfs_on(
    adj: &BTreeMap<usize, BTreeSet<usize>>,
    sources: &[usize],
) -> HashMap<usize, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist.insert(s, 0).is_none() {
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if let Some(ns) = adj.get(&u) {
            for &w in ns {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}

fn validate(desc: &CubeComplexDescription) -> Result<CubeComplex, ComplexError> {
    let mut violations = Vec::new();
    let mut sorted: Vec<&CubeDescription> = desc.cubes.iter().collect();
    sorted.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));

    let mut index = HashMap::new();
    for (i, c) in sorted.iter().enumerate() {
        if index.insert(c.id.clone(), i).is_some() {
            violations.push(Violation::DuplicateId { id: c.id.clone() });
        }
        if c.dim > desc.dim_cap {
            violations.push(Violation::DimensionOverCap {
                cube: c.id.clone(),
                dim: c.dim,
                cap: desc.dim_cap,
            });
        }
    }
    if !violations.is_empty() {
        return Err(ComplexError::MalformedComplex(violations));
    }

    // references
    let mut cubes = Vec::with_capacity(sorted.len());
    for c in &sorted {
        if c.dim > 24 {
            violations.push(Violation::DimensionOverCap {
                cube: c.id.clone(),
                dim: c.dim,
                cap: desc.dim_cap,
            });
            continue;
        }
        if c.dim == 0 {
            if !c.faces.is_empty() {
                violations.push(Violation::FaceCount {
                    cube: c.id.clone(),
                    expected: 0,
                    found: c.faces.len(),
                });
            }
            if !(c.corners.is_empty() || c.corners.len() == 1 && c.corners[0] == c.id) {
                violations.push(Violation::VertexCorner { cube: c.id.clone() });
            }
            cubes.push(Cube {
                id: c.id.clone(),
                dim: 0,
                faces: vec![],
                corners: vec![index[&c.id]],
                face_maps: vec![],
            });
            continue;
        }
        let mut faces = Vec::new();
        if c.faces.len() != 2 * c.dim {
            violations.push(Violation::FaceCount {
                cube: c.id.clone(),
                expected: 2 * c.dim,
                found: c.faces.len(),
            });
        } else {
            for f in &c.faces {
                match index.get(f) {
                    None => violations.push(Violation::DanglingFace {
                        cube: c.id.clone(),
                        face: f.clone(),
                    }),
                    Some(&fi) => {
                        if sorted[fi].dim + 1 != c.dim {
                            violations.push(Violation::FaceDimension {
                                cube: c.id.clone(),
                                face: f.clone(),
                                expected: c.dim - 1,
                                found: sorted[fi].dim,
                            });
                        }
                        faces.push(fi);
                    }
                }
            }
        }
        let mut corners = Vec::new();
        if c.corners.len() != 1 << c.dim {
            violations.push(Violation::CornerCount {
                cube: c.id.clone(),
                expected: 1 << c.dim,
                found: c.corners.len(),
            });
        } else {
            for v in &c.corners {
                match index.get(v) {
                    None => violations.push(Violation::DanglingCorner {
                        cube: c.id.clone(),
                        corner: v.clone(),
                    }),
                    Some(&vi) => {
                        if sorted[vi].dim != 0 {
                            violations.push(Violation::CornerNotVertex {
                                cube: c.id.clone(),
                                corner: v.clone(),
                            });
                        }
                        corners.push(vi);
                    }
                }
            }
        }
        let mut face_maps = Vec::new();
        match &c.face_maps {
            None => face_maps = vec![AxisMap::identity(c.dim - 1); 2 * c.dim],
            Some(maps) => {
                if maps.len() != 2 * c.dim {
                    violations.push(Violation::BadFaceMap {
                        cube: c.id.clone(),
                        face_index: maps.len(),
                    });
                }
                for (k, m) in maps.iter().enumerate() {
                    match AxisMap::from_signed(m) {
                        Some(am) if am.len() == c.dim - 1 => face_maps.push(am),
                        _ => violations.push(Violation::BadFaceMap {
                            cube: c.id.clone(),
                            face_index: k,
                        }),
                    }
                }
            }
        }
        cubes.push(Cube {
            id: c.id.clone(),
            dim: c.dim,
            faces,
            corners,
            face_maps,
        });
    }
    if !violations.is_empty() {
        return Err(ComplexError::MalformedComplex(violations));
    }

    // corner consistency
    for c in &cubes {
        for i in 0..c.dim {
            for s in [false, true] {
                let k = 2 * i + s as usize;
                let f = &cubes[c.faces[k]];
                let sigma = &c.face_maps[k];
                for y in 0..(1u32 << f.dim) {
                    let x = insert_bit(sigma.apply(y), i, s);
                    if f.corners[y as usize] != c.corners[x as usize] {
                        violations.push(Violation::CornerMismatch {
                            cube: c.id.clone(),
                            face_index: k,
                            corner: y,
                        });
                        break;
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(ComplexError::MalformedComplex(violations));
    }

    let mut cofaces = vec![Vec::new(); cubes.len()];
    for (i, c) in cubes.iter().enumerate() {
        for &f in &c.faces {
            cofaces[f].push(i);
        }
    }
    let complex = CubeComplex {
        name: desc.name.clone(),
        dim_cap: desc.dim_cap,
        cubes,
        index,
        cofaces,
    };

    // the codimension-two faces reached through either axis must agree
    for (ci, c) in complex.cubes.iter().enumerate() {
        if c.dim < 2 {
            continue;
        }
        'pairs: for i in 0..c.dim {
            for j in (i + 1)..c.dim {
                for vals in 0..4u32 {
                    let values = ((vals & 1) << i) | (((vals >> 1) & 1) << j);
                    let mask = (1 << i) | (1 << j);
                    let low_first = complex.subface(ci, mask, values);
                    let high_first = complex.subface_high_first(ci, mask, values);
                    if low_first != high_first {
                        violations.push(Violation::FaceCommutation {
                            cube: c.id.clone(),
                            axes: (i, j),
                        });
                        break 'pairs;
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(ComplexError::MalformedComplex(violations));
    }
    Ok(complex)
}

impl CubeComplex {
    /// Same as [`CubeComplex::subface`] but descending through the highest
    /// fixed axis first.
    fn subface_high_first(&self, cube: usize, mask: u32, values: u32) -> (usize, AxisMap) {
        let c = &self.cubes[cube];
        if mask == 0 {
            return (cube, AxisMap::identity(c.dim));
        }
        let i = 31 - mask.leading_zeros() as usize;
        let s = bit(values, i);
        let face = c.face(i, s);
        let sigma = c.face_map(i, s);
        let mut fmask = 0u32;
        let mut fvalues = 0u32;
        for t in 0..c.dim - 1 {
            let (k, flip) = sigma.target(t);
            let a = if k < i { k } else { k + 1 };
            if bit(mask, a) {
                fmask |= 1 << t;
                if bit(values, a) ^ flip {
                    fvalues |= 1 << t;
                }
            }
        }
        let (g, phi) = self.subface_high_first(face, fmask, fvalues);
        let composed = phi
            .targets()
            .iter()
            .map(|&(t, f1)| {
                let (k, f2) = sigma.target(t);
                let a = if k < i { k } else { k + 1 };
                (a, f1 ^ f2)
            })
            .collect();
        (g, AxisMap::new(composed))
    }
}
