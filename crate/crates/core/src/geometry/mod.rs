//! Combinatorial geometry of finite pieces of CAT(0) cube complexes.

mod cover;
mod region;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, CubeComplex, NpcWitness};
use crate::hyperplanes::WallSet;

pub use cover::{universal_cover_ball, CoverBall};
pub use region::{BoundaryReport, GateResult, Halfspace, Portal, Region, Side, WallGeometry};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("complex is not non-positively curved: {0:?}")]
    NotNpc(Option<NpcWitness>),
    #[error("vertices `{0}` and `{1}` lie in different components")]
    Disconnected(String, String),
    #[error("subcomplex is not convex: {0}")]
    NotConvex(String),
    #[error("nearest point is not unique: {0} candidates at distance {1}")]
    Ambiguous(usize, usize),
    #[error("gate fails the separating-wall characterization at `{0}`")]
    GateCharacterization(String),
    #[error("region is empty")]
    EmptyRegion,
    #[error("unknown wall {0}")]
    UnknownWall(usize),
    #[error("wall {0} does not separate the ball consistently")]
    NotSeparating(usize),
    #[error("development failed: {0}")]
    DevelopmentFailed(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Edge-metric distance between two vertices.
pub fn distance(x: &CubeComplex, u: &str, v: &str) -> Result<usize, GeometryError> {
    let (ui, vi) = (x.vertex(u)?, x.vertex(v)?);
    x.bfs(ui)
        .get(&vi)
        .copied()
        .ok_or_else(|| GeometryError::Disconnected(u.to_string(), v.to_string()))
}

/// All-pairs distances over the vertices of `x`, keyed by vertex index.
pub fn all_distances(x: &CubeComplex) -> HashMap<usize, HashMap<usize, usize>> {
    let adj = x.vertex_adjacency();
    adj.keys()
        .map(|&v| (v, crate::complex::bfs_on(&adj, &[v])))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexWitness {
    /// `between` lies on a geodesic from `from` to `to` but outside the set.
    IntervalEscape {
        from: String,
        to: String,
        between: String,
    },
    /// A cube with all corners in the set that the subcomplex omits.
    NotFull { cube: String },
    /// Two vertices of the set in different components.
    Disconnected { from: String, to: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexVerdict {
    pub convex: bool,
    pub witness: Option<ConvexWitness>,
    pub pairs_checked: usize,
    /// Set when the pair budget ran out before every pair was examined.
    pub budget_exhausted: bool,
}

pub const DEFAULT_PAIR_BUDGET: usize = 1_000_000;

/// Convexity of the full subcomplex on `vertices`: every geodesic between
/// two of its vertices stays inside. Pairs are visited in ascending order.
pub fn is_convex_vertices(
    x: &CubeComplex,
    vertices: &BTreeSet<usize>,
    budget: usize,
) -> ConvexVerdict {
    is_convex_with(x, vertices, &all_distances(x), budget)
}

pub fn is_convex_with(
    x: &CubeComplex,
    vertices: &BTreeSet<usize>,
    dist: &HashMap<usize, HashMap<usize, usize>>,
    budget: usize,
) -> ConvexVerdict {
    let vs: Vec<usize> = vertices.iter().copied().collect();
    let all: Vec<usize> = x.vertices().collect();
    let mut checked = 0;
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if checked >= budget {
                return ConvexVerdict {
                    convex: true,
                    witness: None,
                    pairs_checked: checked,
                    budget_exhausted: true,
                };
            }
            checked += 1;
            let (u, v) = (vs[i], vs[j]);
            let Some(&duv) = dist[&u].get(&v) else {
                return ConvexVerdict {
                    convex: false,
                    witness: Some(ConvexWitness::Disconnected {
                        from: x.id(u).to_string(),
                        to: x.id(v).to_string(),
                    }),
                    pairs_checked: checked,
                    budget_exhausted: false,
                };
            };
            for &w in &all {
                if vertices.contains(&w) {
                    continue;
                }
                let (Some(&a), Some(&b)) = (dist[&u].get(&w), dist[&w].get(&v)) else { continue };
                if a + b == duv {
                    return ConvexVerdict {
                        convex: false,
                        witness: Some(ConvexWitness::IntervalEscape {
                            from: x.id(u).to_string(),
                            to: x.id(v).to_string(),
                            between: x.id(w).to_string(),
                        }),
                        pairs_checked: checked,
                        budget_exhausted: false,
                    };
                }
            }
        }
    }
    ConvexVerdict {
        convex: true,
        witness: None,
        pairs_checked: checked,
        budget_exhausted: false,
    }
}

/// Convexity of a subcomplex given by its cubes: it must be the full
/// subcomplex on its vertices and that vertex set must be convex.
pub fn is_convex(x: &CubeComplex, cubes: &BTreeSet<usize>, budget: usize) -> ConvexVerdict {
    let vertices: BTreeSet<usize> = cubes
        .iter()
        .flat_map(|&c| x.cube(c).corners().iter().copied())
        .collect();
    for (c, cube) in x.cubes().iter().enumerate() {
        if !cubes.contains(&c) && cube.corners().iter().all(|v| vertices.contains(v)) {
            return ConvexVerdict {
                convex: false,
                witness: Some(ConvexWitness::NotFull {
                    cube: cube.id().to_string(),
                }),
                pairs_checked: 0,
                budget_exhausted: false,
            };
        }
    }
    is_convex_vertices(x, &vertices, budget)
}

/// Cubes whose corners all lie in `vertices`.
pub fn full_subcomplex(x: &CubeComplex, vertices: &BTreeSet<usize>) -> BTreeSet<usize> {
    x.cubes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.corners().iter().all(|v| vertices.contains(v)))
        .map(|(i, _)| i)
        .collect()
}

/// Adds all faces of the given cubes.
pub fn face_closure(x: &CubeComplex, cubes: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = cubes.clone();
    let mut stack: Vec<usize> = cubes.iter().copied().collect();
    while let Some(c) = stack.pop() {
        for &f in x.cube(c).faces() {
            if out.insert(f) {
                stack.push(f);
            }
        }
    }
    out
}

/// `𝒩^k(S)` for a set of cells: repeatedly take every cube sharing a vertex
/// with the current subcomplex, closed under faces.
pub fn cubical_neighborhood(x: &CubeComplex, cells: &BTreeSet<usize>, k: usize) -> BTreeSet<usize> {
    let mut current = face_closure(x, cells);
    for _ in 0..k {
        current = grow(x, &current);
    }
    current
}

fn grow(x: &CubeComplex, cubes: &BTreeSet<usize>) -> BTreeSet<usize> {
    let verts: BTreeSet<usize> = cubes
        .iter()
        .flat_map(|&c| x.cube(c).corners().iter().copied())
        .collect();
    let touching: BTreeSet<usize> = x
        .cubes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.corners().iter().any(|v| verts.contains(v)))
        .map(|(i, _)| i)
        .collect();
    face_closure(x, &touching)
}

/// `𝒩^k(W)`: the first step is the closed carrier of the wall (the cubes
/// meeting a wall are exactly the cubes containing one of its midcubes).
pub fn wall_neighborhood(x: &CubeComplex, ws: &WallSet, wall: usize, k: usize) -> BTreeSet<usize> {
    let mut current = face_closure(x, &ws.wall(wall).carrier);
    for _ in 1..k {
        current = grow(x, &current);
    }
    current
}
