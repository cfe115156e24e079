//! Half-spaces, regions cut out by them, gates and portals.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::CubeComplex;
use crate::hyperplanes::{walls, WallSet};

use super::{full_subcomplex, is_convex_with, all_distances, GeometryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub wall: usize,
    pub side: Side,
    pub vertices: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub halfspaces: Vec<(usize, Side)>,
    pub vertices: BTreeSet<usize>,
    /// The full subcomplex on `vertices`.
    pub cubes: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateResult {
    pub gate: usize,
    pub distance: usize,
    /// Walls separating the vertex from its gate, ascending.
    pub separating: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Portal {
    pub wall: usize,
    pub color: u32,
    /// Midcubes `(cube, axis)` of the wall whose face on the region's side
    /// lies in the region.
    pub cells: Vec<(usize, usize)>,
    /// Dual edges with exactly one endpoint in the region.
    pub dual_edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub boundary_walls: Vec<usize>,
    pub j: u32,
    pub j_boundary_walls: Vec<usize>,
    pub portals: Vec<Portal>,
    /// `(vertex, edge, edge)`: a region vertex incident at two distinct
    /// outgoing edges dual to `j`-boundary walls.
    pub double_incidences: Vec<(usize, usize, usize)>,
    pub no_double_incidence: bool,
}

/// Walls of a complex with the side of every vertex, relative to a basepoint
/// (which lies on the `−` side of every wall).
#[derive(Clone, Debug)]
pub struct WallGeometry {
    pub walls: WallSet,
    pub basepoint: usize,
    sides: Vec<HashMap<usize, Side>>,
    dist: HashMap<usize, HashMap<usize, usize>>,
}

impl WallGeometry {
    /// Computes sides by crossing parity along paths from `basepoint`. Fails
    /// if some wall does not cut the component consistently.
    pub fn new(x: &CubeComplex, basepoint: usize) -> Result<Self, GeometryError> {
        let ws = walls(x);
        let adj = x.vertex_adjacency();
        let reach = crate::complex::bfs_on(&adj, &[basepoint]);
        let mut nbrs: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for e in x.edges() {
            let (a, b) = x.endpoints(e);
            nbrs.entry(a).or_default().push((b, e));
            nbrs.entry(b).or_default().push((a, e));
        }
        let mut sides = Vec::with_capacity(ws.len());
        for w in &ws.walls {
            let dual: BTreeSet<usize> = w.dual_edges.iter().copied().collect();
            let mut side: HashMap<usize, Side> = HashMap::new();
            side.insert(basepoint, Side::Minus);
            let mut queue = VecDeque::from([basepoint]);
            while let Some(u) = queue.pop_front() {
                let su = side[&u];
                for &(v, e) in nbrs.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                    let sv = if dual.contains(&e) { su.flip() } else { su };
                    match side.get(&v) {
                        None => {
                            side.insert(v, sv);
                            queue.push_back(v);
                        }
                        Some(&s) if s != sv => return Err(GeometryError::NotSeparating(w.id)),
                        _ => {}
                    }
                }
            }
            debug_assert_eq!(side.len(), reach.len());
            sides.push(side);
        }
        Ok(WallGeometry {
            walls: ws,
            basepoint,
            sides,
            dist: all_distances(x),
        })
    }

    pub fn side(&self, wall: usize, v: usize) -> Option<Side> {
        self.sides.get(wall)?.get(&v).copied()
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.dist.get(&u)?.get(&v).copied()
    }

    pub fn distances(&self) -> &HashMap<usize, HashMap<usize, usize>> {
        &self.dist
    }

    /// Walls with `u` and `v` on different sides.
    pub fn separating(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.walls.len())
            .filter(|&w| self.side(w, u) != self.side(w, v))
            .collect()
    }

    pub fn halfspace(&self, wall: usize, side: Side) -> Result<Halfspace, GeometryError> {
        let sides = self.sides.get(wall).ok_or(GeometryError::UnknownWall(wall))?;
        Ok(Halfspace {
            wall,
            side,
            vertices: sides
                .iter()
                .filter(|&(_, &s)| s == side)
                .map(|(&v, _)| v)
                .collect(),
        })
    }

    /// Both half-spaces of a wall, `−` first.
    pub fn halfspaces(&self, wall: usize) -> Result<(Halfspace, Halfspace), GeometryError> {
        Ok((self.halfspace(wall, Side::Minus)?, self.halfspace(wall, Side::Plus)?))
    }

    pub fn region(&self, x: &CubeComplex, hs: &[(usize, Side)]) -> Result<Region, GeometryError> {
        let mut vertices: BTreeSet<usize> = self.sides.first().map_or_else(
            || x.vertices().collect(),
            |s| s.keys().copied().collect(),
        );
        for &(w, side) in hs {
            let sides = self.sides.get(w).ok_or(GeometryError::UnknownWall(w))?;
            vertices.retain(|v| sides.get(v) == Some(&side));
        }
        if vertices.is_empty() {
            return Err(GeometryError::EmptyRegion);
        }
        Ok(Region {
            halfspaces: hs.to_vec(),
            cubes: full_subcomplex(x, &vertices),
            vertices,
        })
    }

    /// The nearest vertex of `target` to `v`, checked against the
    /// separating-wall characterization. `target` must be convex.
    pub fn gate(
        &self,
        x: &CubeComplex,
        target: &BTreeSet<usize>,
        v: usize,
        budget: usize,
    ) -> Result<GateResult, GeometryError> {
        if target.is_empty() {
            return Err(GeometryError::EmptyRegion);
        }
        let verdict = is_convex_with(x, target, &self.dist, budget);
        if !verdict.convex {
            return Err(GeometryError::NotConvex(format!("{:?}", verdict.witness)));
        }
        let dv = &self.dist[&v];
        let best = target
            .iter()
            .filter_map(|t| dv.get(t).copied())
            .min()
            .ok_or_else(|| GeometryError::Disconnected(x.id(v).to_string(), "region".into()))?;
        let nearest: Vec<usize> = target
            .iter()
            .copied()
            .filter(|t| dv.get(t) == Some(&best))
            .collect();
        if nearest.len() != 1 {
            return Err(GeometryError::Ambiguous(nearest.len(), best));
        }
        let g = nearest[0];
        let separating = self.separating(v, g);
        let from_target: Vec<usize> = (0..self.walls.len())
            .filter(|&w| {
                let sv = self.side(w, v);
                target.iter().all(|&t| self.side(w, t) != sv)
            })
            .collect();
        if separating != from_target {
            return Err(GeometryError::GateCharacterization(x.id(v).to_string()));
        }
        Ok(GateResult {
            gate: g,
            distance: best,
            separating,
        })
    }

    /// Boundary walls of a region and the portals of its `j`-boundary walls.
    /// `colors` is indexed by wall id.
    pub fn boundary_walls(
        &self,
        x: &CubeComplex,
        region: &BTreeSet<usize>,
        colors: &[u32],
        j: u32,
    ) -> Result<BoundaryReport, GeometryError> {
        if region.is_empty() {
            return Err(GeometryError::EmptyRegion);
        }
        let mut leaving: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut out_edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in x.edges() {
            let (a, b) = x.endpoints(e);
            let (ia, ib) = (region.contains(&a), region.contains(&b));
            if ia != ib {
                let w = self.walls.of_edge(e);
                leaving.entry(w).or_default().push(e);
                out_edges.entry(if ia { a } else { b }).or_default().push(e);
            }
        }
        let boundary: Vec<usize> = leaving.keys().copied().collect();
        let mut portals = Vec::new();
        for (&w, edges) in &leaving {
            let color = *colors.get(w).ok_or(GeometryError::UnknownWall(w))?;
            let inside = self.side(w, *region.iter().next().unwrap());
            let mut cells = Vec::new();
            for &(c, k) in &self.walls.wall(w).midcubes {
                let cube = x.cube(c);
                for s in [false, true] {
                    let face_corners: Vec<usize> = (0..(1u32 << cube.dim()))
                        .filter(|&xx| (xx >> k & 1 == 1) == s)
                        .map(|xx| cube.corner(xx))
                        .collect();
                    if face_corners.iter().all(|v| region.contains(v))
                        && self.side(w, face_corners[0]) == inside
                    {
                        cells.push((c, k));
                        break;
                    }
                }
            }
            portals.push(Portal {
                wall: w,
                color,
                cells,
                dual_edges: edges.clone(),
            });
        }
        let j_walls: BTreeSet<usize> = boundary
            .iter()
            .copied()
            .filter(|&w| colors[w] == j)
            .collect();
        let mut double = Vec::new();
        for (&v, edges) in &out_edges {
            let js: Vec<usize> = edges
                .iter()
                .copied()
                .filter(|&e| j_walls.contains(&self.walls.of_edge(e)))
                .collect();
            if js.len() >= 2 {
                double.push((v, js[0], js[1]));
            }
        }
        Ok(BoundaryReport {
            boundary_walls: boundary,
            j,
            j_boundary_walls: j_walls.into_iter().collect(),
            no_double_incidence: double.is_empty(),
            double_incidences: double,
            portals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build;
    use crate::geometry::universal_cover_ball;

    #[test]
    fn square_halfspaces_and_gate() {
        let sq = build::standard_cube(2);
        let v00 = sq.index_of("v00").unwrap();
        let g = WallGeometry::new(&sq, v00).unwrap();
        assert_eq!(g.walls.len(), 2);
        for w in 0..2 {
            let (m, p) = g.halfspaces(w).unwrap();
            assert_eq!((m.vertices.len(), p.vertices.len()), (2, 2));
            assert!(m.vertices.contains(&v00));
        }
        let y: BTreeSet<usize> = ["v00", "v01"].iter().map(|i| sq.index_of(i).unwrap()).collect();
        let r = g.gate(&sq, &y, sq.index_of("v11").unwrap(), 1000).unwrap();
        assert_eq!(sq.id(r.gate), "v01");
        assert_eq!(r.separating.len(), 1);
    }

    #[test]
    fn corner_region_has_one_portal_of_color_one() {
        let sq = build::standard_cube(2);
        let v00 = sq.index_of("v00").unwrap();
        let g = WallGeometry::new(&sq, v00).unwrap();
        let z = g.region(&sq, &[(0, Side::Minus), (1, Side::Minus)]).unwrap();
        assert_eq!(z.vertices.len(), 1);
        let rep = g.boundary_walls(&sq, &z.vertices, &[1, 2], 1).unwrap();
        assert_eq!(rep.boundary_walls.len(), 2);
        assert_eq!(rep.j_boundary_walls.len(), 1);
        assert!(rep.no_double_incidence);
    }

    #[test]
    fn whole_ball_has_no_boundary() {
        let b = universal_cover_ball(&build::torus(), "v", 2).unwrap();
        let g = WallGeometry::new(&b.total, b.basepoint).unwrap();
        let all: BTreeSet<usize> = b.total.vertices().collect();
        let colors = vec![1; g.walls.len()];
        assert!(g.boundary_walls(&b.total, &all, &colors, 1).unwrap().boundary_walls.is_empty());
    }
}
