//! The wall graph of a finite complex, its greedy colourings, the ball-based
//! classes of colourings, and the region/colouring conditions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{bfs_on, CubeComplex};
use crate::hyperplanes::{walls, WallSet};

#[derive(Debug, Error)]
pub enum WallGraphError {
    #[error("unknown wall {0}")]
    UnknownWall(usize),
    #[error("colouring has {got} entries, expected {expected}")]
    ColoringSize { got: usize, expected: usize },
    #[error("no colouring given for vertex `{0}`")]
    MissingColoring(String),
    #[error("condition ({condition}) violated at edge `{edge}`")]
    ConditionViolated { condition: u8, edge: String },
}

/// Colours `1..=k+1`, indexed by wall id.
pub type Coloring = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallGraph {
    pub vertices: usize,
    pub r: usize,
    pub adjacency: Vec<BTreeSet<usize>>,
    pub max_degree: usize,
}

impl WallGraph {
    /// A wall graph given directly by its edges; loops and repeats are dropped.
    pub fn from_edges(vertices: usize, r: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![BTreeSet::new(); vertices];
        for &(a, b) in edges {
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
        let max_degree = adjacency.iter().map(BTreeSet::len).max().unwrap_or(0);
        WallGraph {
            vertices,
            r,
            adjacency,
            max_degree,
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, n)| n.range(a + 1..).map(move |&b| (a, b)))
            .collect()
    }

    /// Walls within graph distance `radius` of `center`.
    pub fn ball(&self, center: usize, radius: usize) -> Result<BTreeSet<usize>, WallGraphError> {
        if center >= self.vertices {
            return Err(WallGraphError::UnknownWall(center));
        }
        let mut seen = BTreeMap::from([(center, 0usize)]);
        let mut queue = VecDeque::from([center]);
        while let Some(u) = queue.pop_front() {
            let d = seen[&u];
            if d == radius {
                continue;
            }
            for &v in &self.adjacency[u] {
                if !seen.contains_key(&v) {
                    seen.insert(v, d + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(seen.into_keys().collect())
    }

    pub fn to_dot(&self, colors: Option<&Coloring>) -> String {
        let mut out = String::from("graph walls {\n");
        for w in 0..self.vertices {
            match colors {
                Some(c) => out.push_str(&format!("  w{w} [label=\"{w}:{}\"];\n", c[w])),
                None => out.push_str(&format!("  w{w};\n")),
            }
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  w{a} -- w{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Wall-to-wall distances: the least edge-metric distance between carrier
/// vertices. `None` for walls in different components.
pub fn wall_distances(x: &CubeComplex, ws: &WallSet) -> Vec<Vec<Option<usize>>> {
    let adj = x.vertex_adjacency();
    let carriers: Vec<BTreeSet<usize>> = (0..ws.len()).map(|w| ws.carrier_vertices(x, w)).collect();
    carriers
        .iter()
        .map(|src| {
            let sources: Vec<usize> = src.iter().copied().collect();
            let dist = bfs_on(&adj, &sources);
            carriers
                .iter()
                .map(|dst| dst.iter().filter_map(|v| dist.get(v).copied()).min())
                .collect()
        })
        .collect()
}

/// `Γ(X)`: walls joined when their distance is at most `r`.
pub fn wall_graph(x: &CubeComplex, r: usize) -> WallGraph {
    let ws = walls(x);
    let dist = wall_distances(x, &ws);
    let mut edges = Vec::new();
    for (a, row) in dist.iter().enumerate() {
        for (b, d) in row.iter().enumerate().skip(a + 1) {
            if d.is_some_and(|d| d <= r) {
                edges.push((a, b));
            }
        }
    }
    WallGraph::from_edges(ws.len(), r, &edges)
}

/// Smallest available colour, walls in ascending order.
pub fn greedy_color(g: &WallGraph) -> Coloring {
    let mut c = vec![0u32; g.vertices];
    for w in 0..g.vertices {
        let used: BTreeSet<u32> = g.adjacency[w].iter().map(|&v| c[v]).collect();
        c[w] = (1..).find(|k| !used.contains(k)).expect("unbounded");
    }
    c
}

pub fn is_proper(g: &WallGraph, c: &Coloring) -> bool {
    c.len() == g.vertices && g.edges().iter().all(|&(a, b)| c[a] != c[b]) && c.iter().all(|&k| k >= 1)
}

fn check_len(g: &WallGraph, c: &Coloring) -> Result<(), WallGraphError> {
    if c.len() != g.vertices {
        return Err(WallGraphError::ColoringSize {
            got: c.len(),
            expected: g.vertices,
        });
    }
    Ok(())
}

/// Whether `c′ ∈ [c]_W`: the colourings agree on the ball of radius `c(W)`
/// about `W`.
pub fn class_equal(c: &Coloring, c2: &Coloring, g: &WallGraph, w: usize) -> Result<bool, WallGraphError> {
    check_len(g, c)?;
    check_len(g, c2)?;
    if w >= g.vertices {
        return Err(WallGraphError::UnknownWall(w));
    }
    Ok(g.ball(w, c[w] as usize)?.iter().all(|&u| c[u] == c2[u]))
}

/// `[c]_e = [c]_{W(e)}`, with `wall_of` giving the graph vertex of the wall
/// dual to each edge.
pub fn class_edge(
    c: &Coloring,
    c2: &Coloring,
    g: &WallGraph,
    wall_of: &dyn Fn(usize) -> usize,
    e: usize,
) -> Result<bool, WallGraphError> {
    class_equal(c, c2, g, wall_of(e))
}

/// `[c]_x`: the edge classes agree for every edge at `x`.
pub fn class_vertex(
    c: &Coloring,
    c2: &Coloring,
    g: &WallGraph,
    x: &CubeComplex,
    wall_of: &dyn Fn(usize) -> usize,
    v: usize,
) -> Result<bool, WallGraphError> {
    for e in x.edges() {
        let (a, b) = x.endpoints(e);
        if (a == v || b == v) && !class_edge(c, c2, g, wall_of, e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `g·c = c ∘ g⁻¹` for a wall permutation `g`.
pub fn pullback(c: &Coloring, g: &[usize]) -> Coloring {
    let mut out = vec![0; c.len()];
    for (w, &gw) in g.iter().enumerate() {
        out[gw] = c[w];
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionConditionReport {
    pub internal_edges: usize,
    pub outgoing_edges: usize,
    /// Colour of each boundary wall (graph vertex), when well defined.
    pub boundary_colors: BTreeMap<usize, u32>,
    /// A boundary wall whose dual edges carry different colours.
    pub ill_defined: Option<usize>,
    pub j_boundary_walls: Vec<usize>,
    /// `(vertex, edge, edge)` incidences at distinct `j`-boundary edges.
    pub double_incidences: Vec<(String, String, String)>,
    pub no_double_incidence: bool,
}

/// Checks conditions (1) and (2) for a region `z` of `x` carrying one
/// colouring per vertex. `projection` sends walls of `x` to vertices of `g`
/// (identity when `None`).
pub fn verify_region_conditions(
    x: &CubeComplex,
    z: &BTreeSet<usize>,
    colorings: &BTreeMap<usize, Coloring>,
    j: u32,
    g: &WallGraph,
    projection: Option<&[usize]>,
) -> Result<RegionConditionReport, WallGraphError> {
    let ws = walls(x);
    let wall_of = |e: usize| {
        let w = ws.of_edge(e);
        projection.map_or(w, |p| p[w])
    };
    for &v in z {
        let c = colorings
            .get(&v)
            .ok_or_else(|| WallGraphError::MissingColoring(x.id(v).to_string()))?;
        check_len(g, c)?;
    }
    let mut internal = 0;
    let mut outgoing: Vec<(usize, usize)> = Vec::new();
    for e in x.edges() {
        let (a, b) = x.endpoints(e);
        let (ina, inb) = (z.contains(&a), z.contains(&b));
        if ina && inb {
            internal += 1;
            if !class_edge(&colorings[&a], &colorings[&b], g, &wall_of, e)? {
                return Err(WallGraphError::ConditionViolated {
                    condition: 1,
                    edge: x.id(e).to_string(),
                });
            }
        }
        for (u, inside_other) in [(a, inb), (b, ina)] {
            if !z.contains(&u) {
                continue;
            }
            let high = colorings[&u][wall_of(e)] > j;
            if high != inside_other {
                return Err(WallGraphError::ConditionViolated {
                    condition: 2,
                    edge: x.id(e).to_string(),
                });
            }
            if !inside_other {
                outgoing.push((u, e));
            }
        }
    }
    let mut boundary_colors: BTreeMap<usize, u32> = BTreeMap::new();
    let mut ill_defined = None;
    for &(u, e) in &outgoing {
        let w = wall_of(e);
        let col = colorings[&u][w];
        if let Some(&prev) = boundary_colors.get(&w) {
            if prev != col && ill_defined.is_none() {
                ill_defined = Some(w);
            }
        } else {
            boundary_colors.insert(w, col);
        }
    }
    let j_walls: BTreeSet<usize> = boundary_colors
        .iter()
        .filter(|&(_, &c)| c == j)
        .map(|(&w, _)| w)
        .collect();
    let mut per_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, e) in &outgoing {
        if j_walls.contains(&wall_of(e)) {
            per_vertex.entry(u).or_default().push(e);
        }
    }
    let mut double_incidences = Vec::new();
    for (u, es) in &per_vertex {
        for (i, &e1) in es.iter().enumerate() {
            for &e2 in &es[i + 1..] {
                if e1 != e2 {
                    double_incidences.push((x.id(*u).to_string(), x.id(e1).to_string(), x.id(e2).to_string()));
                }
            }
        }
    }
    Ok(RegionConditionReport {
        internal_edges: internal,
        outgoing_edges: outgoing.len(),
        boundary_colors,
        ill_defined,
        j_boundary_walls: j_walls.into_iter().collect(),
        no_double_incidence: double_incidences.is_empty(),
        double_incidences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build;

    #[test]
    fn square_walls_cross() {
        let g = wall_graph(&build::standard_cube(2), 0);
        assert_eq!(g.vertices, 2);
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn distant_edges_not_adjacent() {
        let p = build::path(5);
        let ws = walls(&p);
        let d = wall_distances(&p, &ws);
        let (w0, w4) = (ws.of_edge(p.index_of("e0").unwrap()), ws.of_edge(p.index_of("e4").unwrap()));
        assert_eq!(d[w0][w4], Some(3));
        assert!(!wall_graph(&p, 2).adjacency[w0].contains(&w4));
    }

    #[test]
    fn greedy_on_path() {
        let g = WallGraph::from_edges(3, 0, &[(0, 1), (1, 2)]);
        assert_eq!(greedy_color(&g), vec![1, 2, 1]);
        let empty = WallGraph::from_edges(4, 0, &[]);
        assert_eq!(greedy_color(&empty), vec![1; 4]);
    }

    #[test]
    fn classes() {
        let g = WallGraph::from_edges(5, 0, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let c = greedy_color(&g);
        assert!(class_equal(&c, &c, &g, 0).unwrap());
        let mut far = c.clone();
        far[4] = 3;
        assert!(class_equal(&c, &far, &g, 0).unwrap());
        let mut near = c.clone();
        near[0] = 3;
        assert!(!class_equal(&c, &near, &g, 0).unwrap());
        assert!(matches!(class_equal(&c, &c, &g, 9), Err(WallGraphError::UnknownWall(9))));
    }

    #[test]
    fn pullback_moves_colors() {
        assert_eq!(pullback(&vec![1, 2, 3], &[1, 2, 0]), vec![3, 1, 2]);
    }

    fn half_grid() -> (CubeComplex, WallGraph, BTreeSet<usize>, Coloring) {
        let x = build::grid(3, 1);
        let ws = walls(&x);
        let w = |e: &str| ws.of_edge(x.index_of(e).unwrap());
        let mut c = vec![0; ws.len()];
        c[w("h0_0")] = 2;
        c[w("h1_0")] = 1;
        c[w("h2_0")] = 2;
        c[w("u0_0")] = 3;
        let g = wall_graph(&x, 0);
        assert!(is_proper(&g, &c));
        let z = x
            .vertices()
            .filter(|&v| x.id(v).starts_with("p0") || x.id(v).starts_with("p1"))
            .collect();
        (x, g, z, c)
    }

    #[test]
    fn half_grid_region() {
        let (x, g, z, c) = half_grid();
        let cols = z.iter().map(|&v| (v, c.clone())).collect();
        let rep = verify_region_conditions(&x, &z, &cols, 1, &g, None).unwrap();
        assert_eq!(rep.outgoing_edges, 2);
        assert_eq!(rep.boundary_colors.values().copied().collect::<Vec<_>>(), vec![1]);
        assert!(rep.ill_defined.is_none() && rep.no_double_incidence);
    }

    #[test]
    fn mutated_vertex_breaks_condition_one() {
        let (x, g, z, c) = half_grid();
        let mut cols: BTreeMap<usize, Coloring> = z.iter().map(|&v| (v, c.clone())).collect();
        let v = x.index_of("p0_0").unwrap();
        let h = walls(&x).of_edge(x.index_of("u0_0").unwrap());
        cols.get_mut(&v).unwrap()[h] = 4;
        assert!(matches!(
            verify_region_conditions(&x, &z, &cols, 1, &g, None),
            Err(WallGraphError::ConditionViolated { condition: 1, .. })
        ));
    }
}
