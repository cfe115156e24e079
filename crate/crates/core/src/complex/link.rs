use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{ComplexError, CubeComplex};

/// An end of an edge: `end = false` is the corner-0 end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkVertex {
    pub edge: usize,
    pub end: bool,
}

impl LinkVertex {
    pub fn label(&self, x: &CubeComplex) -> String {
        format!("{}.{}", x.id(self.edge), self.end as u8)
    }
}

/// One simplex of a link: the corner `corner` of `cube` sitting at the
/// vertex, with its edge-ends listed in axis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkSimplex {
    pub cube: usize,
    pub corner: u32,
    pub vertices: Vec<LinkVertex>,
}

#[derive(Clone, Debug)]
pub struct VertexLink {
    pub vertex: usize,
    pub link_vertices: Vec<LinkVertex>,
    pub simplices: Vec<LinkSimplex>,
}

impl VertexLink {
    /// Sorted vertex sets of all simplices of dimension ≥ 0.
    pub fn simplex_sets(&self) -> BTreeSet<Vec<LinkVertex>> {
        self.simplices
            .iter()
            .map(|s| {
                let mut v = s.vertices.clone();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Number of simplices with `k + 1` vertices.
    pub fn count(&self, k: usize) -> usize {
        self.simplices
            .iter()
            .filter(|s| s.vertices.len() == k + 1)
            .count()
    }
}

pub fn link(x: &CubeComplex, v: &str) -> Result<VertexLink, ComplexError> {
    let vi = x.vertex(v)?;
    Ok(link_at(x, vi))
}

pub(crate) fn link_at(x: &CubeComplex, v: usize) -> VertexLink {
    let mut link_vertices = Vec::new();
    let mut simplices = Vec::new();
    for (ci, c) in x.cubes().iter().enumerate() {
        if c.dim() == 0 {
            continue;
        }
        if c.dim() == 1 {
            for end in [false, true] {
                if c.corner(end as u32) == v {
                    link_vertices.push(LinkVertex { edge: ci, end });
                }
            }
        }
        for corner in 0..(1u32 << c.dim()) {
            if c.corner(corner) == v {
                simplices.push(LinkSimplex {
                    cube: ci,
                    corner,
                    vertices: x.corner_edge_ends(ci, corner),
                });
            }
        }
    }
    VertexLink {
        vertex: v,
        link_vertices,
        simplices,
    }
}

/// Links of every vertex, indexed by vertex cube index.
pub(crate) fn all_links(x: &CubeComplex) -> BTreeMap<usize, VertexLink> {
    let mut out: BTreeMap<usize, VertexLink> = x
        .vertices()
        .map(|v| {
            (
                v,
                VertexLink {
                    vertex: v,
                    link_vertices: Vec::new(),
                    simplices: Vec::new(),
                },
            )
        })
        .collect();
    for (ci, c) in x.cubes().iter().enumerate() {
        if c.dim() == 0 {
            continue;
        }
        if c.dim() == 1 {
            for end in [false, true] {
                let l = out.get_mut(&c.corner(end as u32)).unwrap();
                l.link_vertices.push(LinkVertex { edge: ci, end });
            }
        }
        for corner in 0..(1u32 << c.dim()) {
            let vertices = x.corner_edge_ends(ci, corner);
            out.get_mut(&c.corner(corner))
                .unwrap()
                .simplices
                .push(LinkSimplex {
                    cube: ci,
                    corner,
                    vertices,
                });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NpcWitness {
    /// A cube corner whose edge-ends repeat.
    RepeatedVertex { vertex: String, cube: String, corner: u32 },
    /// Two cube corners spanning the same link simplex.
    DuplicateSimplex {
        vertex: String,
        first: (String, u32),
        second: (String, u32),
    },
    /// A complete subgraph of the link spanning no simplex.
    EmptyClique { vertex: String, clique: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NpcVerdict {
    pub is_npc: bool,
    pub witness: Option<NpcWitness>,
}

/// Link condition: every vertex link is simplicial and flag.
pub fn is_npc(x: &CubeComplex) -> NpcVerdict {
    for (v, l) in all_links(x) {
        if let Some(w) = link_defect(x, v, &l) {
            return NpcVerdict {
                is_npc: false,
                witness: Some(w),
            };
        }
    }
    NpcVerdict {
        is_npc: true,
        witness: None,
    }
}

fn link_defect(x: &CubeComplex, v: usize, l: &VertexLink) -> Option<NpcWitness> {
    let vid = x.id(v).to_string();
    let mut seen: BTreeMap<Vec<LinkVertex>, (usize, u32)> = BTreeMap::new();
    for s in &l.simplices {
        let mut key = s.vertices.clone();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Some(NpcWitness::RepeatedVertex {
                vertex: vid,
                cube: x.id(s.cube).to_string(),
                corner: s.corner,
            });
        }
        if let Some(&(c0, x0)) = seen.get(&key) {
            return Some(NpcWitness::DuplicateSimplex {
                vertex: vid,
                first: (x.id(c0).to_string(), x0),
                second: (x.id(s.cube).to_string(), s.corner),
            });
        }
        seen.insert(key, (s.cube, s.corner));
    }
    let mut adj: BTreeMap<LinkVertex, BTreeSet<LinkVertex>> = BTreeMap::new();
    for key in seen.keys() {
        if key.len() == 2 {
            adj.entry(key[0]).or_default().insert(key[1]);
            adj.entry(key[1]).or_default().insert(key[0]);
        }
    }
    // every simplex extended by a vertex adjacent to all of it must be a simplex;
    // by induction on size this makes every clique a simplex
    for key in seen.keys() {
        if key.len() < 2 {
            continue;
        }
        let Some(first) = adj.get(&key[0]) else { continue };
        for &u in first {
            if key.contains(&u) {
                continue;
            }
            if key[1..].iter().all(|w| adj.get(w).is_some_and(|n| n.contains(&u))) {
                let mut bigger = key.clone();
                bigger.push(u);
                bigger.sort_unstable();
                if !seen.contains_key(&bigger) {
                    return Some(NpcWitness::EmptyClique {
                        vertex: vid,
                        clique: bigger.iter().map(|w| w.label(x)).collect(),
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::build;
    use super::*;

    #[test]
    fn square_corner_link() {
        let sq = build::standard_cube(2);
        let l = link(&sq, "v00").unwrap();
        assert_eq!(l.link_vertices.len(), 2);
        assert_eq!(l.count(1), 1);
    }

    #[test]
    fn torus_link_is_four_cycle() {
        let t = build::torus();
        let l = link(&t, "v").unwrap();
        assert_eq!(l.link_vertices.len(), 4);
        assert_eq!(l.count(1), 4);
        let sets = l.simplex_sets();
        let mut degree: BTreeMap<LinkVertex, usize> = BTreeMap::new();
        for s in sets.iter().filter(|s| s.len() == 2) {
            *degree.entry(s[0]).or_default() += 1;
            *degree.entry(s[1]).or_default() += 1;
        }
        assert!(degree.values().all(|&d| d == 2));
        assert!(is_npc(&t).is_npc);
    }

    #[test]
    fn unknown_vertex() {
        assert!(matches!(
            link(&build::torus(), "nope"),
            Err(ComplexError::UnknownVertex(_))
        ));
    }

    #[test]
    fn cube_corner_is_not_npc() {
        let x = build::cube_corner();
        match is_npc(&x).witness {
            Some(NpcWitness::EmptyClique { clique, .. }) => assert_eq!(clique.len(), 3),
            other => panic!("expected empty triangle, got {other:?}"),
        }
    }
}
