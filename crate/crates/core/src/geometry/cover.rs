//! Truncated universal covers, developed layer by layer.
//!
//! The 1-skeleton of the universal cover of an NPC complex is a median graph,
//! so every edge joins consecutive distance layers from the basepoint. Layer
//! `d` is produced from candidate pairs `(ũ, λ)` with `ũ` in layer `d−1` and
//! `λ` an edge-end at `π(ũ)` not yet used; two candidates lead to the same
//! vertex exactly when they are opposite sides of a square whose bottom corner
//! lies in layer `d−2`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::complex::{
    is_npc, CubeComplex, CubeComplexDescription, CubeDescription, CubicalMap, LinkVertex,
};

use super::GeometryError;

/// A ball in the universal cover with its covering map.
#[derive(Clone, Debug)]
pub struct CoverBall {
    pub base: Arc<CubeComplex>,
    pub total: Arc<CubeComplex>,
    pub covering: CubicalMap,
    /// Vertex index in `total`.
    pub basepoint: usize,
    pub radius: usize,
    /// Distance from the basepoint, per vertex index of `total`.
    pub depth: HashMap<usize, usize>,
}

impl CoverBall {
    /// Vertices at distance at most `radius − 1`: their whole star is present.
    pub fn interior(&self) -> BTreeSet<usize> {
        self.depth
            .iter()
            .filter(|&(_, &d)| d + 1 <= self.radius)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.depth.get(&v).is_some_and(|&d| d < self.radius)
    }
}

struct Node {
    image: usize,
    depth: usize,
    word: Vec<String>,
    /// Edge-end at the image vertex → neighbouring node.
    nbr: BTreeMap<LinkVertex, usize>,
}

fn letter(x: &CubeComplex, lv: LinkVertex) -> String {
    if lv.end {
        format!("{}^-1", x.id(lv.edge))
    } else {
        x.id(lv.edge).to_string()
    }
}

fn other_end(x: &CubeComplex, lv: LinkVertex) -> (usize, LinkVertex) {
    let (a, b) = x.endpoints(lv.edge);
    let far = if lv.end { a } else { b };
    (
        far,
        LinkVertex {
            edge: lv.edge,
            end: !lv.end,
        },
    )
}

fn word_name(word: &[String]) -> String {
    if word.is_empty() {
        "o".to_string()
    } else {
        word.join(".")
    }
}

pub fn universal_cover_ball(
    x: &CubeComplex,
    v0: &str,
    radius: usize,
) -> Result<CoverBall, GeometryError> {
    let base_v = x.vertex(v0)?;
    let verdict = is_npc(x);
    if !verdict.is_npc {
        return Err(GeometryError::NotNpc(verdict.witness));
    }
    // edge-ends available at each base vertex, and square corners by edge-end pair
    let mut ends_at: BTreeMap<usize, Vec<LinkVertex>> = x.vertices().map(|v| (v, Vec::new())).collect();
    for e in x.edges() {
        let (a, b) = x.endpoints(e);
        ends_at.get_mut(&a).unwrap().push(LinkVertex { edge: e, end: false });
        ends_at.get_mut(&b).unwrap().push(LinkVertex { edge: e, end: true });
    }
    let mut square_at: HashMap<(LinkVertex, LinkVertex), (usize, u32)> = HashMap::new();
    for s in x.cubes_of_dim(2) {
        for c in 0..4u32 {
            let ee = x.corner_edge_ends(s, c);
            square_at.insert((ee[0], ee[1]), (s, c));
            square_at.insert((ee[1], ee[0]), (s, c));
        }
    }

    let mut nodes = vec![Node {
        image: base_v,
        depth: 0,
        word: Vec::new(),
        nbr: BTreeMap::new(),
    }];
    let mut layers: Vec<Vec<usize>> = vec![vec![0]];
    for d in 1..=radius {
        let prev = &layers[d - 1];
        let mut cands: Vec<(usize, LinkVertex)> = Vec::new();
        for &u in prev {
            for &lv in &ends_at[&nodes[u].image] {
                if !nodes[u].nbr.contains_key(&lv) {
                    cands.push((u, lv));
                }
            }
        }
        let index: HashMap<(usize, LinkVertex), usize> =
            cands.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut parent: Vec<usize> = (0..cands.len()).collect();
        fn find(p: &mut [usize], a: usize) -> usize {
            let mut r = a;
            while p[r] != r {
                r = p[r];
            }
            p[a] = r;
            r
        }
        if d >= 2 {
            for &w in &layers[d - 2] {
                let ups: Vec<(LinkVertex, usize)> = nodes[w]
                    .nbr
                    .iter()
                    .filter(|(_, &t)| nodes[t].depth == d - 1)
                    .map(|(&lv, &t)| (lv, t))
                    .collect();
                for i in 0..ups.len() {
                    for j in (i + 1)..ups.len() {
                        let (m1, u1) = ups[i];
                        let (m2, u2) = ups[j];
                        let Some(&(s, c)) = square_at.get(&(m1, m2)) else { continue };
                        let ee = x.corner_edge_ends(s, c);
                        let a1 = if ee[0] == m1 { 0 } else { 1 };
                        let a2 = 1 - a1;
                        let l1 = x.edge_end(s, c ^ (1 << a1), a2);
                        let l2 = x.edge_end(s, c ^ (1 << a2), a1);
                        if let (Some(&i1), Some(&i2)) = (index.get(&(u1, l1)), index.get(&(u2, l2))) {
                            let (r1, r2) = (find(&mut parent, i1), find(&mut parent, i2));
                            if r1 != r2 {
                                parent[r1.max(r2)] = r1.min(r2);
                            }
                        }
                    }
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..cands.len() {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(i);
        }
        let mut layer = Vec::new();
        for members in classes.into_values() {
            let (u0, l0) = cands[members[0]];
            let (far, _) = other_end(x, l0);
            let id = nodes.len();
            let mut word: Option<Vec<String>> = None;
            let mut nbr = BTreeMap::new();
            for &m in &members {
                let (u, lv) = cands[m];
                let (f, back) = other_end(x, lv);
                if f != far || nbr.insert(back, u).is_some() {
                    return Err(GeometryError::DevelopmentFailed(format!(
                        "inconsistent merge at layer {d} from `{}`",
                        word_name(&nodes[u0].word)
                    )));
                }
                let mut w = nodes[u].word.clone();
                w.push(letter(x, lv));
                if word.as_ref().is_none_or(|cur| w < *cur) {
                    word = Some(w);
                }
            }
            for &m in &members {
                let (u, lv) = cands[m];
                nodes[u].nbr.insert(lv, id);
            }
            nodes.push(Node {
                image: far,
                depth: d,
                word: word.unwrap(),
                nbr,
            });
            layer.push(id);
        }
        layers.push(layer);
    }

    // emit the total complex
    let names: Vec<String> = nodes.iter().map(|n| word_name(&n.word)).collect();
    let face_maps: HashMap<String, Option<Vec<Vec<i64>>>> = x
        .to_description()
        .cubes
        .into_iter()
        .map(|d| (d.id, d.face_maps))
        .collect();
    let mut cubes = Vec::new();
    let mut images: Vec<(String, usize)> = Vec::new();
    for (u, n) in nodes.iter().enumerate() {
        cubes.push(CubeDescription {
            id: names[u].clone(),
            dim: 0,
            faces: vec![],
            corners: vec![names[u].clone()],
            face_maps: None,
        });
        images.push((names[u].clone(), n.image));
    }
    // lift every cube from each lift of its corner 0
    let lift_name = |c: usize, t: usize| format!("{}@{}", x.id(c), names[t]);
    for (c, cube) in x.cubes().iter().enumerate() {
        if cube.dim() == 0 {
            continue;
        }
        for t in 0..nodes.len() {
            if nodes[t].image != cube.corner(0) {
                continue;
            }
            let Some(corners) = lift_corners(x, &nodes, c, t) else { continue };
            let mut faces = Vec::with_capacity(2 * cube.dim());
            for i in 0..cube.dim() {
                for s in [false, true] {
                    let f = cube.face(i, s);
                    let x0 = crate::complex::insert_bit(cube.face_map(i, s).apply(0), i, s);
                    let fid = if x.cube(f).dim() == 0 {
                        names[corners[x0 as usize]].clone()
                    } else {
                        lift_name(f, corners[x0 as usize])
                    };
                    faces.push(fid);
                }
            }
            let fm = face_maps[cube.id()].clone();
            let id = lift_name(c, t);
            images.push((id.clone(), c));
            cubes.push(CubeDescription {
                id,
                dim: cube.dim(),
                faces,
                corners: corners.iter().map(|&k| names[k].clone()).collect(),
                face_maps: fm,
            });
        }
    }
    let total = CubeComplex::from_description(&CubeComplexDescription {
        name: format!("{}-cover-{}-{}", x.name(), v0, radius),
        dim_cap: x.dim_cap(),
        cubes,
    })
    .map_err(|e| GeometryError::DevelopmentFailed(e.to_string()))?;
    let total = Arc::new(total);
    let base = Arc::new(x.clone());
    let mut img_vec = vec![0; total.len()];
    for (id, c) in images {
        img_vec[total.index_of(&id).unwrap()] = c;
    }
    let alignments = total
        .cubes()
        .iter()
        .map(|c| (0..c.dim()).map(|i| Some((i, false))).collect())
        .collect();
    let covering = CubicalMap::new(total.clone(), base.clone(), img_vec, alignments)?;
    let mut depth = HashMap::new();
    for (u, n) in nodes.iter().enumerate() {
        depth.insert(total.index_of(&names[u]).unwrap(), n.depth);
    }
    Ok(CoverBall {
        basepoint: total.index_of("o").unwrap(),
        base,
        total,
        covering,
        radius,
        depth,
    })
}

/// Corners of the lift of cube `c` with corner 0 at node `t`, walking from
/// corner 0 one axis at a time; `None` if the walk leaves the ball.
fn lift_corners(x: &CubeComplex, nodes: &[Node], c: usize, t: usize) -> Option<Vec<usize>> {
    let d = x.cube(c).dim();
    let mut corners = vec![usize::MAX; 1 << d];
    corners[0] = t;
    for xx in 1..(1u32 << d) {
        let a = xx.trailing_zeros() as usize;
        let from = xx & !(1 << a);
        let lv = x.edge_end(c, from, a);
        let next = *nodes[corners[from as usize]].nbr.get(&lv)?;
        corners[xx as usize] = next;
    }
    // every other route must agree
    for xx in 0..(1u32 << d) {
        for a in 0..d {
            if xx >> a & 1 == 0 {
                let lv = x.edge_end(c, xx, a);
                let next = nodes[corners[xx as usize]].nbr.get(&lv).copied();
                if next != Some(corners[(xx | 1 << a) as usize]) {
                    return None;
                }
            }
        }
    }
    Some(corners)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build;

    #[test]
    fn torus_ball_is_l1_ball() {
        let b = universal_cover_ball(&build::torus(), "v", 2).unwrap();
        assert_eq!(b.total.counts()[0], 13);
        // squares with all four corners within distance 2
        assert_eq!(b.total.counts()[2], 4);
        assert_eq!(b.interior().len(), 5);
    }

    #[test]
    fn wedge_ball_is_tree() {
        let b = universal_cover_ball(&build::wedge_of_loops(2), "v", 2).unwrap();
        assert_eq!(b.total.counts(), vec![17, 16]);
    }

    #[test]
    fn square_develops_to_itself() {
        let b = universal_cover_ball(&build::standard_cube(2), "v00", 3).unwrap();
        assert_eq!(b.total.counts(), vec![4, 4, 1]);
    }

    #[test]
    fn cube_develops_to_itself() {
        let b = universal_cover_ball(&build::standard_cube(3), "v000", 3).unwrap();
        assert_eq!(b.total.counts(), vec![8, 12, 6, 1]);
    }

    #[test]
    fn non_npc_rejected() {
        assert!(matches!(
            universal_cover_ball(&build::cube_corner(), "v000", 1),
            Err(GeometryError::NotNpc(_))
        ));
    }
}
