//! Filling empty cube frames.
//!
//! A frame for a `d`-cube at a vertex `v` is a set of `d` edge-ends at `v`
//! every `d−1` of which span a cube corner, while all `d` do not. The missing
//! cube is assembled from the `d` faces through `v` and the `d` opposite
//! faces, located by walking across the squares of the frame.

use std::collections::{BTreeMap, BTreeSet};

use super::link::{all_links, LinkVertex};
use super::{bit, insert_bit, ComplexError, CubeComplex, CubeComplexDescription, CubeDescription};

type Simplex = Vec<LinkVertex>;

/// Adds every cube demanded by an empty frame, dimension by dimension, until
/// no frames remain. Frames whose opposite faces are missing are skipped.
pub fn flag_complete(x: &CubeComplex) -> Result<CubeComplex, ComplexError> {
    let mut current = x.clone();
    let mut d = 3;
    while d <= current.dim() + 1 {
        let added = fill_dimension(&current, d)?;
        if !added.is_empty() {
            let mut desc = current.to_description();
            desc.cubes.extend(added);
            current = CubeComplex::from_description(&desc)?;
        }
        d += 1;
    }
    Ok(current)
}

fn fill_dimension(x: &CubeComplex, d: usize) -> Result<Vec<CubeDescription>, ComplexError> {
    let links = all_links(x);
    // simplex sets per vertex, kept current as cubes are added
    let mut sets: BTreeMap<usize, BTreeSet<Simplex>> = links
        .iter()
        .map(|(&v, l)| (v, l.simplex_sets()))
        .collect();
    // corner lookup: (vertex, simplex) -> (cube, corner)
    let mut corner_of: BTreeMap<(usize, Simplex), (usize, u32)> = BTreeMap::new();
    for (&v, l) in &links {
        for s in &l.simplices {
            let mut key = s.vertices.clone();
            key.sort_unstable();
            corner_of.entry((v, key)).or_insert((s.cube, s.corner));
        }
    }
    let mut added = Vec::new();
    let mut used_ids: BTreeSet<String> = x.cubes().iter().map(|c| c.id().to_string()).collect();
    let vertices: Vec<usize> = links.keys().copied().collect();
    for v in vertices {
        let frames = find_frames(&sets[&v], d);
        for frame in frames {
            if sets[&v].contains(&frame) {
                continue;
            }
            if d > x.dim_cap() {
                if assemble(x, v, &frame, &corner_of).is_some() {
                    return Err(ComplexError::DimensionCapExceeded {
                        needed: d,
                        cap: x.dim_cap(),
                    });
                }
                continue;
            }
            let Some(mut cube) = assemble(x, v, &frame, &corner_of) else {
                continue;
            };
            let base = cube.desc.id.clone();
            let mut n = 1;
            while used_ids.contains(&cube.desc.id) {
                n += 1;
                cube.desc.id = format!("{base}#{n}");
            }
            used_ids.insert(cube.desc.id.clone());
            for (w, s) in cube.corner_simplices {
                sets.get_mut(&w).unwrap().insert(s);
            }
            added.push(cube.desc);
        }
    }
    Ok(added)
}

/// Sorted `d`-sets whose every `(d−1)`-subset is a simplex.
fn find_frames(sets: &BTreeSet<Simplex>, d: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    let lower: Vec<&Simplex> = sets.iter().filter(|s| s.len() == d - 1).collect();
    let verts: BTreeSet<LinkVertex> = sets.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
    for s in lower {
        let last = *s.last().unwrap();
        for &u in verts.range(last..).skip(1) {
            let mut cand = s.clone();
            cand.push(u);
            let all = (0..d).all(|skip| {
                let sub: Simplex = cand
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &w)| w)
                    .collect();
                sets.contains(&sub)
            });
            if all && !sets.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out
}

struct Assembled {
    desc: CubeDescription,
    corner_simplices: Vec<(usize, Simplex)>,
}

/// Finds the corner `y` of `cube` whose edge-ends are `ends` (as a set) and
/// returns it with the position of each face axis in `ends`.
fn match_corner(x: &CubeComplex, cube: usize, ends: &[LinkVertex]) -> Option<(u32, Vec<usize>)> {
    let c = x.cube(cube);
    for y in 0..(1u32 << c.dim()) {
        let ee = x.corner_edge_ends(cube, y);
        let pos: Option<Vec<usize>> = ee.iter().map(|e| ends.iter().position(|w| w == e)).collect();
        if let Some(pos) = pos {
            let distinct: BTreeSet<usize> = pos.iter().copied().collect();
            if distinct.len() == ends.len() && pos.len() == ends.len() {
                return Some((y, pos));
            }
        }
    }
    None
}

fn assemble(
    x: &CubeComplex,
    v: usize,
    frame: &[LinkVertex],
    corner_of: &BTreeMap<(usize, Simplex), (usize, u32)>,
) -> Option<Assembled> {
    let d = frame.len();
    let lookup = |w: usize, s: &[LinkVertex]| {
        let mut key = s.to_vec();
        key.sort_unstable();
        corner_of.get(&(w, key)).copied()
    };
    // faces (i, −) through v: spanned by frame minus i
    let mut faces: Vec<Option<(usize, Vec<(usize, bool)>)>> = vec![None; 2 * d];
    let mut near = Vec::with_capacity(d);
    for i in 0..d {
        let rest: Vec<LinkVertex> = frame.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &w)| w).collect();
        let (g, _) = lookup(v, &rest)?;
        near.push(g);
        let axes_of_rest: Vec<usize> = (0..d).filter(|&k| k != i).collect();
        let (y, pos) = match_corner(x, g, &rest)?;
        // face axis t sits on cube axis axes_of_rest[pos[t]]; corner y is cube corner 0
        let map = pos
            .iter()
            .enumerate()
            .map(|(t, &p)| {
                let a = axes_of_rest[p];
                let rem = if a < i { a } else { a - 1 };
                (rem, bit(y, t))
            })
            .collect();
        faces[2 * i] = Some((g, map));
    }
    // far faces (i, +): at the other end w_i of frame[i], spanned by the
    // edges parallel to frame[j] across the squares at v
    for i in 0..d {
        let w = x.endpoints(frame[i].edge);
        let wi = if frame[i].end { w.0 } else { w.1 };
        let mut ends = Vec::with_capacity(d - 1);
        let mut axes = Vec::with_capacity(d - 1);
        for j in 0..d {
            if j == i {
                continue;
            }
            let pair = [frame[i], frame[j]];
            let (sq, corner) = lookup(v, &pair)?;
            let ee = x.corner_edge_ends(sq, corner);
            let ai = ee.iter().position(|&e| e == frame[i])?;
            let aj = 1 - ai;
            // step across axis ai, then take the edge-end along aj
            let far = corner ^ (1 << ai);
            let mu = x.edge_end(sq, far, aj);
            if x.cube(sq).corner(far) != wi {
                return None;
            }
            ends.push(mu);
            axes.push(j);
        }
        let (g, _) = lookup(wi, &ends)?;
        let (y, pos) = match_corner(x, g, &ends)?;
        let map = pos
            .iter()
            .enumerate()
            .map(|(t, &p)| {
                let a = axes[p];
                let rem = if a < i { a } else { a - 1 };
                (rem, bit(y, t))
            })
            .collect();
        faces[2 * i + 1] = Some((g, map));
    }
    let faces: Vec<(usize, Vec<(usize, bool)>)> = faces.into_iter().collect::<Option<_>>()?;

    // corners from faces; every corner appears in some face
    let mut corners: Vec<Option<usize>> = vec![None; 1 << d];
    for i in 0..d {
        for s in [false, true] {
            let (g, map) = &faces[2 * i + s as usize];
            let gc = x.cube(*g);
            for yy in 0..(1u32 << gc.dim()) {
                let mut rest = 0u32;
                for (t, &(rem, flip)) in map.iter().enumerate() {
                    if bit(yy, t) ^ flip {
                        rest |= 1 << rem;
                    }
                }
                let xx = insert_bit(rest, i, s) as usize;
                let vtx = gc.corner(yy);
                match corners[xx] {
                    None => corners[xx] = Some(vtx),
                    Some(prev) if prev == vtx => {}
                    Some(_) => return None,
                }
            }
        }
    }
    let corners: Vec<usize> = corners.into_iter().collect::<Option<_>>()?;

    let mut face_ids = Vec::with_capacity(2 * d);
    let mut face_maps = Vec::with_capacity(2 * d);
    let mut identity = true;
    for (g, map) in &faces {
        face_ids.push(x.id(*g).to_string());
        let signed: Vec<i64> = map
            .iter()
            .map(|&(rem, flip)| if flip { -(rem as i64 + 1) } else { rem as i64 + 1 })
            .collect();
        identity &= signed.iter().enumerate().all(|(t, &e)| e == t as i64 + 1);
        face_maps.push(signed);
    }
    let id = format!(
        "<{}>",
        near.iter().map(|&g| x.id(g)).collect::<Vec<_>>().join(",")
    );
    let desc = CubeDescription {
        id,
        dim: d,
        faces: face_ids,
        corners: corners.iter().map(|&c| x.id(c).to_string()).collect(),
        face_maps: if identity { None } else { Some(face_maps) },
    };
    // validate in isolation against the existing complex
    let mut probe: CubeComplexDescription = x.to_description();
    probe.dim_cap = probe.dim_cap.max(d);
    probe.cubes.push(desc.clone());
    let checked = CubeComplex::from_description(&probe).ok()?;
    let ci = checked.index_of(&desc.id)?;
    let corner_simplices = (0..(1u32 << d))
        .map(|xx| {
            let mut s = checked.corner_edge_ends(ci, xx);
            // edge indices are unchanged since only a top-dimensional cube was added
            s.sort_unstable();
            (checked.cube(ci).corner(xx), s)
        })
        .collect();
    Some(Assembled {
        desc,
        corner_simplices,
    })
}
