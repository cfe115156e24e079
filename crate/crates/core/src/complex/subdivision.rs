//! Cubical barycentric subdivision.
//!
//! Each `n`-cube `F` of `X` is cut into `2^n` small cubes. A small `k`-cube
//! whose interior lies in the interior of `F` is determined by a set `K` of
//! `k` free axes of `F` together with a side `ε_a` for each `a ∈ K`: the
//! coordinates outside `K` sit at `1/2` and coordinate `a ∈ K` runs from `1/2`
//! towards `ε_a`. Small-cube axis `i` is `K[i]`, oriented from the center
//! outward, so corner bit `i = 1` means coordinate `K[i]` has reached `ε_i`.

use std::collections::HashMap;

use super::{bit, CubeComplex, CubeComplexDescription, CubeDescription};

/// Provenance of a cube of the subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallCube {
    /// The cube of `X` whose interior contains this one.
    pub top: usize,
    /// Free axes of `top`, ascending.
    pub axes: Vec<usize>,
    /// Side per free axis.
    pub signs: Vec<bool>,
    /// The face of `top` reached by pushing every free axis to its side; the
    /// small cube spans the face-poset interval `[bottom, top]`.
    pub bottom: usize,
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: CubeComplex,
    /// Indexed by cube index of `complex`.
    pub cells: Vec<SmallCube>,
    /// Vertex of the subdivision at the center of each cube of `X`.
    pub center: Vec<usize>,
}

fn small_id(x: &CubeComplex, top: usize, kmask: u32, eps: u32) -> String {
    let mut s = format!("[{}", x.id(top));
    if kmask != 0 {
        s.push('|');
        for a in 0..x.cube(top).dim() {
            if bit(kmask, a) {
                s.push_str(&a.to_string());
                s.push(if bit(eps, a) { '+' } else { '-' });
            }
        }
    }
    s.push(']');
    s
}

pub fn barycentric_subdivision(x: &CubeComplex) -> Subdivision {
    let mut cubes = Vec::new();
    for (fi, f) in x.cubes().iter().enumerate() {
        let n = f.dim();
        for kmask in 0..(1u32 << n) {
            let mut eps = kmask;
            loop {
                cubes.push(small_cube(x, fi, kmask, eps));
                if eps == 0 {
                    break;
                }
                eps = (eps - 1) & kmask;
            }
        }
    }
    let desc = CubeComplexDescription {
        name: format!("{}-subdivided", x.name()),
        dim_cap: x.dim_cap(),
        cubes: cubes.iter().map(|(d, _)| d.clone()).collect(),
    };
    let complex = CubeComplex::from_description(&desc).expect("subdivision of a valid complex is valid");
    let by_id: HashMap<&str, &SmallCube> = cubes.iter().map(|(d, c)| (d.id.as_str(), c)).collect();
    let cells: Vec<SmallCube> = complex
        .cubes()
        .iter()
        .map(|c| by_id[c.id()].clone())
        .collect();
    let mut center = vec![0; x.len()];
    for (i, c) in cells.iter().enumerate() {
        if c.axes.is_empty() {
            center[c.top] = i;
        }
    }
    Subdivision {
        complex,
        cells,
        center,
    }
}

fn small_cube(x: &CubeComplex, top: usize, kmask: u32, eps: u32) -> (CubeDescription, SmallCube) {
    let f = x.cube(top);
    let axes: Vec<usize> = (0..f.dim()).filter(|&a| bit(kmask, a)).collect();
    let signs: Vec<bool> = axes.iter().map(|&a| bit(eps, a)).collect();
    let k = axes.len();
    let id = small_id(x, top, kmask, eps);
    let bottom = x.subface(top, kmask, eps).0;
    if k == 0 {
        let desc = CubeDescription {
            id: id.clone(),
            dim: 0,
            faces: vec![],
            corners: vec![id],
            face_maps: None,
        };
        return (desc, SmallCube { top, axes, signs, bottom });
    }

    let mut corners = Vec::with_capacity(1 << k);
    for u in 0..(1u32 << k) {
        let mut mask = 0u32;
        for (i, &a) in axes.iter().enumerate() {
            if bit(u, i) {
                mask |= 1 << a;
            }
        }
        let (g, _) = x.subface(top, mask, eps & mask);
        corners.push(small_id(x, g, 0, 0));
    }

    let mut faces = Vec::with_capacity(2 * k);
    let mut face_maps = Vec::with_capacity(2 * k);
    for (i, &ai) in axes.iter().enumerate() {
        // inner face: axis i pinned at the center
        faces.push(small_id(x, top, kmask & !(1 << ai), eps & !(1 << ai)));
        face_maps.push((1..k as i64).collect::<Vec<_>>());

        // outer face: lives in the face of `top` at axis ai, side ε_i
        let side = bit(eps, ai);
        let g = f.face(ai, side);
        let sigma = f.face_map(ai, side);
        let mut gk = 0u32;
        let mut geps = 0u32;
        // parent-remaining position of each face axis, keyed by face axis
        let mut slot: Vec<(usize, i64)> = Vec::new();
        for t in 0..sigma.len() {
            let (kk, flip) = sigma.target(t);
            let a = if kk < ai { kk } else { kk + 1 };
            if bit(kmask, a) {
                gk |= 1 << t;
                if bit(eps, a) ^ flip {
                    geps |= 1 << t;
                }
                let pos = axes.iter().position(|&b| b == a).unwrap();
                let rem = if pos < i { pos } else { pos - 1 };
                slot.push((t, rem as i64 + 1));
            }
        }
        slot.sort_unstable();
        faces.push(small_id(x, g, gk, geps));
        face_maps.push(slot.into_iter().map(|(_, r)| r).collect());
    }
    let identity = face_maps
        .iter()
        .all(|m| m.iter().enumerate().all(|(t, &r)| r == t as i64 + 1));
    let desc = CubeDescription {
        id,
        dim: k,
        faces,
        corners,
        face_maps: if identity { None } else { Some(face_maps) },
    };
    (desc, SmallCube { top, axes, signs, bottom })
}

#[cfg(test)]
mod tests {
    use super::super::{build, is_npc};
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(barycentric_subdivision(&build::standard_cube(0)).complex.counts(), vec![1]);
        assert_eq!(barycentric_subdivision(&build::standard_cube(1)).complex.counts(), vec![3, 2]);
        assert_eq!(
            barycentric_subdivision(&build::standard_cube(2)).complex.counts(),
            vec![9, 12, 4]
        );
        assert_eq!(
            barycentric_subdivision(&build::standard_cube(3)).complex.counts(),
            vec![27, 54, 36, 8]
        );
    }

    #[test]
    fn torus_and_klein_subdivide_to_npc() {
        for x in [build::torus(), build::klein_bottle()] {
            let s = barycentric_subdivision(&x);
            assert_eq!(s.complex.counts(), vec![4, 8, 4]);
            assert!(is_npc(&s.complex).is_npc);
        }
    }

    #[test]
    fn centers_are_vertices() {
        let x = build::standard_cube(2);
        let s = barycentric_subdivision(&x);
        for (i, &c) in s.center.iter().enumerate() {
            assert_eq!(s.cells[c].top, i);
            assert_eq!(s.complex.cube(c).dim(), 0);
        }
    }
}
