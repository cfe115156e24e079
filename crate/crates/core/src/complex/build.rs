//! Constructors for standard complexes.

use super::{ComplexError, CubeComplex, CubeComplexDescription, CubeDescription, DEFAULT_DIM_CAP};

/// Incremental builder over a [`CubeComplexDescription`].
#[derive(Clone, Debug)]
pub struct Builder {
    desc: CubeComplexDescription,
}

impl Builder {
    pub fn new(name: &str) -> Self {
        Builder {
            desc: CubeComplexDescription {
                name: name.to_string(),
                dim_cap: DEFAULT_DIM_CAP,
                cubes: Vec::new(),
            },
        }
    }

    pub fn dim_cap(mut self, cap: usize) -> Self {
        self.desc.dim_cap = cap;
        self
    }

    pub fn vertex(mut self, id: &str) -> Self {
        self.push_vertex(id);
        self
    }

    pub fn edge(mut self, id: &str, from: &str, to: &str) -> Self {
        self.push_cube(id, &[from, to], &[from, to], None);
        self
    }

    pub fn cube(mut self, id: &str, faces: &[&str], corners: &[&str]) -> Self {
        self.push_cube(id, faces, corners, None);
        self
    }

    pub fn cube_with_maps(
        mut self,
        id: &str,
        faces: &[&str],
        corners: &[&str],
        face_maps: Vec<Vec<i64>>,
    ) -> Self {
        self.push_cube(id, faces, corners, Some(face_maps));
        self
    }

    pub fn push_vertex(&mut self, id: &str) {
        self.desc.cubes.push(CubeDescription {
            id: id.to_string(),
            dim: 0,
            faces: vec![],
            corners: vec![id.to_string()],
            face_maps: None,
        });
    }

    /// Pushes a cube of dimension `log2(corners.len())`. For an edge the
    /// faces are its two endpoints.
    pub fn push_cube(
        &mut self,
        id: &str,
        faces: &[&str],
        corners: &[&str],
        face_maps: Option<Vec<Vec<i64>>>,
    ) {
        let dim = corners.len().trailing_zeros() as usize;
        self.desc.cubes.push(CubeDescription {
            id: id.to_string(),
            dim,
            faces: faces.iter().map(|s| s.to_string()).collect(),
            corners: corners.iter().map(|s| s.to_string()).collect(),
            face_maps,
        });
    }

    pub fn description(&self) -> &CubeComplexDescription {
        &self.desc
    }

    pub fn build(self) -> Result<CubeComplex, ComplexError> {
        CubeComplex::from_description(&self.desc)
    }
}

const DIM_PREFIX: [char; 5] = ['v', 'e', 's', 'c', 'h'];

fn face_id(n: usize, mask: u32, values: u32) -> String {
    let free = n - mask.count_ones() as usize;
    let mut s = String::new();
    s.push(*DIM_PREFIX.get(free).unwrap_or(&'q'));
    for i in 0..n {
        s.push(if mask >> i & 1 == 0 {
            '*'
        } else if values >> i & 1 == 1 {
            '1'
        } else {
            '0'
        });
    }
    if free == 0 {
        s.retain(|c| c != '*');
    }
    s
}

/// The faces of `[0,1]^n` accepted by `keep`, as a complex. Face ids encode
/// fixed coordinates (`v01`, `e*1`, `s**`, …).
pub fn standard_cube_filtered(
    name: &str,
    n: usize,
    keep: impl Fn(u32, u32) -> bool,
) -> CubeComplex {
    let mut b = Builder::new(name).dim_cap(n.max(DEFAULT_DIM_CAP));
    let full = (1u32 << n) - 1;
    for fixed in 0..=full {
        let free_mask = full & !fixed;
        // iterate over sub-masks of `fixed` as values
        let mut values = fixed;
        loop {
            if keep(fixed, values) {
                let id = face_id(n, fixed, values);
                let free: Vec<usize> = (0..n).filter(|i| free_mask >> i & 1 == 1).collect();
                if free.is_empty() {
                    b.push_vertex(&id);
                } else {
                    let mut faces = Vec::new();
                    for &a in &free {
                        for s in [0u32, 1] {
                            faces.push(face_id(n, fixed | 1 << a, values | s << a));
                        }
                    }
                    let mut corners = Vec::new();
                    for x in 0..(1u32 << free.len()) {
                        let mut v = values;
                        for (k, &a) in free.iter().enumerate() {
                            v |= (x >> k & 1) << a;
                        }
                        corners.push(face_id(n, full, v));
                    }
                    let faces: Vec<&str> = faces.iter().map(String::as_str).collect();
                    let corners: Vec<&str> = corners.iter().map(String::as_str).collect();
                    b.push_cube(&id, &faces, &corners, None);
                }
            }
            if values == 0 {
                break;
            }
            values = (values - 1) & fixed;
        }
    }
    b.build().expect("standard cube faces are consistent")
}

/// `[0,1]^n` with all its faces.
pub fn standard_cube(n: usize) -> CubeComplex {
    standard_cube_filtered(&format!("cube{n}"), n, |_, _| true)
}

/// The 3-cube with the solid cube removed (six squares).
pub fn cube_two_skeleton() -> CubeComplex {
    standard_cube_filtered("cube3-skeleton", 3, |fixed, _| fixed != 0)
}

/// Three squares of a 3-cube meeting at `v000`, with no solid cube.
pub fn cube_corner() -> CubeComplex {
    standard_cube_filtered("cube-corner", 3, |fixed, values| {
        // keep faces lying in some coordinate plane through the origin
        fixed != 0 && (0..3).any(|i| fixed >> i & 1 == 1 && values >> i & 1 == 0)
    })
}

/// One vertex, loops `a`, `b`, one square glued along `a b a⁻¹ b⁻¹`.
pub fn torus() -> CubeComplex {
    Builder::new("torus")
        .vertex("v")
        .edge("a", "v", "v")
        .edge("b", "v", "v")
        .cube("s", &["b", "b", "a", "a"], &["v"; 4])
        .build()
        .expect("torus is consistent")
}

/// Like the torus, but the top side is glued to `a` reversed.
pub fn klein_bottle() -> CubeComplex {
    Builder::new("klein")
        .vertex("v")
        .edge("a", "v", "v")
        .edge("b", "v", "v")
        .cube_with_maps(
            "s",
            &["b", "b", "a", "a"],
            &["v"; 4],
            vec![vec![1], vec![1], vec![1], vec![-1]],
        )
        .build()
        .expect("klein bottle is consistent")
}

/// A square whose four sides are all glued to one loop, so both of its
/// midcubes lie in one wall.
pub fn self_crossing_square() -> CubeComplex {
    Builder::new("self-crossing")
        .vertex("v")
        .edge("e", "v", "v")
        .cube_with_maps(
            "s",
            &["e", "e", "e", "e"],
            &["v"; 4],
            vec![vec![1], vec![-1], vec![-1], vec![1]],
        )
        .build()
        .expect("self-crossing square is consistent")
}

/// A graph from vertex ids and `(edge id, from, to)` triples.
pub fn graph(name: &str, vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<CubeComplex, ComplexError> {
    let mut b = Builder::new(name);
    for v in vertices {
        b.push_vertex(v);
    }
    for (e, u, w) in edges {
        b.push_cube(e, &[u, w], &[u, w], None);
    }
    b.build()
}

fn owned_graph(name: &str, vertices: Vec<String>, edges: Vec<(String, String, String)>) -> CubeComplex {
    let vs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let es: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(e, u, w)| (e.as_str(), u.as_str(), w.as_str()))
        .collect();
    graph(name, &vs, &es).expect("generated graph is consistent")
}

/// Cycle graph with vertices `v0..v{n-1}` and edges `e{i}: v{i} → v{i+1}`.
pub fn cycle(n: usize) -> CubeComplex {
    assert!(n >= 1);
    owned_graph(
        &format!("cycle{n}"),
        (0..n).map(|i| format!("v{i}")).collect(),
        (0..n)
            .map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", (i + 1) % n)))
            .collect(),
    )
}

/// Path graph with `n` edges.
pub fn path(n: usize) -> CubeComplex {
    owned_graph(
        &format!("path{n}"),
        (0..=n).map(|i| format!("v{i}")).collect(),
        (0..n)
            .map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", i + 1)))
            .collect(),
    )
}

/// One vertex `v` with `k` loops `l0..l{k-1}`.
pub fn wedge_of_loops(k: usize) -> CubeComplex {
    owned_graph(
        &format!("wedge{k}"),
        vec!["v".into()],
        (0..k)
            .map(|i| (format!("l{i}"), "v".into(), "v".into()))
            .collect(),
    )
}

/// A planar `m × n` grid of squares. Vertex `p{i}_{j}` sits at `(i, j)`;
/// `h{i}_{j}` runs from `(i,j)` to `(i+1,j)` and `u{i}_{j}` to `(i,j+1)`.
pub fn grid(m: usize, n: usize) -> CubeComplex {
    let p = |i: usize, j: usize| format!("p{i}_{j}");
    let mut b = Builder::new(&format!("grid{m}x{n}"));
    for i in 0..=m {
        for j in 0..=n {
            b.push_vertex(&p(i, j));
        }
    }
    for i in 0..=m {
        for j in 0..=n {
            if i < m {
                let (u, w) = (p(i, j), p(i + 1, j));
                b.push_cube(&format!("h{i}_{j}"), &[&u, &w], &[&u, &w], None);
            }
            if j < n {
                let (u, w) = (p(i, j), p(i, j + 1));
                b.push_cube(&format!("u{i}_{j}"), &[&u, &w], &[&u, &w], None);
            }
        }
    }
    for i in 0..m {
        for j in 0..n {
            let faces = [
                format!("u{i}_{j}"),
                format!("u{}_{j}", i + 1),
                format!("h{i}_{j}"),
                format!("h{i}_{}", j + 1),
            ];
            let corners = [p(i, j), p(i + 1, j), p(i, j + 1), p(i + 1, j + 1)];
            let faces: Vec<&str> = faces.iter().map(String::as_str).collect();
            let corners: Vec<&str> = corners.iter().map(String::as_str).collect();
            b.push_cube(&format!("s{i}_{j}"), &faces, &corners, None);
        }
    }
    b.build().expect("grid is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_cube_counts() {
        assert_eq!(standard_cube(0).counts(), vec![1]);
        assert_eq!(standard_cube(1).counts(), vec![2, 1]);
        assert_eq!(standard_cube(3).counts(), vec![8, 12, 6, 1]);
        assert_eq!(cube_two_skeleton().counts(), vec![8, 12, 6]);
        assert_eq!(cube_corner().counts(), vec![7, 9, 3]);
    }

    #[test]
    fn grid_counts() {
        assert_eq!(grid(2, 3).counts(), vec![12, 17, 6]);
    }

    #[test]
    fn graphs() {
        assert_eq!(cycle(3).counts(), vec![3, 3]);
        assert_eq!(path(2).counts(), vec![3, 2]);
        assert_eq!(wedge_of_loops(2).counts(), vec![1, 2]);
    }
}
