//! Cellular maps between cube complexes.
//!
//! Each domain cube `C` has an image cube `f(C)` and an alignment: for every
//! axis of `C` either the axis of `f(C)` it maps onto (and whether it is
//! reversed) or `None` when the axis is collapsed. The image corner of corner
//! `x` is then determined, and faces must map to the matching faces (or, for
//! a collapsed axis, to the image cube itself).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::link::{all_links, LinkVertex, VertexLink};
use super::{bit, AxisMap, ComplexError, CubeComplex};

pub type Alignment = Vec<Option<(usize, bool)>>;

/// File form of a map. `alignments` entries are `±(k+1)` for an axis mapped
/// onto image axis `k` and `0` for a collapsed axis; when omitted they are
/// inferred from corners and faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDescription {
    pub domain: String,
    pub codomain: String,
    pub cube_images: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub collapses: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alignments: Option<BTreeMap<String, Vec<i64>>>,
}

#[derive(Clone, Debug)]
pub struct CubicalMap {
    domain: Arc<CubeComplex>,
    codomain: Arc<CubeComplex>,
    images: Vec<usize>,
    alignments: Vec<Alignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkWitness {
    /// Two link vertices at `vertex` with the same image.
    Collision {
        vertex: String,
        first: String,
        second: String,
    },
    /// A codomain link simplex on image vertices that is not an image.
    MissingSimplex { vertex: String, simplex: Vec<String> },
    /// A codomain link vertex outside the image.
    NotSurjective { vertex: String, missing: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalIsometryVerdict {
    pub is_local_isometry: bool,
    pub witness: Option<LinkWitness>,
}

fn alignment_apply(al: &Alignment, x: u32) -> u32 {
    let mut y = 0;
    for (i, t) in al.iter().enumerate() {
        if let Some((k, flip)) = *t {
            if bit(x, i) ^ flip {
                y |= 1 << k;
            }
        }
    }
    y
}

impl CubicalMap {
    /// Builds and verifies a map with explicit alignments.
    pub fn new(
        domain: Arc<CubeComplex>,
        codomain: Arc<CubeComplex>,
        images: Vec<usize>,
        alignments: Vec<Alignment>,
    ) -> Result<Self, ComplexError> {
        let m = CubicalMap {
            domain,
            codomain,
            images,
            alignments,
        };
        m.check()?;
        Ok(m)
    }

    /// Builds a map from cube images, inferring alignments. `collapsed`
    /// optionally fixes the collapsed axes per domain cube (bit mask).
    pub fn infer(
        domain: Arc<CubeComplex>,
        codomain: Arc<CubeComplex>,
        images: Vec<usize>,
        collapsed: &[Option<u32>],
    ) -> Result<Self, ComplexError> {
        if images.len() != domain.len() {
            return Err(ComplexError::InvalidMap("image list has the wrong length".into()));
        }
        let mut assigned: Vec<Option<Alignment>> = vec![None; domain.len()];
        let mut order: Vec<usize> = (0..domain.len()).collect();
        order.sort_by_key(|&c| std::cmp::Reverse(domain.cube(c).dim()));
        let mut m = CubicalMap {
            domain: domain.clone(),
            codomain,
            images,
            alignments: vec![Vec::new(); domain.len()],
        };
        for c in order {
            if assigned[c].is_some() {
                continue;
            }
            let d = domain.cube(c).dim();
            let dd = m.codomain.cube(m.images[c]).dim();
            if dd > d {
                return Err(ComplexError::InvalidMap(format!(
                    "cube `{}` maps to a cube of higher dimension",
                    domain.id(c)
                )));
            }
            let mut chosen = None;
            'cands: for cand in candidate_alignments(d, dd, collapsed.get(c).copied().flatten()) {
                if !m.corners_ok(c, &cand) {
                    continue;
                }
                let mut pending: HashMap<usize, Alignment> = HashMap::new();
                pending.insert(c, cand.clone());
                let mut stack = vec![c];
                while let Some(k) = stack.pop() {
                    let al = pending[&k].clone();
                    let kd = domain.cube(k).dim();
                    for i in 0..kd {
                        for s in [false, true] {
                            let (img, fal) = m.induced_face(k, &al, i, s);
                            let face = domain.cube(k).face(i, s);
                            if img != m.images[face] {
                                continue 'cands;
                            }
                            if let Some(prev) = assigned[face].as_ref().or(pending.get(&face)) {
                                if *prev != fal {
                                    continue 'cands;
                                }
                            } else {
                                pending.insert(face, fal);
                                stack.push(face);
                            }
                        }
                    }
                }
                chosen = Some(pending);
                break;
            }
            match chosen {
                Some(p) => {
                    for (k, al) in p {
                        assigned[k] = Some(al);
                    }
                }
                None => {
                    return Err(ComplexError::InvalidMap(format!(
                        "no consistent alignment for cube `{}`",
                        domain.id(c)
                    )))
                }
            }
        }
        m.alignments = assigned.into_iter().map(|a| a.unwrap()).collect();
        m.check()?;
        Ok(m)
    }

    pub fn identity(x: Arc<CubeComplex>) -> Self {
        let alignments = x
            .cubes()
            .iter()
            .map(|c| (0..c.dim()).map(|i| Some((i, false))).collect())
            .collect();
        CubicalMap {
            images: (0..x.len()).collect(),
            domain: x.clone(),
            codomain: x,
            alignments,
        }
    }

    pub fn from_description(
        desc: &MapDescription,
        domain: Arc<CubeComplex>,
        codomain: Arc<CubeComplex>,
    ) -> Result<Self, ComplexError> {
        let mut images = Vec::with_capacity(domain.len());
        for c in domain.cubes() {
            let target = desc.cube_images.get(c.id()).ok_or_else(|| {
                ComplexError::InvalidMap(format!("no image for cube `{}`", c.id()))
            })?;
            images.push(
                codomain
                    .index_of(target)
                    .ok_or_else(|| ComplexError::UnknownCube(target.clone()))?,
            );
        }
        for id in desc.cube_images.keys() {
            if domain.index_of(id).is_none() {
                return Err(ComplexError::UnknownCube(id.clone()));
            }
        }
        if let Some(als) = &desc.alignments {
            let mut alignments = Vec::with_capacity(domain.len());
            for c in domain.cubes() {
                let al = match als.get(c.id()) {
                    Some(entries) => entries
                        .iter()
                        .map(|&e| {
                            if e == 0 {
                                None
                            } else {
                                Some(((e.unsigned_abs() - 1) as usize, e < 0))
                            }
                        })
                        .collect(),
                    None if c.dim() == 0 => Vec::new(),
                    None => {
                        return Err(ComplexError::InvalidMap(format!(
                            "no alignment for cube `{}`",
                            c.id()
                        )))
                    }
                };
                alignments.push(al);
            }
            return CubicalMap::new(domain, codomain, images, alignments);
        }
        let mut collapsed = vec![None; domain.len()];
        for (id, axes) in &desc.collapses {
            let c = domain
                .index_of(id)
                .ok_or_else(|| ComplexError::UnknownCube(id.clone()))?;
            let mut mask = 0u32;
            for &a in axes {
                if a >= domain.cube(c).dim() {
                    return Err(ComplexError::InvalidMap(format!(
                        "collapsed axis {a} out of range for `{id}`"
                    )));
                }
                mask |= 1 << a;
            }
            collapsed[c] = Some(mask);
        }
        CubicalMap::infer(domain, codomain, images, &collapsed)
    }

    pub fn to_description(&self) -> MapDescription {
        let mut cube_images = BTreeMap::new();
        let mut collapses = BTreeMap::new();
        let mut collapsed = Vec::with_capacity(self.domain.len());
        for (c, cube) in self.domain.cubes().iter().enumerate() {
            cube_images.insert(cube.id().to_string(), self.codomain.id(self.images[c]).to_string());
            let axes: Vec<usize> = (0..cube.dim())
                .filter(|&i| self.alignments[c][i].is_none())
                .collect();
            let mut mask = 0;
            for &a in &axes {
                mask |= 1 << a;
            }
            collapsed.push(Some(mask));
            if !axes.is_empty() {
                collapses.insert(cube.id().to_string(), axes);
            }
        }
        let reproducible = CubicalMap::infer(
            self.domain.clone(),
            self.codomain.clone(),
            self.images.clone(),
            &collapsed,
        )
        .is_ok_and(|m| m.alignments == self.alignments);
        let alignments = if reproducible {
            None
        } else {
            Some(
                self.domain
                    .cubes()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.dim() > 0)
                    .map(|(c, cube)| {
                        let entries = self.alignments[c]
                            .iter()
                            .map(|t| match *t {
                                None => 0,
                                Some((k, false)) => k as i64 + 1,
                                Some((k, true)) => -(k as i64 + 1),
                            })
                            .collect();
                        (cube.id().to_string(), entries)
                    })
                    .collect(),
            )
        };
        MapDescription {
            domain: self.domain.name().to_string(),
            codomain: self.codomain.name().to_string(),
            cube_images,
            collapses,
            alignments,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_description()).expect("serializable")
    }

    pub fn domain(&self) -> &Arc<CubeComplex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<CubeComplex> {
        &self.codomain
    }

    pub fn image(&self, c: usize) -> usize {
        self.images[c]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn alignment(&self, c: usize) -> &Alignment {
        &self.alignments[c]
    }

    /// Image of corner `x` of domain cube `c`, as a corner of `f(c)`.
    pub fn corner_image(&self, c: usize, x: u32) -> u32 {
        alignment_apply(&self.alignments[c], x)
    }

    pub fn is_dimension_preserving(&self) -> bool {
        self.alignments.iter().all(|a| a.iter().all(Option::is_some))
    }

    /// Image of a link vertex; `None` when the edge is collapsed.
    pub fn link_vertex_image(&self, lv: LinkVertex) -> Option<LinkVertex> {
        self.alignments[lv.edge][0].map(|(_, flip)| LinkVertex {
            edge: self.images[lv.edge],
            end: lv.end ^ flip,
        })
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &CubicalMap) -> Result<CubicalMap, ComplexError> {
        if !Arc::ptr_eq(&self.codomain, &g.domain) && self.codomain.to_json() != g.domain.to_json() {
            return Err(ComplexError::InvalidMap("maps are not composable".into()));
        }
        let images = self.images.iter().map(|&d| g.images[d]).collect();
        let alignments = self
            .alignments
            .iter()
            .enumerate()
            .map(|(c, al)| {
                let gal = &g.alignments[self.images[c]];
                al.iter()
                    .map(|t| t.and_then(|(k, f1)| gal[k].map(|(q, f2)| (q, f1 ^ f2))))
                    .collect()
            })
            .collect();
        CubicalMap::new(self.domain.clone(), g.codomain.clone(), images, alignments)
    }

    fn corners_ok(&self, c: usize, al: &Alignment) -> bool {
        let cube = self.domain.cube(c);
        let img = self.codomain.cube(self.images[c]);
        (0..(1u32 << cube.dim())).all(|x| {
            img.corner(alignment_apply(al, x)) == self.images[cube.corner(x)]
        })
    }

    /// Image cube and alignment that face `(i, s)` of `c` must have, given
    /// alignment `al` on `c`.
    fn induced_face(&self, c: usize, al: &Alignment, i: usize, s: bool) -> (usize, Alignment) {
        let cube = self.domain.cube(c);
        let sigma = cube.face_map(i, s);
        let d_img = self.images[c];
        let parent_axis = |t: usize| {
            let (k, phi) = sigma.target(t);
            (if k < i { k } else { k + 1 }, phi)
        };
        match al[i] {
            None => {
                let fal = (0..sigma.len())
                    .map(|t| {
                        let (a, phi) = parent_axis(t);
                        al[a].map(|(q, psi)| (q, psi ^ phi))
                    })
                    .collect();
                (d_img, fal)
            }
            Some((q, psi)) => {
                let side = s ^ psi;
                let (g, phi_g) = self.codomain.subface(d_img, 1 << q, (side as u32) << q);
                let mut back: HashMap<usize, (usize, bool)> = HashMap::new();
                for (gx, &(qq, chi)) in phi_g.targets().iter().enumerate() {
                    back.insert(qq, (gx, chi));
                }
                let fal = (0..sigma.len())
                    .map(|t| {
                        let (a, phi) = parent_axis(t);
                        al[a].map(|(qq, psi2)| {
                            let (gx, chi) = back[&qq];
                            (gx, phi ^ psi2 ^ chi)
                        })
                    })
                    .collect();
                (g, fal)
            }
        }
    }

    fn check(&self) -> Result<(), ComplexError> {
        let bad = |msg: String| Err(ComplexError::InvalidMap(msg));
        if self.images.len() != self.domain.len() || self.alignments.len() != self.domain.len() {
            return bad("image list has the wrong length".into());
        }
        for (c, cube) in self.domain.cubes().iter().enumerate() {
            let al = &self.alignments[c];
            let img = self.images[c];
            if img >= self.codomain.len() {
                return bad(format!("image of `{}` out of range", cube.id()));
            }
            let dd = self.codomain.cube(img).dim();
            if al.len() != cube.dim() {
                return bad(format!("alignment of `{}` has the wrong length", cube.id()));
            }
            let hit: BTreeSet<usize> = al.iter().flatten().map(|&(k, _)| k).collect();
            if hit.len() != dd || al.iter().flatten().count() != dd || hit.iter().any(|&k| k >= dd) {
                return bad(format!(
                    "alignment of `{}` is not onto the axes of `{}`",
                    cube.id(),
                    self.codomain.id(img)
                ));
            }
            if !self.corners_ok(c, al) {
                return bad(format!("corner images of `{}` are inconsistent", cube.id()));
            }
            for i in 0..cube.dim() {
                for s in [false, true] {
                    let face = cube.face(i, s);
                    let (g, fal) = self.induced_face(c, al, i, s);
                    if g != self.images[face] || fal != self.alignments[face] {
                        return bad(format!(
                            "face {} of `{}` does not map to the matching face of `{}`",
                            2 * i + s as usize,
                            cube.id(),
                            self.codomain.id(img)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Link injectivity and fullness at every domain vertex.
    pub fn is_local_isometry(&self) -> Result<LocalIsometryVerdict, ComplexError> {
        if !self.is_dimension_preserving() {
            let c = self
                .alignments
                .iter()
                .position(|a| a.iter().any(Option::is_none))
                .unwrap();
            return Err(ComplexError::NotDimensionPreserving(self.domain.id(c).to_string()));
        }
        let dl = all_links(&self.domain);
        let cl = all_links(&self.codomain);
        for (v, l) in &dl {
            if let Some(w) = self.link_defect(*v, l, &cl[&self.images[*v]], false) {
                return Ok(LocalIsometryVerdict {
                    is_local_isometry: false,
                    witness: Some(w),
                });
            }
        }
        Ok(LocalIsometryVerdict {
            is_local_isometry: true,
            witness: None,
        })
    }

    /// Link map bijectivity (vertices and simplices) at every domain vertex.
    pub fn local_bijection_defect(&self) -> Result<Option<LinkWitness>, ComplexError> {
        if !self.is_dimension_preserving() {
            let c = self
                .alignments
                .iter()
                .position(|a| a.iter().any(Option::is_none))
                .unwrap();
            return Err(ComplexError::NotDimensionPreserving(self.domain.id(c).to_string()));
        }
        let dl = all_links(&self.domain);
        let cl = all_links(&self.codomain);
        for (v, l) in &dl {
            if let Some(w) = self.link_defect(*v, l, &cl[&self.images[*v]], true) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    fn link_defect(
        &self,
        v: usize,
        dlink: &VertexLink,
        clink: &VertexLink,
        surjective: bool,
    ) -> Option<LinkWitness> {
        let vid = self.domain.id(v).to_string();
        let mut pre: BTreeMap<LinkVertex, LinkVertex> = BTreeMap::new();
        for &lv in &dlink.link_vertices {
            let im = self.link_vertex_image(lv).expect("dimension preserving");
            if let Some(prev) = pre.insert(im, lv) {
                return Some(LinkWitness::Collision {
                    vertex: vid,
                    first: prev.label(&self.domain),
                    second: lv.label(&self.domain),
                });
            }
        }
        if surjective {
            for &cv in &clink.link_vertices {
                if !pre.contains_key(&cv) {
                    return Some(LinkWitness::NotSurjective {
                        vertex: vid,
                        missing: cv.label(&self.codomain),
                    });
                }
            }
        }
        let dsets = dlink.simplex_sets();
        for s in clink.simplex_sets() {
            if !s.iter().all(|w| pre.contains_key(w)) {
                continue;
            }
            let mut back: Vec<LinkVertex> = s.iter().map(|w| pre[w]).collect();
            back.sort_unstable();
            if !dsets.contains(&back) {
                return Some(LinkWitness::MissingSimplex {
                    vertex: vid,
                    simplex: s.iter().map(|w| w.label(&self.codomain)).collect(),
                });
            }
        }
        None
    }
}

/// Alignments from a `d`-cube onto a `dd`-cube, identity-like ones first.
fn candidate_alignments(d: usize, dd: usize, collapsed: Option<u32>) -> Vec<Alignment> {
    let mut out = Vec::new();
    if dd > d {
        return out;
    }
    let masks: Vec<u32> = match collapsed {
        Some(m) => vec![m],
        None => (0..(1u32 << d))
            .filter(|m| m.count_ones() as usize == d - dd)
            .collect(),
    };
    let perms = AxisMap::all(dd);
    for mask in masks {
        if mask.count_ones() as usize != d - dd {
            continue;
        }
        let kept: Vec<usize> = (0..d).filter(|&i| !bit(mask, i)).collect();
        for p in &perms {
            let mut al = vec![None; d];
            for (j, &a) in kept.iter().enumerate() {
                al[a] = Some(p.target(j));
            }
            out.push(al);
        }
    }
    out
}
