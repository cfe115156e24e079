//! Built-in example inputs, emitted as canonical JSON files.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::complex::{build, CubeComplex, CubicalMap};
use crate::cusped::{GroupSpec, PeripheralSpec};
use crate::gog::{GogEdge, GogVertex, GraphOfGroups, HierarchyLedger, PortalRecord, PortalSide, Presentation, Triplet};
use crate::group::Group;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown corpus item `{0}`")]
    UnknownCorpusItem(String),
}

pub struct CorpusItem {
    pub name: &'static str,
    pub description: &'static str,
}

const ITEMS: &[CorpusItem] = &[
    CorpusItem { name: "cube1", description: "the unit interval" },
    CorpusItem { name: "cube2", description: "the unit square with all faces" },
    CorpusItem { name: "cube3", description: "the unit 3-cube with all faces" },
    CorpusItem { name: "cube3-skeleton", description: "boundary of the 3-cube (not NPC)" },
    CorpusItem { name: "torus", description: "one-square torus" },
    CorpusItem { name: "klein", description: "one-square Klein bottle" },
    CorpusItem { name: "self-crossing", description: "square with all sides on one loop" },
    CorpusItem { name: "cycle3", description: "3-cycle graph" },
    CorpusItem { name: "wedge2", description: "wedge of two loops" },
    CorpusItem { name: "wedge3", description: "wedge of three loops" },
    CorpusItem { name: "grid2x2", description: "2 x 2 grid patch" },
    CorpusItem { name: "grid3x1", description: "3 x 1 grid patch" },
    CorpusItem { name: "hexagon-pair", description: "an edge into the 3-cycle: A.json, B.json, f.json" },
    CorpusItem { name: "ledger-balanced", description: "balanced hierarchy ledger" },
    CorpusItem { name: "ledger-unbalanced", description: "unbalanced hierarchy ledger" },
    CorpusItem { name: "gog-free-product", description: "graph of groups for Z/2 * Z/3" },
    CorpusItem { name: "gog-abelian-loop", description: "HNN loop presenting Z^2" },
    CorpusItem { name: "cusped-z3", description: "Z/3 relative to itself" },
    CorpusItem { name: "cusped-z", description: "Z relative to itself" },
];

pub fn items() -> &'static [CorpusItem] {
    ITEMS
}

/// The complex items, by name.
pub fn complex(name: &str) -> Result<CubeComplex, CorpusError> {
    Ok(match name {
        "cube1" => build::standard_cube(1),
        "cube2" => build::standard_cube(2),
        "cube3" => build::standard_cube(3),
        "cube3-skeleton" => build::cube_two_skeleton(),
        "torus" => build::torus(),
        "klein" => build::klein_bottle(),
        "self-crossing" => build::self_crossing_square(),
        "cycle3" => build::cycle(3),
        "wedge2" => build::wedge_of_loops(2),
        "wedge3" => build::wedge_of_loops(3),
        "grid2x2" => build::grid(2, 2),
        "grid3x1" => build::grid(3, 1),
        _ => return Err(CorpusError::UnknownCorpusItem(name.to_string())),
    })
}

pub fn complexes() -> Vec<(&'static str, CubeComplex)> {
    ITEMS
        .iter()
        .filter_map(|i| complex(i.name).ok().map(|c| (i.name, c)))
        .collect()
}

/// An edge `e: a0 → a1` included into the 3-cycle as `e0`.
pub fn hexagon_pair() -> CubicalMap {
    let a = build::graph("A", &["a0", "a1"], &[("e", "a0", "a1")]).expect("edge");
    let b = build::cycle(3).renamed("B");
    let images = ["a0", "a1", "e"]
        .iter()
        .zip(["v0", "v1", "e0"])
        .map(|(s, t)| (a.index_of(s).unwrap(), b.index_of(t).unwrap()))
        .collect::<BTreeMap<_, _>>()
        .into_values()
        .collect();
    CubicalMap::infer(Arc::new(a), Arc::new(b), images, &[]).expect("edge into cycle")
}

fn portal(id: &str, owner: &str, side: PortalSide, size: u64, k: u64) -> PortalRecord {
    PortalRecord {
        id: id.into(),
        owner: owner.into(),
        class: "c0".into(),
        side,
        size,
        stabilizer_index: k,
        orbits: 1,
        modified_size: Some(size * k),
    }
}

pub fn ledger_balanced() -> HierarchyLedger {
    HierarchyLedger {
        triplets: vec![
            Triplet { id: "Z0".into(), weight: 1, index: 2 },
            Triplet { id: "Z1".into(), weight: 1, index: 2 },
        ],
        classes: vec!["c0".into()],
        portals: vec![
            portal("P0", "Z0", PortalSide::Plus, 2, 1),
            portal("P1", "Z1", PortalSide::Minus, 1, 2),
            portal("P2", "Z1", PortalSide::Minus, 1, 2),
        ],
    }
}

pub fn ledger_unbalanced() -> HierarchyLedger {
    HierarchyLedger {
        triplets: vec![Triplet { id: "Z0".into(), weight: 1, index: 1 }],
        classes: vec!["c0".into()],
        portals: vec![
            portal("P0", "Z0", PortalSide::Plus, 2, 1),
            portal("P1", "Z0", PortalSide::Minus, 3, 1),
        ],
    }
}

fn presentation(gens: &[&str], rels: &[&str]) -> Presentation {
    Presentation::new(gens, rels).expect("valid presentation")
}

pub fn gog_free_product() -> GraphOfGroups {
    GraphOfGroups {
        vertices: vec![
            GogVertex { id: "u".into(), group: presentation(&["x"], &["x^2"]) },
            GogVertex { id: "w".into(), group: presentation(&["y"], &["y^3"]) },
        ],
        edges: vec![GogEdge {
            id: "e".into(),
            origin: "u".into(),
            terminus: "w".into(),
            group: Presentation::default(),
            psi: BTreeMap::new(),
            psi_bar: BTreeMap::new(),
        }],
    }
}

pub fn gog_abelian_loop() -> GraphOfGroups {
    let x: crate::gog::Word = "x".parse().expect("word");
    GraphOfGroups {
        vertices: vec![GogVertex { id: "v".into(), group: presentation(&["x"], &[]) }],
        edges: vec![GogEdge {
            id: "e".into(),
            origin: "v".into(),
            terminus: "v".into(),
            group: presentation(&["z"], &[]),
            psi: BTreeMap::from([("z".to_string(), x.clone())]),
            psi_bar: BTreeMap::from([("z".to_string(), x)]),
        }],
    }
}

pub fn cusped_z3() -> GroupSpec {
    GroupSpec {
        group: Group::Cyclic { order: 3 },
        peripherals: vec![PeripheralSpec { generators: vec!["t".into(), "t^2".into()], cosets: None }],
    }
}

pub fn cusped_z() -> GroupSpec {
    GroupSpec {
        group: Group::integers(),
        peripherals: vec![PeripheralSpec { generators: vec!["1".into(), "-1".into()], cosets: None }],
    }
}

fn pretty<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable")
}

/// The files of an item as `(file name, contents)`.
pub fn emit(name: &str) -> Result<Vec<(String, String)>, CorpusError> {
    let one = |body: String| vec![(format!("{name}.json"), body + "\n")];
    Ok(match name {
        "hexagon-pair" => {
            let f = hexagon_pair();
            vec![
                ("A.json".into(), f.domain().to_json() + "\n"),
                ("B.json".into(), f.codomain().to_json() + "\n"),
                ("f.json".into(), f.to_json() + "\n"),
            ]
        }
        "ledger-balanced" => one(pretty(&ledger_balanced())),
        "ledger-unbalanced" => one(pretty(&ledger_unbalanced())),
        "gog-free-product" => one(pretty(&gog_free_product())),
        "gog-abelian-loop" => one(pretty(&gog_abelian_loop())),
        "cusped-z3" => one(pretty(&cusped_z3())),
        "cusped-z" => one(pretty(&cusped_z())),
        _ => one(complex(name)?.to_json()),
    })
}
