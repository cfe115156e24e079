use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use cubetool_core::complex::{barycentric_subdivision, is_npc, CubeComplex, CubicalMap};
use cubetool_core::completion::{
    canonical_completion, first_disagreement, functorial_map, functoriality_conditions, verify_covering, MapSquare,
};
use cubetool_core::corpus;
use cubetool_core::cusped::{build_cusped_ball, slim_probe, CuspedEdgeKind, GroupSpec};
use cubetool_core::geometry::{universal_cover_ball, Side, WallGeometry};
use cubetool_core::gog::{
    class_balances, homology_rank, pi1_presentation, portal_matching, size_identities, virtual_modify,
    GraphOfGroups, HierarchyLedger,
};
use cubetool_core::hyperplanes::{crossings, pathologies, sidedness, walls};
use cubetool_core::wallgraph::{greedy_color, is_proper, wall_graph};

use crate::io::{pretty, write, Inputs};
use crate::{CliError, Command, CorpusCommand, GogCommand, Outcome};

pub const DEFAULT_SEED: u64 = 7;

fn positive(payload: Value) -> Result<Outcome, CliError> {
    Ok(Outcome {
        positive: true,
        payload,
    })
}

fn vertex(x: &CubeComplex, id: &str) -> Result<usize, CliError> {
    Ok(x.vertex(id)?)
}

pub fn run(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    match cmd {
        Command::CheckNpc { complex } => {
            let x = inputs.complex(complex)?;
            let v = is_npc(&x);
            Ok(Outcome {
                positive: v.is_npc,
                payload: serde_json::to_value(&v).expect("serializable"),
            })
        }
        Command::Subdivide { complex, out } => {
            let x = inputs.complex(complex)?;
            let sub = barycentric_subdivision(&x);
            if let Some(out) = out {
                write(out, &(sub.complex.to_json() + "\n"))?;
            }
            positive(json!({ "counts": sub.complex.counts() }))
        }
        Command::Hyperplanes { complex, dot } => hyperplanes(inputs, complex, dot.as_deref()),
        Command::Special { complex } => {
            let x = inputs.complex(complex)?;
            let r = pathologies(&x);
            Ok(Outcome {
                positive: r.special,
                payload: serde_json::to_value(&r).expect("serializable"),
            })
        }
        Command::CoverBall {
            complex,
            base,
            radius,
            out,
        } => {
            let x = inputs.complex(complex)?;
            let ball = universal_cover_ball(&x, base, *radius)?;
            if let Some(out) = out {
                write(out, &(ball.total.to_json() + "\n"))?;
            }
            positive(json!({
                "basepoint": ball.total.id(ball.basepoint),
                "radius": ball.radius,
                "counts": ball.total.counts(),
                "interior_vertices": ball.interior().len(),
            }))
        }
        Command::Gate {
            ball,
            region,
            vertex: v,
            budget,
        } => gate(inputs, ball, region, v, *budget),
        Command::WallGraph {
            complex,
            r,
            color,
            dot,
            json: json_out,
        } => {
            let x = inputs.complex(complex)?;
            let g = wall_graph(&x, *r);
            let coloring = color.then(|| greedy_color(&g));
            let proper = coloring.as_ref().is_none_or(|c| is_proper(&g, c));
            if let Some(dot) = dot {
                write(dot, &g.to_dot(coloring.as_ref()))?;
            }
            if let Some(path) = json_out {
                write(path, &pretty(&json!({ "graph": g, "coloring": coloring })))?;
            }
            Ok(Outcome {
                positive: proper,
                payload: json!({
                    "walls": g.vertices,
                    "edges": g.edges().len(),
                    "max_degree": g.max_degree,
                    "colors_used": coloring.as_ref().map(|c| c.iter().collect::<std::collections::BTreeSet<_>>().len()),
                    "proper": proper,
                }),
            })
        }
        Command::Complete { map, out, emit } => complete(inputs, map, out.as_deref(), emit.as_deref()),
        Command::Functorial { square, out } => functorial(inputs, square, out.as_deref()),
        Command::Cusped {
            group,
            rho,
            depth,
            probe,
            samples,
            seed,
            budget,
            out,
        } => {
            let spec: GroupSpec = inputs.json(group)?;
            let ball = build_cusped_ball(&spec, *rho, *depth, *budget)?;
            if let Some(out) = out {
                write(out, &pretty(&ball))?;
            }
            let slim = if *probe {
                Some(slim_probe(&ball.graph(), *samples, *seed)?)
            } else {
                None
            };
            positive(json!({
                "vertices": ball.vertices.len(),
                "cayley_edges": ball.count(CuspedEdgeKind::Cayley),
                "vertical_edges": ball.count(CuspedEdgeKind::Vertical),
                "horizontal_edges": ball.count(CuspedEdgeKind::Horizontal),
                "horoballs": ball.horoballs.len(),
                "doubling": ball.doubling,
                "seed": seed,
                "slim": slim,
            }))
        }
        Command::Gog {
            command:
                GogCommand::Pi1 {
                    gog,
                    base,
                    tree,
                    simplify,
                    out,
                },
        } => {
            let text = inputs.read(gog)?;
            let g = GraphOfGroups::from_json(&text).map_err(|e| CliError::Parse(gog.display().to_string(), e.to_string()))?;
            let warnings = g.validate()?;
            let tree: Vec<String> = tree.iter().filter(|t| !t.is_empty()).cloned().collect();
            let mut p = pi1_presentation(&g, base, &tree)?;
            if *simplify {
                p = p.eliminate_trivial_generators();
            }
            if let Some(out) = out {
                write(out, &pretty(&p))?;
            }
            positive(json!({
                "presentation": p.to_string(),
                "generators": p.generators,
                "relators": p.relators,
                "homology_rank": homology_rank(&p),
                "warnings": warnings,
            }))
        }
        Command::GluingCheck { ledger, modify, out } => {
            let text = inputs.read(ledger)?;
            let mut l = HierarchyLedger::from_json(&text)?;
            let sizes = l
                .portals
                .iter()
                .any(|p| p.modified_size.is_some())
                .then(|| size_identities(&l, &BTreeMap::new()));
            if *modify {
                l = virtual_modify(&l)?;
                if let Some(out) = out {
                    write(out, &pretty(&l))?;
                }
            }
            let report = class_balances(&l)?;
            let mut ok = report.size_balanced && sizes.as_ref().is_none_or(|s| s.holds);
            let mut matched = None;
            if *modify {
                ok &= report.count_balanced;
                if report.count_balanced {
                    matched = Some(portal_matching(&l)?.len());
                }
            }
            Ok(Outcome {
                positive: ok,
                payload: json!({
                    "modified": modify,
                    "gluing": report,
                    "unbalanced": report.unbalanced().map(|e| e.to_string()),
                    "size_identities": sizes,
                    "matched_pairs": matched,
                }),
            })
        }
        Command::Corpus { command } => match command {
            CorpusCommand::List => positive(json!(corpus::items()
                .iter()
                .map(|i| json!({ "name": i.name, "description": i.description }))
                .collect::<Vec<_>>())),
            CorpusCommand::Emit { name, dir } => {
                let files = corpus::emit(name)?;
                std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
                let mut written = Vec::new();
                for (file, body) in files {
                    let path = dir.join(&file);
                    write(&path, &body)?;
                    written.push(path.display().to_string());
                }
                positive(json!({ "files": written }))
            }
        },
    }
}

fn hyperplanes(inputs: &mut Inputs, complex: &Path, dot: Option<&Path>) -> Result<Outcome, CliError> {
    let x = inputs.complex(complex)?;
    let ws = walls(&x);
    let cross = crossings(&x, &ws);
    let rows: Vec<Value> = ws
        .walls
        .iter()
        .map(|w| {
            let cert = sidedness(&x, &ws, w.id);
            json!({
                "id": w.id,
                "midcubes": w.midcubes.len(),
                "dual_edges": w.dual_edges.iter().map(|&e| x.id(e)).collect::<Vec<_>>(),
                "two_sided": cert.two_sided,
            })
        })
        .collect();
    if let Some(dot) = dot {
        let mut s = String::from("graph crossings {\n");
        for w in &ws.walls {
            s.push_str(&format!("  W{};\n", w.id));
        }
        for (a, b) in cross.keys() {
            s.push_str(&format!("  W{a} -- W{b};\n"));
        }
        s.push_str("}\n");
        write(dot, &s)?;
    }
    positive(json!({
        "walls": rows,
        "crossings": cross.iter().map(|(&(a, b), &c)| json!([a, b, x.id(c)])).collect::<Vec<_>>(),
    }))
}

#[derive(Deserialize)]
struct HalfspaceSpec {
    wall: usize,
    side: Side,
}

#[derive(Deserialize)]
struct RegionFile {
    #[serde(default)]
    basepoint: Option<String>,
    halfspaces: Vec<HalfspaceSpec>,
}

fn gate(inputs: &mut Inputs, ball: &Path, region: &Path, v: &str, budget: usize) -> Result<Outcome, CliError> {
    let x = inputs.complex(ball)?;
    let spec: RegionFile = inputs.json(region)?;
    let bp = match &spec.basepoint {
        Some(b) => vertex(&x, b)?,
        None => match x.index_of("o") {
            Some(o) => o,
            None => x
                .vertices()
                .next()
                .ok_or_else(|| CliError::Usage("empty complex".into()))?,
        },
    };
    let geo = WallGeometry::new(&x, bp)?;
    let hs: Vec<(usize, Side)> = spec.halfspaces.iter().map(|h| (h.wall, h.side)).collect();
    let z = geo.region(&x, &hs)?;
    let res = geo.gate(&x, &z.vertices, vertex(&x, v)?, budget)?;
    positive(json!({
        "basepoint": x.id(bp),
        "region_vertices": z.vertices.len(),
        "gate": x.id(res.gate),
        "distance": res.distance,
        "separating_walls": res.separating,
    }))
}

fn complete(
    inputs: &mut Inputs,
    map: &Path,
    out: Option<&Path>,
    emit: Option<&[PathBuf]>,
) -> Result<Outcome, CliError> {
    let f = inputs.map(map)?;
    let c = canonical_completion(&f)?;
    let covering = verify_covering(&c.p)?;
    let rj = first_disagreement(&c.j.then(&c.r)?, &CubicalMap::identity(f.domain().clone()), None);
    let pj = first_disagreement(&c.j.then(&c.p)?, &f, None);
    if let Some(out) = out {
        write(out, &(c.completion.to_json() + "\n"))?;
    }
    if let Some(files) = emit {
        for (path, m) in files.iter().zip([&c.j, &c.r, &c.p]) {
            write(path, &(m.to_json() + "\n"))?;
        }
    }
    let ok = rj.is_none() && pj.is_none() && covering.degree().is_some();
    Ok(Outcome {
        positive: ok,
        payload: json!({
            "completion": c.report(),
            "fibres": covering.degrees,
            "r_after_j": rj.unwrap_or_else(|| "identity".into()),
            "p_after_j": pj.unwrap_or_else(|| "f".into()),
        }),
    })
}

#[derive(Deserialize)]
struct SquareFile {
    f: PathBuf,
    s: PathBuf,
    g: PathBuf,
    t: PathBuf,
}

fn functorial(inputs: &mut Inputs, square: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let spec: SquareFile = inputs.json(square)?;
    let dir = square.parent().unwrap_or(Path::new("."));
    let sq = MapSquare {
        f: inputs.map(&dir.join(&spec.f))?,
        s: inputs.map(&dir.join(&spec.s))?,
        g: inputs.map(&dir.join(&spec.g))?,
        t: inputs.map(&dir.join(&spec.t))?,
    };
    let conditions = functoriality_conditions(&sq)?;
    if conditions.iter().any(|c| !c.holds) {
        return Ok(Outcome {
            positive: false,
            payload: json!({ "conditions": conditions }),
        });
    }
    let res = functorial_map(&sq)?;
    if let Some(out) = out {
        write(out, &(res.t_hat.to_json() + "\n"))?;
    }
    Ok(Outcome {
        positive: res.local_isometry,
        payload: json!({
            "conditions": res.conditions,
            "local_isometry": res.local_isometry,
            "source": res.source.report(),
            "target": res.target.report(),
        }),
    })
}
