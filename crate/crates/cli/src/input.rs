//! Instance loading: generator shortcuts, graph files and JSON sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use eposa_core::io::{decode_graph6, from_json};
use eposa_core::{
    elementary_wall, heinlein_wall, wall_prime, CounterexampleInstance, Graph, HeinleinWall,
    RoleLabel, Terminals, Wall,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Sidecar files carry the designations a bare graph file cannot, so checks
/// never re-infer geometry.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
pub enum Sidecar {
    Heinlein(HeinleinWall),
    Wall(Wall),
    Z(Box<CounterexampleInstance>),
}

impl Sidecar {
    pub fn graph(&self) -> &Graph {
        match self {
            Sidecar::Heinlein(w) => &w.graph,
            Sidecar::Wall(w) => &w.graph,
            Sidecar::Z(z) => &z.z,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Instance {
    Sidecar(Sidecar),
    Graph(Graph),
}

/// How the instance was obtained, echoed into every report.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum InstanceDesc {
    Generated {
        generator: String,
        params: serde_json::Value,
    },
    File {
        file: PathBuf,
        sha256: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Graph file (graph6 or JSON) or instance sidecar.
    #[arg(long, short = 'i', value_name = "FILE", global = true, conflicts_with_all = ["heinlein", "wall"])]
    pub input: Option<PathBuf>,
    /// Generate a Heinlein wall of this size instead of reading a file.
    #[arg(long, value_name = "R", global = true, conflicts_with = "wall")]
    pub heinlein: Option<usize>,
    /// Generate an `m x n` wall, given as `M,N`.
    #[arg(long, value_name = "M,N", global = true, value_parser = parse_pair)]
    pub wall: Option<(usize, usize)>,
    /// With `--wall`: suppress degree-2 vertices (wall').
    #[arg(long, global = true, requires = "wall")]
    pub prime: bool,
}

impl InstanceArgs {
    pub fn load(&self) -> Result<(Instance, InstanceDesc)> {
        if let Some(r) = self.heinlein {
            let w = heinlein_wall(r)?;
            let desc = InstanceDesc::Generated {
                generator: "heinlein".into(),
                params: serde_json::json!({ "size": r }),
            };
            return Ok((Instance::Sidecar(Sidecar::Heinlein(w)), desc));
        }
        if let Some((m, n)) = self.wall {
            let w = if self.prime {
                wall_prime(m, n)?
            } else {
                elementary_wall(m, n)?
            };
            let desc = InstanceDesc::Generated {
                generator: "wall".into(),
                params: serde_json::json!({ "rows": m, "cols": n, "prime": self.prime }),
            };
            return Ok((Instance::Sidecar(Sidecar::Wall(w)), desc));
        }
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| anyhow!("no instance given: use --input, --heinlein or --wall"))?;
        read_instance(path)
    }
}

pub fn read_instance(path: &Path) -> Result<(Instance, InstanceDesc)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let desc = InstanceDesc::File {
        file: path.to_path_buf(),
        sha256: format!("{:x}", Sha256::digest(&bytes)),
    };
    let text =
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok((
        parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?,
        desc,
    ))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let trimmed = text.trim_start();
    if !trimmed.starts_with('{') {
        return Ok(Instance::Graph(decode_graph6(text)?));
    }
    let mut value: serde_json::Value = serde_json::from_str(trimmed)?;
    let Some(kind) = value
        .get("type")
        .and_then(|t| t.as_str())
        .map(str::to_owned)
    else {
        return Ok(Instance::Graph(from_json(trimmed)?));
    };
    // Dispatched by hand: serde's buffered tag handling cannot read the
    // integer-keyed label maps.
    let data = value
        .get_mut("data")
        .map(serde_json::Value::take)
        .ok_or_else(|| anyhow!("sidecar has no data"))?;
    Ok(Instance::Sidecar(match kind.as_str() {
        "heinlein" => Sidecar::Heinlein(serde_json::from_value(data)?),
        "wall" => Sidecar::Wall(serde_json::from_value(data)?),
        "z" => Sidecar::Z(serde_json::from_value(data)?),
        other => bail!("unknown sidecar type `{other}`"),
    }))
}

impl Instance {
    pub fn graph(&self) -> &Graph {
        match self {
            Instance::Sidecar(s) => s.graph(),
            Instance::Graph(g) => g,
        }
    }

    /// The linkage terminals: from the designation when there is one, else
    /// from the `a*`..`d*` role labels.
    pub fn terminals(&self) -> Result<Terminals> {
        match self {
            Instance::Sidecar(Sidecar::Heinlein(w)) => Ok(w.terminals),
            Instance::Sidecar(Sidecar::Z(z)) => Ok(z.wall.terminals),
            _ => {
                let g = self.graph();
                let find = |l: RoleLabel| {
                    g.find_label(l)
                        .ok_or_else(|| anyhow!("instance has no {:?} label", l))
                };
                Ok(Terminals {
                    a: find(RoleLabel::TerminalA)?,
                    b: find(RoleLabel::TerminalB)?,
                    c: find(RoleLabel::TerminalC)?,
                    d: find(RoleLabel::TerminalD)?,
                })
            }
        }
    }

    pub fn heinlein(&self) -> Option<&HeinleinWall> {
        match self {
            Instance::Sidecar(Sidecar::Heinlein(w)) => Some(w),
            _ => None,
        }
    }

    pub fn wall(&self) -> Result<&Wall> {
        match self {
            Instance::Sidecar(Sidecar::Wall(w)) => Ok(w),
            _ => bail!("this check needs a wall instance (--wall M,N or a wall sidecar)"),
        }
    }

    pub fn z(&self) -> Result<&CounterexampleInstance> {
        match self {
            Instance::Sidecar(Sidecar::Z(z)) => Ok(z),
            _ => bail!("this check needs a Z instance sidecar (see `gen z`)"),
        }
    }
}

pub fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `u,v`, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}
