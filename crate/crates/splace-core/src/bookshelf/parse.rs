use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceKind, Net, Netlist, Pin, PlacementRegion};

use super::DesignBundle;

/// A movable node is classified as a macro when its height exceeds
/// this multiple of the modal (row) cell height.
pub const MACRO_ROW_HEIGHT_FACTOR: f64 = 4.0;

struct RawNode {
    name: String,
    width: f64,
    height: f64,
    terminal: bool,
}

struct RawPin {
    node: String,
    // offset from node center
    dx: f64,
    dy: f64,
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            iter: text.lines().enumerate(),
        }
    }

    /// Next non-empty, non-comment line with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.iter.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((idx + 1, t));
        }
        None
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn parse_f64(file: &str, line: usize, tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::parse(file, line, format!("expected number, got '{tok}'")))
}

/// Parses an ISPD2005 `.aux` bundle into a [`DesignBundle`].
pub fn parse_design(aux_path: impl AsRef<Path>) -> Result<DesignBundle> {
    let aux_path = aux_path.as_ref();
    let aux_text = read_file(aux_path)?;
    let dir = aux_path.parent().unwrap_or_else(|| Path::new("."));
    let aux_name = aux_path.display().to_string();

    let mut files: HashMap<&str, PathBuf> = HashMap::new();
    for (idx, line) in aux_text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let rest = t.split(':').nth(1).ok_or_else(|| {
            Error::parse(&aux_name, idx + 1, "expected 'RowBasedPlacement : files...'")
        })?;
        for tok in rest.split_whitespace() {
            if let Some(ext) = Path::new(tok).extension().and_then(|e| e.to_str()) {
                files.insert(
                    match ext {
                        "nodes" => "nodes",
                        "nets" => "nets",
                        "pl" => "pl",
                        "scl" => "scl",
                        "wts" => "wts",
                        _ => continue,
                    },
                    dir.join(tok),
                );
            }
        }
    }
    let require = |key: &str| -> Result<PathBuf> {
        files
            .get(key)
            .cloned()
            .ok_or_else(|| Error::parse(&aux_name, 1, format!("aux lists no .{key} file")))
    };

    let nodes = parse_nodes(&require("nodes")?)?;
    let raw_nets = parse_nets(&require("nets")?)?;
    let placements = parse_pl(&require("pl")?)?;
    let region = match files.get("scl") {
        Some(p) if p.exists() => Some(parse_scl(p)?),
        _ => None,
    };
    // .wts accepted and ignored (ISPD2005 ships trivial unit weights)

    build_bundle(aux_name, nodes, raw_nets, placements, region)
}

fn parse_nodes(path: &Path) -> Result<Vec<RawNode>> {
    let text = read_file(path)?;
    let fname = path.display().to_string();
    let mut lines = Lines::new(&text);
    let mut out = Vec::new();
    while let Some((lno, line)) = lines.next_content() {
        if line.starts_with("UCLA") || line.starts_with("NumNodes") || line.starts_with("NumTerminals") {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::parse(&fname, lno, "expected 'name width height [terminal]'"));
        }
        out.push(RawNode {
            name: toks[0].to_string(),
            width: parse_f64(&fname, lno, toks[1])?,
            height: parse_f64(&fname, lno, toks[2])?,
            terminal: toks.get(3).is_some_and(|t| t.starts_with("terminal")),
        });
    }
    Ok(out)
}

fn parse_nets(path: &Path) -> Result<Vec<Vec<RawPin>>> {
    let text = read_file(path)?;
    let fname = path.display().to_string();
    let mut lines = Lines::new(&text);
    let mut nets: Vec<Vec<RawPin>> = Vec::new();
    let mut current: Option<(usize, Vec<RawPin>)> = None; // (remaining, pins)
    while let Some((lno, line)) = lines.next_content() {
        if line.starts_with("UCLA") || line.starts_with("NumNets") || line.starts_with("NumPins") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("NetDegree") {
            if let Some((remaining, pins)) = current.take() {
                if remaining != 0 {
                    return Err(Error::parse(
                        &fname,
                        lno,
                        format!("net short by {remaining} pins"),
                    ));
                }
                nets.push(pins);
            }
            let degree_tok = rest
                .trim_start_matches([':', ' '])
                .split_whitespace()
                .next()
                .ok_or_else(|| Error::parse(&fname, lno, "NetDegree missing count"))?;
            let degree: usize = degree_tok
                .parse()
                .map_err(|_| Error::parse(&fname, lno, format!("bad NetDegree '{degree_tok}'")))?;
            current = Some((degree, Vec::with_capacity(degree)));
            continue;
        }
        let (remaining, pins) = current
            .as_mut()
            .ok_or_else(|| Error::parse(&fname, lno, "pin line before any NetDegree"))?;
        if *remaining == 0 {
            return Err(Error::parse(&fname, lno, "more pins than NetDegree"));
        }
        // "name I/O/B [: dx dy]"
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (dx, dy) = if let Some(colon) = toks.iter().position(|&t| t == ":") {
            if toks.len() < colon + 3 {
                return Err(Error::parse(&fname, lno, "pin offset incomplete"));
            }
            (
                parse_f64(&fname, lno, toks[colon + 1])?,
                parse_f64(&fname, lno, toks[colon + 2])?,
            )
        } else {
            (0.0, 0.0)
        };
        pins.push(RawPin {
            node: toks[0].to_string(),
            dx,
            dy,
        });
        *remaining -= 1;
    }
    if let Some((remaining, pins)) = current.take() {
        if remaining != 0 {
            return Err(Error::parse(&fname, 0, format!("last net short by {remaining} pins")));
        }
        nets.push(pins);
    }
    Ok(nets)
}

/// Parses a `.pl` file into (name, x, y, fixed) records.
pub fn parse_pl(path: impl AsRef<Path>) -> Result<Vec<(String, f64, f64, bool)>> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let fname = path.display().to_string();
    let mut lines = Lines::new(&text);
    let mut out = Vec::new();
    while let Some((lno, line)) = lines.next_content() {
        if line.starts_with("UCLA") {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::parse(&fname, lno, "expected 'name x y : orient [/FIXED]'"));
        }
        out.push((
            toks[0].to_string(),
            parse_f64(&fname, lno, toks[1])?,
            parse_f64(&fname, lno, toks[2])?,
            toks.iter().any(|t| t.starts_with("/FIXED")),
        ));
    }
    Ok(out)
}

fn parse_scl(path: &Path) -> Result<(f64, f64, f64, f64)> {
    let text = read_file(path)?;
    let fname = path.display().to_string();
    let mut lines = Lines::new(&text);
    let (mut xmin, mut ymin) = (f64::INFINITY, f64::INFINITY);
    let (mut xmax, mut ymax) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut row: HashMap<String, f64> = HashMap::new();
    let mut in_row = false;
    while let Some((lno, line)) = lines.next_content() {
        if line.starts_with("CoreRow") {
            in_row = true;
            row.clear();
            continue;
        }
        if !in_row {
            continue;
        }
        if line.starts_with("End") {
            let y = *row.get("coordinate").unwrap_or(&0.0);
            let h = *row.get("height").unwrap_or(&0.0);
            let x = *row.get("subroworigin").unwrap_or(&0.0);
            let sites = *row.get("numsites").unwrap_or(&0.0);
            let sitew = *row.get("sitewidth").unwrap_or(&1.0);
            xmin = xmin.min(x);
            xmax = xmax.max(x + sites * sitew);
            ymin = ymin.min(y);
            ymax = ymax.max(y + h);
            in_row = false;
            continue;
        }
        // several "Key : value" statements may share one line
        let segs: Vec<&str> = line.split(':').collect();
        for w in segs.windows(2) {
            let key = w[0].split_whitespace().next_back();
            let val = w[1].split_whitespace().next();
            if let (Some(key), Some(val)) = (key, val) {
                row.insert(key.to_ascii_lowercase(), parse_f64(&fname, lno, val)?);
            }
        }
    }
    if xmin.is_finite() && xmax > xmin && ymax > ymin {
        Ok((xmin, ymin, xmax, ymax))
    } else {
        Err(Error::parse(&fname, 0, "no usable CoreRow entries"))
    }
}

fn modal_movable_height(nodes: &[RawNode]) -> f64 {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for n in nodes.iter().filter(|n| !n.terminal) {
        *counts.entry(n.height.to_bits()).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by_key(|&(_, c)| c)
        .map(|(bits, _)| f64::from_bits(bits))
        .unwrap_or(1.0)
}

fn build_bundle(
    source: String,
    nodes: Vec<RawNode>,
    raw_nets: Vec<Vec<RawPin>>,
    placements: Vec<(String, f64, f64, bool)>,
    region: Option<(f64, f64, f64, f64)>,
) -> Result<DesignBundle> {
    let mut index: HashMap<String, usize> = HashMap::with_capacity(nodes.len());
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(n.name.clone(), i).is_some() {
            return Err(Error::Parse {
                file: source.clone(),
                line: 0,
                msg: format!("node '{}' declared twice", n.name),
            });
        }
    }

    let mut positions = vec![(0.0, 0.0); nodes.len()];
    let mut pl_fixed = vec![false; nodes.len()];
    for (name, x, y, fixed) in &placements {
        let &i = index.get(name).ok_or_else(|| Error::Parse {
            file: source.clone(),
            line: 0,
            msg: format!(".pl places unknown node '{name}'"),
        })?;
        positions[i] = (*x, *y);
        pl_fixed[i] = *fixed;
    }

    let modal_h = modal_movable_height(&nodes);
    let instances: Vec<Instance> = nodes
        .iter()
        .enumerate()
        .map(|(id, n)| {
            let kind = if n.terminal || pl_fixed[id] {
                if n.width * n.height == 0.0 {
                    InstanceKind::IoPin
                } else {
                    InstanceKind::FixedMacro
                }
            } else if n.height > MACRO_ROW_HEIGHT_FACTOR * modal_h {
                InstanceKind::MovableMacro
            } else {
                InstanceKind::MovableCell
            };
            Instance {
                id,
                name: n.name.clone(),
                width: n.width,
                height: n.height,
                kind,
                position: positions[id],
            }
        })
        .collect();

    let mut nets = Vec::with_capacity(raw_nets.len());
    for (id, raw) in raw_nets.into_iter().enumerate() {
        let mut pins = Vec::with_capacity(raw.len());
        for p in raw {
            let &i = index.get(&p.node).ok_or_else(|| Error::Parse {
                file: source.clone(),
                line: 0,
                msg: format!("net {id} references undeclared node '{}'", p.node),
            })?;
            // center offset -> lower-left offset
            pins.push(Pin {
                instance: i,
                dx: instances[i].width / 2.0 + p.dx,
                dy: instances[i].height / 2.0 + p.dy,
            });
        }
        nets.push(Net {
            id,
            pins,
            weight: 1.0,
        });
    }

    let (xmin, ymin, xmax, ymax) = region.unwrap_or_else(|| {
        let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for inst in &instances {
            b.0 = b.0.min(inst.position.0);
            b.1 = b.1.min(inst.position.1);
            b.2 = b.2.max(inst.position.0 + inst.width);
            b.3 = b.3.max(inst.position.1 + inst.height);
        }
        if b.2 > b.0 && b.3 > b.1 {
            b
        } else {
            (0.0, 0.0, 1.0, 1.0)
        }
    });

    let netlist = Netlist {
        instances,
        nets,
        region: PlacementRegion {
            xmin,
            ymin,
            xmax,
            ymax,
            num_bin_x: 32,
            num_bin_y: 32,
        },
    };
    netlist.validate()?;
    let positions = netlist.positions();
    Ok(DesignBundle {
        netlist,
        positions,
        source,
    })
}
