use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Netlist;

use super::DesignBundle;

/// Writes a `.pl` placement file; coordinates printed with 6 decimals,
/// fixed nodes carry the `/FIXED` attribute marker.
pub fn write_pl(netlist: &Netlist, positions: &[(f64, f64)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("UCLA pl 1.0\n\n");
    for inst in &netlist.instances {
        let (x, y) = positions[inst.id];
        let _ = write!(out, "{}\t{:.6}\t{:.6}\t: N", inst.name, x, y);
        if inst.kind.is_fixed() {
            out.push_str(" /FIXED");
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Exports a design to a Bookshelf bundle `<dir>/<name>.{aux,nodes,nets,pl,scl}`.
pub fn write_design(bundle: &DesignBundle, dir: impl AsRef<Path>, name: &str) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let nl = &bundle.netlist;

    let aux = format!(
        "RowBasedPlacement : {name}.nodes {name}.nets {name}.wts {name}.pl {name}.scl\n"
    );
    write_file(&dir.join(format!("{name}.aux")), &aux)?;

    let terminals = nl.instances.iter().filter(|i| i.kind.is_fixed()).count();
    let mut nodes = String::from("UCLA nodes 1.0\n\n");
    let _ = writeln!(nodes, "NumNodes : {}", nl.instances.len());
    let _ = writeln!(nodes, "NumTerminals : {terminals}");
    for inst in &nl.instances {
        let _ = write!(nodes, "\t{}\t{}\t{}", inst.name, inst.width, inst.height);
        if inst.kind.is_fixed() {
            nodes.push_str("\tterminal");
        }
        nodes.push('\n');
    }
    write_file(&dir.join(format!("{name}.nodes")), &nodes)?;

    let mut nets = String::from("UCLA nets 1.0\n\n");
    let _ = writeln!(nets, "NumNets : {}", nl.nets.len());
    let _ = writeln!(nets, "NumPins : {}", nl.pin_count());
    for net in &nl.nets {
        let _ = writeln!(nets, "NetDegree : {} n{}", net.pins.len(), net.id);
        for pin in &net.pins {
            let inst = &nl.instances[pin.instance];
            // lower-left offset -> bookshelf center offset
            let cdx = pin.dx - inst.width / 2.0;
            let cdy = pin.dy - inst.height / 2.0;
            let _ = writeln!(nets, "\t{}\tB : {:.6} {:.6}", inst.name, cdx, cdy);
        }
    }
    write_file(&dir.join(format!("{name}.nets")), &nets)?;

    write_file(&dir.join(format!("{name}.wts")), "UCLA wts 1.0\n")?;
    write_pl(nl, &bundle.positions, dir.join(format!("{name}.pl")))?;

    // single full-region row keeps the parser's region reconstruction exact
    let r = &nl.region;
    let mut scl = String::from("UCLA scl 1.0\n\nNumRows : 1\n");
    scl.push_str("CoreRow Horizontal\n");
    let _ = writeln!(scl, "  Coordinate : {}", r.ymin);
    let _ = writeln!(scl, "  Height : {}", r.height());
    scl.push_str("  Sitewidth : 1\n");
    let _ = writeln!(scl, "  SubrowOrigin : {}\tNumSites : {}", r.xmin, r.width());
    scl.push_str("End\n");
    write_file(&dir.join(format!("{name}.scl")), &scl)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(path.display().to_string(), e))
}
