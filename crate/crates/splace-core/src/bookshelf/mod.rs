//! Bookshelf (ISPD2005 dialect) ingestion and output, synthetic design
//! generation, and run-configuration loading.
//!
//! File formats handled: `.aux` (file manifest), `.nodes`, `.nets`,
//! `.pl`, `.scl`, `.wts` (accepted, ignored). Pin offsets in `.nets`
//! are measured from the node center and converted to lower-left
//! offsets on load.

mod config;
mod parse;
mod synthetic;
mod write;

pub use config::{RescaleMode, RunConfig, ScheduleModel, WirelengthModel};
pub use parse::{parse_design, parse_pl, MACRO_ROW_HEIGHT_FACTOR};
pub use synthetic::{generate_synthetic, SyntheticSpec};
pub use write::{write_design, write_pl};

use crate::model::Netlist;

/// A loaded design: the netlist plus where it came from.
#[derive(Debug, Clone)]
pub struct DesignBundle {
    pub netlist: Netlist,
    /// Initial lower-left positions, one per instance.
    pub positions: Vec<(f64, f64)>,
    /// Source descriptor: aux path or synthetic spec summary.
    pub source: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::model::InstanceKind;
    use std::fs;
    use std::path::Path;

    fn write_fixture(dir: &Path, nodes: &str, nets: &str, pl: &str, scl: Option<&str>) {
        fs::write(dir.join("t.aux"), "RowBasedPlacement : t.nodes t.nets t.wts t.pl t.scl\n")
            .unwrap();
        fs::write(dir.join("t.nodes"), nodes).unwrap();
        fs::write(dir.join("t.nets"), nets).unwrap();
        fs::write(dir.join("t.pl"), pl).unwrap();
        fs::write(dir.join("t.wts"), "UCLA wts 1.0\n").unwrap();
        if let Some(scl) = scl {
            fs::write(dir.join("t.scl"), scl).unwrap();
        }
    }

    const NODES_3: &str = "UCLA nodes 1.0\n\nNumNodes : 3\nNumTerminals : 1\n\
        \tp0\t0\t0\tterminal\n\ta\t2\t1\n\tb\t2\t1\n";
    const NETS_3: &str = "UCLA nets 1.0\n\nNumNets : 1\nNumPins : 3\n\
        NetDegree : 3 n0\n\tp0 B : 0 0\n\ta I : 0.5 0\n\tb O : -0.5 0\n";
    const PL_3: &str = "UCLA pl 1.0\n\np0\t0\t0\t: N /FIXED\na\t3\t4\t: N\nb\t8\t2\t: N\n";
    const SCL_1: &str = "UCLA scl 1.0\n\nNumRows : 1\nCoreRow Horizontal\n  Coordinate : 0\n\
        \x20 Height : 10\n  Sitewidth : 1\n  SubrowOrigin : 0\tNumSites : 10\nEnd\n";

    #[test]
    fn parse_three_node_fixture() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture(dir.path(), NODES_3, NETS_3, PL_3, Some(SCL_1));
        let bundle = parse_design(dir.path().join("t.aux")).unwrap();
        let nl = &bundle.netlist;
        assert_eq!(nl.movable_count(), 2);
        assert_eq!(nl.fixed_count(), 1);
        assert_eq!(nl.nets.len(), 1);
        assert_eq!(nl.nets[0].pins.len(), 3);
        assert_eq!(nl.instances[0].kind, InstanceKind::IoPin);
        assert_eq!(nl.instances[1].kind, InstanceKind::MovableCell);
        // center-offset 0.5 on a 2-wide node -> lower-left offset 1.5
        assert!((nl.nets[0].pins[1].dx - 1.5).abs() < 1e-12);
        assert_eq!(nl.region.xmax, 10.0);
        assert_eq!(nl.region.ymax, 10.0);
    }

    #[test]
    fn duplicate_node_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let nodes = "UCLA nodes 1.0\nNumNodes : 2\nNumTerminals : 0\n\ta\t1\t1\n\ta\t1\t1\n";
        write_fixture(dir.path(), nodes, "UCLA nets 1.0\nNumNets : 0\nNumPins : 0\n",
                      "UCLA pl 1.0\na\t0\t0 : N\n", Some(SCL_1));
        let err = parse_design(dir.path().join("t.aux")).unwrap_err();
        assert!(err.to_string().contains("'a' declared twice"), "{err}");
    }

    #[test]
    fn dangling_pin_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let nets = "UCLA nets 1.0\nNumNets : 1\nNumPins : 2\nNetDegree : 2\n\ta B\n\tnosuch B\n";
        write_fixture(dir.path(), NODES_3, nets, PL_3, Some(SCL_1));
        let err = parse_design(dir.path().join("t.aux")).unwrap_err();
        assert!(err.to_string().contains("nosuch"), "{err}");
    }

    #[test]
    fn missing_file_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("t.aux"), "RowBasedPlacement : t.nodes t.nets t.pl\n").unwrap();
        let err = parse_design(dir.path().join("t.aux")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }), "{err}");
    }

    #[test]
    fn macro_threshold_uses_modal_height() {
        let dir = tempfile::tempdir().unwrap();
        // three unit-height cells establish the modal height; big is 5x
        let nodes = "UCLA nodes 1.0\nNumNodes : 4\nNumTerminals : 0\n\
            \ta\t1\t1\n\tb\t1\t1\n\tc\t1\t1\n\tbig\t5\t5\n";
        let pl = "UCLA pl 1.0\na 0 0 : N\nb 1 0 : N\nc 2 0 : N\nbig 4 4 : N\n";
        write_fixture(dir.path(), nodes, "UCLA nets 1.0\nNumNets : 0\nNumPins : 0\n", pl, Some(SCL_1));
        let bundle = parse_design(dir.path().join("t.aux")).unwrap();
        assert_eq!(bundle.netlist.instances[3].kind, InstanceKind::MovableMacro);
        assert_eq!(bundle.netlist.instances[0].kind, InstanceKind::MovableCell);
    }

    #[test]
    fn pl_roundtrip_precision() {
        use rand::{Rng, SeedableRng};
        let spec = SyntheticSpec {
            cells: 100,
            macros: 2,
            ..Default::default()
        };
        let mut bundle = generate_synthetic(&spec).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for p in bundle.positions.iter_mut() {
            *p = (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.pl");
        write_pl(&bundle.netlist, &bundle.positions, &path).unwrap();
        let parsed = parse_pl(&path).unwrap();
        assert_eq!(parsed.len(), bundle.positions.len());
        for (rec, inst) in parsed.iter().zip(&bundle.netlist.instances) {
            assert_eq!(rec.0, inst.name);
            let (x, y) = bundle.positions[inst.id];
            assert!((rec.1 - x).abs() <= 5e-7);
            assert!((rec.2 - y).abs() <= 5e-7);
            assert_eq!(rec.3, inst.kind.is_fixed());
        }
    }

    #[test]
    fn pl_empty_movable_set_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let nl = crate::model::Netlist {
            instances: vec![],
            nets: vec![],
            region: crate::model::PlacementRegion {
                xmin: 0.0,
                ymin: 0.0,
                xmax: 1.0,
                ymax: 1.0,
                num_bin_x: 1,
                num_bin_y: 1,
            },
        };
        let path = dir.path().join("empty.pl");
        write_pl(&nl, &[], &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("UCLA pl 1.0"));
        assert_eq!(parse_pl(&path).unwrap().len(), 0);
    }

    #[test]
    fn synthetic_single_macro_no_cells() {
        let spec = SyntheticSpec {
            cells: 0,
            macros: 1,
            ..Default::default()
        };
        let bundle = generate_synthetic(&spec).unwrap();
        assert_eq!(bundle.netlist.instances.len(), 1);
        assert_eq!(bundle.netlist.instances[0].kind, InstanceKind::FixedMacro);
        assert!(bundle.netlist.nets.is_empty());
    }

    #[test]
    fn synthetic_deterministic() {
        let spec = SyntheticSpec::default();
        let a = generate_synthetic(&spec).unwrap();
        let b = generate_synthetic(&spec).unwrap();
        assert_eq!(
            serde_json::to_string(&a.netlist).unwrap(),
            serde_json::to_string(&b.netlist).unwrap()
        );
    }

    #[test]
    fn synthetic_mean_degree() {
        let mut total = 0.0;
        let mut count = 0usize;
        for seed in 0..10 {
            let spec = SyntheticSpec {
                cells: 500,
                macros: 4,
                mean_net_degree: 3.0,
                seed,
                ..Default::default()
            };
            let bundle = generate_synthetic(&spec).unwrap();
            for net in &bundle.netlist.nets {
                total += net.pins.len() as f64;
                count += 1;
            }
        }
        let mean = total / count as f64;
        assert!((mean - 3.0).abs() <= 0.5, "mean degree {mean}");
    }

    #[test]
    fn synthetic_infeasible_macro_area() {
        let spec = SyntheticSpec {
            macros: 30,
            macro_size_range: (0.5, 0.6),
            ..Default::default()
        };
        assert!(matches!(
            generate_synthetic(&spec),
            Err(Error::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn synthetic_bookshelf_roundtrip_counts() {
        let spec = SyntheticSpec {
            cells: 60,
            macros: 3,
            ..Default::default()
        };
        let bundle = generate_synthetic(&spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_design(&bundle, dir.path(), "syn").unwrap();
        let back = parse_design(dir.path().join("syn.aux")).unwrap();
        assert_eq!(back.netlist.instances.len(), bundle.netlist.instances.len());
        assert_eq!(back.netlist.nets.len(), bundle.netlist.nets.len());
        assert_eq!(back.netlist.movable_count(), bundle.netlist.movable_count());
        assert_eq!(back.netlist.region.xmax, bundle.netlist.region.xmax);
    }

    #[test]
    fn config_defaults_and_echo() {
        let cfg = RunConfig::parse("").unwrap();
        let def = RunConfig::default();
        assert_eq!(cfg.hash(), def.hash());
        let cfg = RunConfig::parse("sigma_factor = 0.2\n").unwrap();
        assert_eq!(cfg.sigma_factor, 0.2);
    }

    #[test]
    fn config_effect_sum_rejected() {
        let err = RunConfig::parse("low_filter_effect=0.6\nmid_filter_effect=0.5\n").unwrap_err();
        assert!(err.to_string().contains("exceeds 1"), "{err}");
    }

    #[test]
    fn config_unknown_key_and_type_mismatch() {
        assert!(RunConfig::parse("no_such_key=1\n").is_err());
        assert!(RunConfig::parse("gamma=abc\n").is_err());
        // sections and comments pass through
        let cfg = RunConfig::parse("[placement]\n# comment\ngamma=2.5\n").unwrap();
        assert_eq!(cfg.gamma, 2.5);
    }

    #[test]
    fn parser_totality_on_mutated_fixtures() {
        // truncated and permuted variants must error or parse, never panic
        let dir = tempfile::tempdir().unwrap();
        let full = format!("{NODES_3}");
        for cut in 0..full.len() {
            if !full.is_char_boundary(cut) {
                continue;
            }
            write_fixture(dir.path(), &full[..cut], NETS_3, PL_3, Some(SCL_1));
            let _ = parse_design(dir.path().join("t.aux"));
        }
        let mut lines: Vec<&str> = NETS_3.lines().collect();
        lines.reverse();
        write_fixture(dir.path(), NODES_3, &lines.join("\n"), PL_3, Some(SCL_1));
        let _ = parse_design(dir.path().join("t.aux"));
    }
}
