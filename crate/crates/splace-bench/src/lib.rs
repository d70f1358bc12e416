//! Shared fixtures for the kernel benchmarks: deterministic synthetic
//! designs and signed graphs at a few representative sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splace_core::bookshelf::{generate_synthetic, SyntheticSpec};
use splace_core::spectral::{GraphBuilder, GraphSignal, SignedGraph};
use splace_core::Netlist;

/// Deterministic synthetic netlist with `cells` movable cells and a
/// handful of macros, sized like the designs the placer actually sees.
pub fn bench_netlist(cells: usize) -> Netlist {
    let spec = SyntheticSpec {
        cells,
        macros: 4,
        seed: 42,
        ..SyntheticSpec::default()
    };
    generate_synthetic(&spec)
        .expect("synthetic design generates")
        .netlist
}

/// Random signed graph with `n` nodes and roughly `4n` edges, mixing
/// attractive and repulsive weights the way the refinement stage does.
pub fn bench_graph(n: usize) -> SignedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut builder = GraphBuilder::new(n);
    for _ in 0..4 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let w: f64 = if rng.gen_bool(0.2) {
            -rng.gen_range(0.0..1.0)
        } else {
            rng.gen_range(0.0..1.0)
        };
        builder.add_edge(i, j, w);
    }
    builder.build()
}

/// Random two-channel signal over `n` nodes in the unit square.
pub fn bench_signal(n: usize) -> GraphSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut sig = GraphSignal::zeros(n);
    for i in 0..n {
        sig.set_row(i, (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)));
    }
    sig
}

/// Uniform-random instance positions inside the region.
pub fn bench_positions(netlist: &Netlist, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = &netlist.region;
    netlist
        .instances
        .iter()
        .map(|inst| {
            if inst.kind.is_fixed() {
                inst.position
            } else {
                (
                    rng.gen_range(r.xmin..(r.xmax - inst.width).max(r.xmin + f64::MIN_POSITIVE)),
                    rng.gen_range(r.ymin..(r.ymax - inst.height).max(r.ymin + f64::MIN_POSITIVE)),
                )
            }
        })
        .collect()
}
