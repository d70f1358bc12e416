//! Signed area-hint refinement. Augments the instance graph with pin
//! nodes for fixed macros, repulsive virtual nodes at macro centers,
//! and density-signed virtual nodes at bin centers, then iterates a
//! relaxed fixed-point update of the movable coordinates through a
//! Laplacian power filter normalized by its Gershgorin bound.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{bin_density, InstanceKind, Netlist};
use crate::spectral::{
    add_net_clique, build_instance_graph, gershgorin_upper, GraphBuilder, GraphSignal, SignedGraph,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HintConfig {
    /// fixed-point iteration budget
    pub iterations: usize,
    /// relaxation blend factor in [0, 1]
    pub relax: f64,
    pub num_bin_x: usize,
    pub num_bin_y: usize,
    /// fraction of the bin count forming the detection window
    pub detection_ratio: f64,
    /// bin capacity the logistic mapping is centered on
    pub bin_capacity: f64,
    /// logistic slope
    pub mu: f64,
    /// refinement filter power
    pub filter_k: usize,
    pub max_net_degree: usize,
}

impl Default for HintConfig {
    fn default() -> Self {
        HintConfig {
            iterations: 3,
            relax: 0.5,
            num_bin_x: 16,
            num_bin_y: 16,
            detection_ratio: 0.1,
            bin_capacity: 0.9,
            mu: 4.0,
            filter_k: 2,
            max_net_degree: 100,
        }
    }
}

impl HintConfig {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.relax) {
            return Err(Error::Config(format!("relax {} must be in [0,1]", self.relax)));
        }
        if self.mu <= 0.0 {
            return Err(Error::Config("logistic slope must be positive".into()));
        }
        if self.filter_k < 1 {
            return Err(Error::Config("filter power must be >= 1".into()));
        }
        if self.num_bin_x == 0 || self.num_bin_y == 0 {
            return Err(Error::Config("bin counts must be positive".into()));
        }
        Ok(())
    }
}

/// Where a hint-graph node comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HintNode {
    Instance(usize),
    /// expanded pin site of a fixed macro
    MacroPin(usize),
    /// repulsive virtual node at a fixed macro's center
    MacroVirtual(usize),
    /// density virtual node at a bin center
    BinVirtual { bx: usize, by: usize },
}

pub struct HintGraph {
    pub graph: SignedGraph,
    /// provenance per node, aligned with graph indices
    pub nodes: Vec<HintNode>,
    /// node coordinates (instance rows mirror the input signal)
    pub coords: GraphSignal,
}

/// Density-signed bin potential: 0 at capacity, → 1 overfull, → −1 empty.
pub fn bin_potential(density: f64, capacity: f64, mu: f64) -> f64 {
    2.0 / (1.0 + (-mu * (density - capacity)).exp()) - 1.0
}

/// Axis-normalized distance ratio of a point from a rectangle center.
fn max_ratio(dx: f64, dy: f64, half_w: f64, half_h: f64) -> f64 {
    (dx.abs() / half_w).max(dy.abs() / half_h)
}

/// Mean |weight| of the original instance-graph edges incident to each
/// instance; instances without edges fall back to weight 1.
pub fn base_weights(netlist: &Netlist, max_net_degree: usize) -> Vec<f64> {
    let g = build_instance_graph(netlist, max_net_degree);
    (0..netlist.instances.len())
        .map(|i| {
            let ws = g.neighbor_weights(i);
            if ws.is_empty() {
                1.0
            } else {
                ws.iter().map(|w| w.abs()).sum::<f64>() / ws.len() as f64
            }
        })
        .collect()
}

/// Signed repulsion edges from one fixed macro's virtual center node to
/// the movable instances whose centers fall inside its footprint.
/// Returns (instance, weight) pairs; every weight is negative.
pub fn macro_repulsion_edges(
    netlist: &Netlist,
    macro_id: usize,
    centers: &GraphSignal,
    base: &[f64],
) -> Result<Vec<(usize, f64)>> {
    let m = &netlist.instances[macro_id];
    if m.width <= 0.0 || m.height <= 0.0 {
        return Err(Error::Graph(format!("macro '{}' has zero size", m.name)));
    }
    let (mcx, mcy) = m.center();
    let (hw, hh) = (m.width / 2.0, m.height / 2.0);
    let mut out = Vec::new();
    for inst in &netlist.instances {
        if inst.kind.is_fixed() {
            continue;
        }
        let (cx, cy) = (centers.x[inst.id], centers.y[inst.id]);
        let r = max_ratio(cx - mcx, cy - mcy, hw, hh);
        if r <= 1.0 {
            out.push((inst.id, -(-r).exp() * base[inst.id]));
        }
    }
    Ok(out)
}

/// Builds the full hint graph at the current instance centers. The
/// graph's Laplacian is the refinement operator's matrix.
pub fn build_hint_graph(
    netlist: &Netlist,
    centers: &GraphSignal,
    config: &HintConfig,
) -> Result<HintGraph> {
    config.validate()?;
    let n = netlist.instances.len();
    let base = base_weights(netlist, config.max_net_degree);

    let mut b = GraphBuilder::new(n);
    let mut nodes: Vec<HintNode> = (0..n).map(HintNode::Instance).collect();
    let mut coords = centers.clone();
    for inst in &netlist.instances {
        b.set_fixed(inst.id, inst.kind.is_fixed());
    }

    // pin expansion: fixed macros split into one fixed node per distinct
    // pin site; pinless macros keep their center node
    let mut pin_nodes: HashMap<(usize, u64, u64), usize> = HashMap::new();
    for net in &netlist.nets {
        for pin in &net.pins {
            let inst = &netlist.instances[pin.instance];
            if inst.kind != InstanceKind::FixedMacro {
                continue;
            }
            pin_nodes
                .entry((pin.instance, pin.dx.to_bits(), pin.dy.to_bits()))
                .or_insert_with(|| {
                    let id = b.add_node(true, false);
                    nodes.push(HintNode::MacroPin(pin.instance));
                    coords.x.push(inst.position.0 + pin.dx);
                    coords.y.push(inst.position.1 + pin.dy);
                    id
                });
        }
    }
    for net in &netlist.nets {
        let ids = net.pins.iter().map(|p| {
            *pin_nodes
                .get(&(p.instance, p.dx.to_bits(), p.dy.to_bits()))
                .unwrap_or(&p.instance)
        });
        add_net_clique(&mut b, net.weight, ids, config.max_net_degree);
    }

    // macro virtual nodes with distance-decayed negative edges
    for inst in &netlist.instances {
        if inst.kind != InstanceKind::FixedMacro {
            continue;
        }
        let edges = macro_repulsion_edges(netlist, inst.id, centers, &base)?;
        if edges.is_empty() {
            continue;
        }
        let v = b.add_node(true, true);
        nodes.push(HintNode::MacroVirtual(inst.id));
        let (cx, cy) = inst.center();
        coords.x.push(cx);
        coords.y.push(cy);
        for (i, w) in edges {
            b.add_edge(i, v, w);
        }
    }

    // bin virtual nodes: sign follows the logistic density potential
    let positions: Vec<(f64, f64)> = netlist
        .instances
        .iter()
        .map(|i| (centers.x[i.id] - i.width / 2.0, centers.y[i.id] - i.height / 2.0))
        .collect();
    let grid = bin_density(netlist, &positions, config.num_bin_x, config.num_bin_y)?;
    let phi: Vec<f64> = grid
        .rho
        .iter()
        .map(|&d| bin_potential(d, config.bin_capacity, config.mu))
        .collect();
    let n_x = ((config.detection_ratio * config.num_bin_x as f64).floor() as usize).max(1);
    let n_y = ((config.detection_ratio * config.num_bin_y as f64).floor() as usize).max(1);
    let (half_w, half_h) = (grid.bin_w / 2.0, grid.bin_h / 2.0);
    let mut bin_nodes: HashMap<(usize, usize), usize> = HashMap::new();
    for inst in &netlist.instances {
        if inst.kind.is_fixed() {
            continue;
        }
        let (cx, cy) = (centers.x[inst.id], centers.y[inst.id]);
        let bi = (((cx - grid.xmin) / grid.bin_w).floor() as isize)
            .clamp(0, config.num_bin_x as isize - 1);
        let bj = (((cy - grid.ymin) / grid.bin_h).floor() as isize)
            .clamp(0, config.num_bin_y as isize - 1);
        for dj in -((n_y as isize - 1) / 2)..=(n_y as isize / 2) {
            for di in -((n_x as isize - 1) / 2)..=(n_x as isize / 2) {
                let (bx, by) = (bi + di, bj + dj);
                if bx < 0 || by < 0 || bx >= config.num_bin_x as isize || by >= config.num_bin_y as isize {
                    continue;
                }
                let (bx, by) = (bx as usize, by as usize);
                let p = phi[by * config.num_bin_x + bx];
                if p == 0.0 {
                    continue;
                }
                let bcx = grid.xmin + (bx as f64 + 0.5) * grid.bin_w;
                let bcy = grid.ymin + (by as f64 + 0.5) * grid.bin_h;
                let r = max_ratio(cx - bcx, cy - bcy, half_w, half_h);
                let w = -(-r).exp() * p * base[inst.id];
                let v = *bin_nodes.entry((bx, by)).or_insert_with(|| {
                    nodes.push(HintNode::BinVirtual { bx, by });
                    coords.x.push(bcx);
                    coords.y.push(bcy);
                    b.add_node(true, true)
                });
                b.add_edge(inst.id, v, w);
            }
        }
    }

    Ok(HintGraph {
        graph: b.build(),
        nodes,
        coords,
    })
}

/// Applies ((λ_up I − L)/λ_up)^k to both channels. The bound λ_up is
/// the Gershgorin estimate of the largest Laplacian eigenvalue; an
/// edgeless graph degenerates to the identity.
pub fn apply_refinement_filter(graph: &SignedGraph, k: usize, signal: &GraphSignal) -> GraphSignal {
    let lambda_up = gershgorin_upper(graph);
    let mut out = signal.clone();
    if lambda_up <= 0.0 {
        return out;
    }
    for _ in 0..k {
        let lx = graph.laplacian_apply(&out.x);
        let ly = graph.laplacian_apply(&out.y);
        for i in 0..out.x.len() {
            out.x[i] -= lx[i] / lambda_up;
            out.y[i] -= ly[i] / lambda_up;
        }
    }
    out
}

/// Runs the relaxed fixed-point refinement on instance centers:
/// rebuild the hint graph, filter, blend with factor `relax`, re-pin
/// fixed rows, clamp movables so footprints stay inside the region.
pub fn refine(netlist: &Netlist, signal0: &GraphSignal, config: &HintConfig) -> Result<GraphSignal> {
    config.validate()?;
    if signal0.x.len() != netlist.instances.len() {
        return Err(Error::PositionCount {
            expected: netlist.instances.len(),
            got: signal0.x.len(),
        });
    }
    let mut g = signal0.clone();
    let r = &netlist.region;
    for _ in 0..config.iterations {
        let hint = build_hint_graph(netlist, &g, config)?;
        // extend to the full node set; virtual rows sit at their anchors
        let filtered = apply_refinement_filter(&hint.graph, config.filter_k, &hint.coords);
        for inst in &netlist.instances {
            if inst.kind.is_fixed() {
                continue;
            }
            let i = inst.id;
            let x = (1.0 - config.relax) * g.x[i] + config.relax * filtered.x[i];
            let y = (1.0 - config.relax) * g.y[i] + config.relax * filtered.y[i];
            let (hw, hh) = (inst.width / 2.0, inst.height / 2.0);
            g.x[i] = x.clamp(r.xmin + hw, (r.xmax - hw).max(r.xmin + hw));
            g.y[i] = y.clamp(r.ymin + hh, (r.ymax - hh).max(r.ymin + hh));
        }
    }
    Ok(g)
}
