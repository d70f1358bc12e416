//! Smooth wirelength models and their analytic gradients. Both the
//! weighted-average and log-sum-exp forms are evaluated per net and
//! axis with max-shifted exponentials for numerical stability.

use crate::bookshelf::WirelengthModel;
use crate::model::{Net, Netlist};

/// Per-net, per-axis weighted-average estimator state.
struct AxisWa {
    value: f64,
    /// d(bar+ - bar-)/dcoord per pin, aligned with net pin order
    grad: Vec<f64>,
}

fn wa_axis(coords: &[f64], gamma: f64) -> AxisWa {
    let n = coords.len();
    let max = coords.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = coords.iter().cloned().fold(f64::INFINITY, f64::min);
    // numerators/denominators of the shifted soft-max and soft-min
    let mut sp = 0.0;
    let mut np = 0.0;
    let mut sm = 0.0;
    let mut nm = 0.0;
    let ap: Vec<f64> = coords.iter().map(|&x| ((x - max) / gamma).exp()).collect();
    let am: Vec<f64> = coords.iter().map(|&x| ((min - x) / gamma).exp()).collect();
    for i in 0..n {
        sp += ap[i];
        np += coords[i] * ap[i];
        sm += am[i];
        nm += coords[i] * am[i];
    }
    let bar_p = np / sp;
    let bar_m = nm / sm;
    let grad = (0..n)
        .map(|i| {
            let gp = ap[i] / sp * (1.0 + (coords[i] - bar_p) / gamma);
            let gm = am[i] / sm * (1.0 - (coords[i] - bar_m) / gamma);
            gp - gm
        })
        .collect();
    AxisWa {
        value: bar_p - bar_m,
        grad,
    }
}

fn lse_axis(coords: &[f64], gamma: f64) -> AxisWa {
    let n = coords.len();
    let max = coords.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = coords.iter().cloned().fold(f64::INFINITY, f64::min);
    let ap: Vec<f64> = coords.iter().map(|&x| ((x - max) / gamma).exp()).collect();
    let am: Vec<f64> = coords.iter().map(|&x| ((min - x) / gamma).exp()).collect();
    let sp: f64 = ap.iter().sum();
    let sm: f64 = am.iter().sum();
    let value = max + gamma * sp.ln() + (-min + gamma * sm.ln());
    let grad = (0..n).map(|i| ap[i] / sp - am[i] / sm).collect();
    AxisWa { value, grad }
}

fn net_pin_coords(net: &Net, positions: &[(f64, f64)]) -> (Vec<f64>, Vec<f64>) {
    let xs = net
        .pins
        .iter()
        .map(|p| positions[p.instance].0 + p.dx)
        .collect();
    let ys = net
        .pins
        .iter()
        .map(|p| positions[p.instance].1 + p.dy)
        .collect();
    (xs, ys)
}

/// Smooth wirelength and its gradient with respect to instance
/// positions. Single-pin nets contribute nothing.
pub fn wirelength_and_grad(
    netlist: &Netlist,
    positions: &[(f64, f64)],
    gamma: f64,
    model: WirelengthModel,
) -> (f64, Vec<(f64, f64)>) {
    let axis = match model {
        WirelengthModel::Wa => wa_axis,
        WirelengthModel::Lse => lse_axis,
    };
    let mut total = 0.0;
    let mut grad = vec![(0.0, 0.0); netlist.instances.len()];
    for net in &netlist.nets {
        if net.pins.len() < 2 {
            continue;
        }
        let (xs, ys) = net_pin_coords(net, positions);
        let gx = axis(&xs, gamma);
        let gy = axis(&ys, gamma);
        total += net.weight * (gx.value + gy.value);
        for (pin, (dgx, dgy)) in net.pins.iter().zip(gx.grad.iter().zip(&gy.grad)) {
            grad[pin.instance].0 += net.weight * dgx;
            grad[pin.instance].1 += net.weight * dgy;
        }
    }
    (total, grad)
}
