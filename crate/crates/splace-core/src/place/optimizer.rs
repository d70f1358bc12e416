//! Accelerated-gradient global placement loop: smooth wirelength plus a
//! weighted electrostatic density penalty, minimized with Nesterov
//! momentum and a backtracking step size, with iteration-scheduled
//! fixed-macro charges and multiplicative density-weight adaptation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{density_overflow, hpwl, DensityGrid, Netlist};
use crate::schedule::ScheduleSpec;

use super::density::smoothed_density;
use super::poisson::{density_gradient, field_energy, PoissonSolver};
use super::wirelength::wirelength_and_grad;
use super::PlacerConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub hpwl: f64,
    pub overflow: f64,
    pub smooth_wirelength: f64,
    pub lambda: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacementResult {
    pub positions: Vec<(f64, f64)>,
    pub hpwl: f64,
    pub overflow: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TracePoint>,
}

/// Movable-area overflow against the per-bin capacity left over by the
/// fixed objects: excess_b = max(0, movArea_b - tgt*(binArea - fixArea_b)),
/// summed and normalized by the total movable area.
pub fn movable_overflow(
    netlist: &Netlist,
    positions: &[(f64, f64)],
    nx: usize,
    ny: usize,
    rho_tgt: f64,
) -> Result<f64> {
    let mut mov = DensityGrid::zeros(&netlist.region, nx, ny);
    let mut cap = DensityGrid::zeros(&netlist.region, nx, ny);
    for inst in &netlist.instances {
        let (x, y) = positions[inst.id];
        let grid = if inst.kind.is_movable() { &mut mov } else { &mut cap };
        grid.splat_rect(x, y, x + inst.width, y + inst.height, 1.0);
    }
    for (m, f) in mov.rho.iter_mut().zip(&cap.rho) {
        *m = (*m - rho_tgt * (1.0 - f).max(0.0)).max(0.0);
    }
    density_overflow(&mov, f64::MIN_POSITIVE, netlist.movable_area())
}

fn clamp_positions(netlist: &Netlist, positions: &mut [(f64, f64)]) {
    let r = &netlist.region;
    for inst in &netlist.instances {
        if inst.kind.is_fixed() {
            continue;
        }
        let p = &mut positions[inst.id];
        p.0 = p.0.clamp(r.xmin, (r.xmax - inst.width).max(r.xmin));
        p.1 = p.1.clamp(r.ymin, (r.ymax - inst.height).max(r.ymin));
    }
}

/// Wirelength smoothing annealed with the bin size and the current
/// overflow: 10x the mean bin pitch when fully overflowed down to 0.1x
/// when resolved, scaled by the config base (4.0 is neutral).
fn annealed_gamma(cfg: &PlacerConfig, bin_mean: f64, overflow: f64) -> f64 {
    cfg.gamma / 4.0 * bin_mean * 10f64.powf(2.0 * overflow.min(1.0) - 1.0)
}

struct Evaluator<'a> {
    netlist: &'a Netlist,
    cfg: &'a PlacerConfig,
    schedule: Option<&'a ScheduleSpec>,
    solver: PoissonSolver,
}

struct Eval {
    objective: f64,
    smooth_wirelength: f64,
    grad: Vec<(f64, f64)>,
}

impl<'a> Evaluator<'a> {
    fn eval(
        &self,
        positions: &[(f64, f64)],
        t: usize,
        gamma: f64,
        lambda: f64,
        want_grad: bool,
    ) -> Result<Eval> {
        let cfg = self.cfg;
        let grid = smoothed_density(
            self.netlist,
            positions,
            cfg.num_bin_x,
            cfg.num_bin_y,
            self.schedule,
            t,
            cfg.target_density,
        )?;
        let sol = self.solver.solve(&grid, cfg.epsilon);
        let energy = field_energy(&grid, &sol);
        let (w, wgrad) = wirelength_and_grad(self.netlist, positions, gamma, cfg.wirelength);
        let grad = if want_grad {
            let dgrad = density_gradient(self.netlist, positions, &sol);
            self.netlist
                .instances
                .iter()
                .map(|inst| {
                    if inst.kind.is_fixed() {
                        (0.0, 0.0)
                    } else {
                        let i = inst.id;
                        (
                            wgrad[i].0 + lambda * dgrad[i].0,
                            wgrad[i].1 + lambda * dgrad[i].1,
                        )
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Eval {
            objective: w + lambda * energy,
            smooth_wirelength: w,
            grad,
        })
    }
}

/// Runs the global placement loop from the given initial positions.
/// Fixed objects never move; movables are clamped to the region each
/// step. Returns immediately when the start is already feasible.
pub fn run_global_placement(
    netlist: &Netlist,
    initial: &[(f64, f64)],
    cfg: &PlacerConfig,
    schedule: Option<&ScheduleSpec>,
) -> Result<PlacementResult> {
    cfg.validate()?;
    netlist.validate()?;
    if initial.len() != netlist.instances.len() {
        return Err(Error::PositionCount {
            expected: netlist.instances.len(),
            got: initial.len(),
        });
    }

    let mut x: Vec<(f64, f64)> = initial.to_vec();
    clamp_positions(netlist, &mut x);
    let (nx, ny) = (cfg.num_bin_x, cfg.num_bin_y);
    let bin_mean = (netlist.region.width() / nx as f64 + netlist.region.height() / ny as f64) / 2.0;

    let mut overflow = movable_overflow(netlist, &x, nx, ny, cfg.target_density)?;
    let mut cur_hpwl = hpwl(netlist, &x)?;
    if overflow <= cfg.stop_overflow {
        return Ok(PlacementResult {
            positions: x,
            hpwl: cur_hpwl,
            overflow,
            iterations: 0,
            converged: true,
            trace: Vec::new(),
        });
    }

    let probe = DensityGrid::zeros(&netlist.region, nx, ny);
    let ev = Evaluator {
        netlist,
        cfg,
        schedule,
        solver: PoissonSolver::new(&probe),
    };

    // seed the density weight so both gradient terms start comparable
    let mut gamma = annealed_gamma(cfg, bin_mean, overflow);
    let mut lambda = {
        let grid = smoothed_density(netlist, &x, nx, ny, schedule, 0, cfg.target_density)?;
        let sol = ev.solver.solve(&grid, cfg.epsilon);
        let (_, wgrad) = wirelength_and_grad(netlist, &x, gamma, cfg.wirelength);
        let dgrad = density_gradient(netlist, &x, &sol);
        let sw: f64 = wgrad.iter().map(|g| g.0.abs() + g.1.abs()).sum();
        let sd: f64 = dgrad.iter().map(|g| g.0.abs() + g.1.abs()).sum();
        if sd > 0.0 {
            cfg.density_weight * sw.max(1e-12) / sd
        } else {
            cfg.density_weight
        }
    };

    // The weight-adaptation reference is meant to be of the order of a
    // per-iteration wirelength change; on small designs a full-scale
    // absolute reference would mute the feedback entirely (the exponent
    // stays ~1 and the weight grows unboundedly), so cap it relative to
    // the starting wirelength.
    let ref_hpwl = cfg.ref_hpwl.min(0.1 * cur_hpwl).max(f64::MIN_POSITIVE);

    let alpha0 = cfg.learning_rate * netlist.region.width().max(netlist.region.height());
    let mut alpha = alpha0;
    let mut x_prev = x.clone();
    let mut momentum = 1.0f64; // FISTA t_k
    let mut last_obj = f64::INFINITY;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    // wirelength-recovery polish: once feasible, keep iterating with the
    // density weight frozen and remember the best feasible snapshot
    let mut polish_left: Option<usize> = None;
    let mut best: Option<(Vec<(f64, f64)>, f64, f64)> = None;

    for t in 0..cfg.max_iterations {
        iterations = t + 1;
        let momentum_next = (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt()) / 2.0;
        let beta = (momentum - 1.0) / momentum_next;

        let mut y: Vec<(f64, f64)> = x
            .iter()
            .zip(&x_prev)
            .map(|(&(xc, yc), &(px, py))| (xc + beta * (xc - px), yc + beta * (yc - py)))
            .collect();
        clamp_positions(netlist, &mut y);

        let at_y = ev.eval(&y, t, gamma, lambda, true)?;
        if !at_y.objective.is_finite() {
            return Err(Error::Diverged {
                iteration: t,
                msg: format!("objective became non-finite at the lookahead point ({} trace rows recorded)", trace.len()),
            });
        }

        let mut accepted = x.clone();
        let mut accepted_obj = f64::INFINITY;
        for _ in 0..30 {
            let mut cand: Vec<(f64, f64)> = y
                .iter()
                .zip(&at_y.grad)
                .map(|(&(yx, yy), &(gx, gy))| (yx - alpha * gx, yy - alpha * gy))
                .collect();
            clamp_positions(netlist, &mut cand);
            let f = ev.eval(&cand, t, gamma, lambda, false)?.objective;
            if !f.is_finite() {
                alpha /= 2.0;
                continue;
            }
            if f <= at_y.objective {
                accepted = cand;
                accepted_obj = f;
                break;
            }
            alpha /= 2.0;
        }
        if !accepted_obj.is_finite() {
            // even the fully damped step increased the objective: keep
            // the previous iterate and shrink further next round
            accepted = x.clone();
            accepted_obj = at_y.objective;
        }
        alpha = (alpha * 1.05).min(alpha0 * 100.0);

        x_prev = x;
        x = accepted;
        // adaptive restart: runaway momentum shows up as an objective
        // increase; dropping back to a plain gradient step keeps the
        // extrapolation from compounding
        momentum = if accepted_obj > last_obj {
            1.0
        } else {
            momentum_next
        };
        last_obj = accepted_obj;

        let new_hpwl = hpwl(netlist, &x)?;
        overflow = movable_overflow(netlist, &x, nx, ny, cfg.target_density)?;
        if polish_left.is_none() {
            let mu = cfg
                .upper_pcof
                .powf(1.0 - (new_hpwl - cur_hpwl) / ref_hpwl)
                .clamp(cfg.lower_pcof, cfg.upper_pcof);
            lambda *= mu;
        }
        cur_hpwl = new_hpwl;
        gamma = annealed_gamma(cfg, bin_mean, overflow);

        trace.push(TracePoint {
            iteration: t,
            hpwl: cur_hpwl,
            overflow,
            smooth_wirelength: at_y.smooth_wirelength,
            lambda,
            gamma,
        });

        match polish_left {
            None => {
                if overflow <= cfg.stop_overflow {
                    converged = true;
                    best = Some((x.clone(), cur_hpwl, overflow));
                    if cfg.polish_iterations == 0 {
                        break;
                    }
                    // restart the acceleration for the frozen-weight phase
                    polish_left = Some(cfg.polish_iterations);
                    momentum = 1.0;
                }
            }
            Some(ref mut left) => {
                if overflow <= cfg.stop_overflow {
                    if best.as_ref().is_none_or(|b| cur_hpwl < b.1) {
                        best = Some((x.clone(), cur_hpwl, overflow));
                    }
                }
                *left -= 1;
                if *left == 0 {
                    break;
                }
            }
        }
    }

    if let Some((bx, bh, bo)) = best {
        x = bx;
        cur_hpwl = bh;
        overflow = bo;
    }
    Ok(PlacementResult {
        positions: x,
        hpwl: cur_hpwl,
        overflow,
        iterations,
        converged,
        trace,
    })
}
