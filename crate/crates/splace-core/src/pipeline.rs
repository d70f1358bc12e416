//! End-to-end placement flow: spectral initialization, signed-graph
//! refinement, and the macro-scheduled electrostatics placer, driven
//! from one [`RunConfig`]. The stage ablation switches mirror the CLI
//! flags.

use std::time::Instant;

use crate::bookshelf::RunConfig;
use crate::error::Result;
use crate::hint::{refine, HintConfig};
use crate::init::{gsp_initialize, InitConfig};
use crate::model::Netlist;
use crate::place::{run_global_placement, PlacementResult, PlacerConfig};
use crate::report::RunReport;
use crate::schedule::ScheduleSpec;
use crate::spectral::GraphSignal;

pub fn init_config(cfg: &RunConfig) -> InitConfig {
    InitConfig {
        band: cfg.band_filter(),
        seed: cfg.seed,
        window: cfg.init_window,
        rescale: cfg.init_rescale,
        max_net_degree: cfg.max_net_degree,
    }
}

pub fn hint_config(cfg: &RunConfig) -> HintConfig {
    HintConfig {
        iterations: cfg.refine_iteration as usize,
        relax: cfg.refine_relax,
        num_bin_x: cfg.refine_num_bin_xy,
        num_bin_y: cfg.refine_num_bin_xy,
        detection_ratio: cfg.detection_ratio,
        bin_capacity: cfg.bin_capacity(),
        mu: cfg.refine_mu,
        filter_k: cfg.refine_filter_k as usize,
        max_net_degree: cfg.max_net_degree,
    }
}

pub fn schedule_spec(cfg: &RunConfig) -> ScheduleSpec {
    ScheduleSpec {
        model: cfg.schedule_model,
        horizon: cfg.schedule_iteration as usize,
        sigma_factor: cfg.sigma_factor,
        k_factor: cfg.k_factor,
        ..ScheduleSpec::default()
    }
}

pub fn placer_config(cfg: &RunConfig) -> PlacerConfig {
    PlacerConfig {
        wirelength: cfg.gp_wirelength,
        gamma: cfg.gamma,
        density_weight: cfg.density_weight,
        target_density: cfg.target_density,
        learning_rate: cfg.gp_learning_rate,
        max_iterations: cfg.gp_max_iteration as usize,
        stop_overflow: cfg.stop_overflow,
        num_bin_x: cfg.num_bin_x,
        num_bin_y: cfg.num_bin_y,
        ref_hpwl: cfg.ref_hpwl,
        lower_pcof: cfg.lower_pcof,
        upper_pcof: cfg.upper_pcof,
        ..PlacerConfig::default()
    }
}

/// Stage switches for ablation studies.
#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// start from uniform-random positions instead of the spectral init
    pub random_init: bool,
    /// skip the signed-graph refinement stage
    pub skip_refine: bool,
    /// place with hard macro footprints instead of the scheduled charge
    pub skip_schedule: bool,
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub result: PlacementResult,
    pub report: RunReport,
}

fn centers_signal(netlist: &Netlist, positions: &[(f64, f64)]) -> GraphSignal {
    let mut sig = GraphSignal {
        x: Vec::with_capacity(positions.len()),
        y: Vec::with_capacity(positions.len()),
    };
    for (inst, &pos) in netlist.instances.iter().zip(positions) {
        let (cx, cy) = inst.center_of(pos);
        sig.x.push(cx);
        sig.y.push(cy);
    }
    sig
}

fn positions_from_centers(netlist: &Netlist, sig: &GraphSignal) -> Vec<(f64, f64)> {
    netlist
        .instances
        .iter()
        .map(|inst| {
            if inst.kind.is_fixed() {
                inst.position
            } else {
                (
                    sig.x[inst.id] - inst.width / 2.0,
                    sig.y[inst.id] - inst.height / 2.0,
                )
            }
        })
        .collect()
}

/// Spectral initialization positions only (stage 1).
pub fn initial_positions(
    netlist: &Netlist,
    cfg: &RunConfig,
    opts: &PipelineOptions,
) -> Result<Vec<(f64, f64)>> {
    if opts.random_init {
        let sig = crate::init::random_signal(netlist, cfg.seed, cfg.init_window);
        Ok(positions_from_centers(netlist, &sig))
    } else {
        gsp_initialize(netlist, &init_config(cfg))
    }
}

/// Refinement applied to existing positions (stage 2).
pub fn refine_positions(
    netlist: &Netlist,
    positions: &[(f64, f64)],
    cfg: &RunConfig,
) -> Result<Vec<(f64, f64)>> {
    let sig = centers_signal(netlist, positions);
    let refined = refine(netlist, &sig, &hint_config(cfg))?;
    Ok(positions_from_centers(netlist, &refined))
}

fn run_single_start(
    netlist: &Netlist,
    cfg: &RunConfig,
    opts: &PipelineOptions,
    report: &mut RunReport,
) -> Result<PlacementResult> {
    let t = Instant::now();
    let mut positions = initial_positions(netlist, cfg, opts)?;
    report.times.init_s += t.elapsed().as_secs_f64();

    if !opts.skip_refine {
        let t = Instant::now();
        positions = refine_positions(netlist, &positions, cfg)?;
        report.times.refine_s += t.elapsed().as_secs_f64();
    }

    let t = Instant::now();
    let schedule = schedule_spec(cfg);
    let schedule_ref = if opts.skip_schedule { None } else { Some(&schedule) };
    let result = run_global_placement(netlist, &positions, &placer_config(cfg), schedule_ref)?;
    report.times.place_s += t.elapsed().as_secs_f64();
    Ok(result)
}

/// A converged run with lower wirelength wins; a converged run always
/// beats a stuck one, and between two stuck runs less overflow wins.
fn better(candidate: &PlacementResult, incumbent: &PlacementResult) -> bool {
    match (candidate.converged, incumbent.converged) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => candidate.hpwl < incumbent.hpwl,
        (false, false) => candidate.overflow < incumbent.overflow,
    }
}

/// Runs the full flow and reports post-placement metrics. With
/// `num_starts > 1` the whole flow is repeated from decorrelated seeds
/// and the best placement is kept; this buys seed stability at desk
/// scale, where a single start's outcome still carries noticeable
/// initialization noise.
pub fn run_pipeline(
    netlist: &Netlist,
    design: &str,
    cfg: &RunConfig,
    opts: &PipelineOptions,
) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let mut report = RunReport::new(design, cfg.hash(), cfg.seed);

    let mut best: Option<PlacementResult> = None;
    for start in 0..cfg.num_starts.max(1) as u64 {
        let mut sub = cfg.clone();
        if start > 0 {
            // golden-ratio stride decorrelates the restart seeds
            sub.seed = cfg.seed ^ start.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
        let result = run_single_start(netlist, &sub, opts, &mut report)?;
        if best.as_ref().is_none_or(|b| better(&result, b)) {
            best = Some(result);
        }
    }
    let result = best.expect("at least one start ran");

    report.hpwl = result.hpwl;
    report.overflow = result.overflow;
    report.iterations = result.iterations;
    report.converged = result.converged;
    Ok(PipelineOutcome { result, report })
}
