//! Smoothed bin-density construction for the electrostatic penalty.
//! Movable objects spread their area with a smooth box kernel (their
//! rectangle dilated to at least one bin per axis, overlap-weighted at
//! partial bins); fixed macros contribute their scheduled charge.

use crate::error::Result;
use crate::model::{DensityGrid, InstanceKind, Netlist};
use crate::schedule::{macro_bin_contribution, MacroCharge, ScheduleSpec};

/// Splats one object of area `area` centered at (cx, cy) with the
/// dilated box kernel.
fn splat_smooth(grid: &mut DensityGrid, cx: f64, cy: f64, w: f64, h: f64, area: f64) {
    if area <= 0.0 {
        return;
    }
    let sw = w.max(grid.bin_w);
    let sh = h.max(grid.bin_h);
    let amplitude = area / (sw * sh);
    grid.splat_rect(cx - sw / 2.0, cy - sh / 2.0, cx + sw / 2.0, cy + sh / 2.0, amplitude);
}

/// Builds the density grid at iteration `t`. Movable instances use the
/// smooth box kernel; fixed macros contribute `amplitude` x their
/// scheduled charge (or, with no schedule, their hard footprint at the
/// same amplitude). I/O pads are zero-area and contribute nothing.
pub fn smoothed_density(
    netlist: &Netlist,
    positions: &[(f64, f64)],
    nx: usize,
    ny: usize,
    schedule: Option<&ScheduleSpec>,
    t: usize,
    macro_amplitude: f64,
) -> Result<DensityGrid> {
    let mut grid = DensityGrid::zeros(&netlist.region, nx, ny);
    for inst in &netlist.instances {
        let (x, y) = positions[inst.id];
        let (cx, cy) = (x + inst.width / 2.0, y + inst.height / 2.0);
        match inst.kind {
            InstanceKind::MovableCell | InstanceKind::MovableMacro => {
                splat_smooth(&mut grid, cx, cy, inst.width, inst.height, inst.area());
            }
            InstanceKind::FixedMacro => {
                let charge = MacroCharge {
                    macro_id: inst.id,
                    center: (cx, cy),
                    width: inst.width,
                    height: inst.height,
                    amplitude: macro_amplitude,
                };
                match schedule {
                    Some(spec) => macro_bin_contribution(&charge, spec, t, &mut grid)?,
                    None => grid.splat_rect(x, y, x + inst.width, y + inst.height, macro_amplitude),
                }
            }
            InstanceKind::IoPin => {}
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bookshelf::ScheduleModel;
    use crate::model::{Instance, PlacementRegion};

    fn netlist_of(instances: Vec<Instance>) -> Netlist {
        Netlist {
            instances,
            nets: vec![],
            region: PlacementRegion {
                xmin: 0.0,
                ymin: 0.0,
                xmax: 16.0,
                ymax: 16.0,
                num_bin_x: 16,
                num_bin_y: 16,
            },
        }
    }

    fn inst(id: usize, kind: InstanceKind, x: f64, y: f64, w: f64, h: f64) -> Instance {
        Instance {
            id,
            name: format!("i{id}"),
            width: w,
            height: h,
            kind,
            position: (x, y),
        }
    }

    #[test]
    fn empty_design_zero_grid() {
        let nl = netlist_of(vec![]);
        let g = smoothed_density(&nl, &[], 16, 16, None, 0, 1.0).unwrap();
        assert!(g.rho.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn single_cell_mass_preserved() {
        // sub-bin cell: the kernel dilates to one bin but conserves area
        let nl = netlist_of(vec![inst(0, InstanceKind::MovableCell, 4.3, 7.8, 0.4, 0.6)]);
        let pos = nl.positions();
        let g = smoothed_density(&nl, &pos, 16, 16, None, 0, 1.0).unwrap();
        let mass: f64 = g.rho.iter().sum::<f64>() * g.bin_w * g.bin_h;
        assert!((mass - 0.24).abs() < 1e-9, "{mass}");
        // wide flat cell dilates only the short axis
        let nl = netlist_of(vec![inst(0, InstanceKind::MovableCell, 2.0, 2.0, 5.0, 0.2)]);
        let pos = nl.positions();
        let g = smoothed_density(&nl, &pos, 16, 16, None, 0, 1.0).unwrap();
        let mass: f64 = g.rho.iter().sum::<f64>() * g.bin_w * g.bin_h;
        assert!((mass - 1.0).abs() < 1e-9, "{mass}");
    }

    #[test]
    fn snapped_macro_is_exact_footprint() {
        let nl = netlist_of(vec![inst(0, InstanceKind::FixedMacro, 6.0, 6.0, 4.0, 4.0)]);
        let pos = nl.positions();
        let spec = ScheduleSpec {
            model: ScheduleModel::SigmoidRestoration,
            ..Default::default()
        };
        let t = spec.snap_iteration();
        let scheduled = smoothed_density(&nl, &pos, 16, 16, Some(&spec), t, 0.9).unwrap();
        let hard = smoothed_density(&nl, &pos, 16, 16, None, 0, 0.9).unwrap();
        for (a, b) in scheduled.rho.iter().zip(&hard.rho) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn io_pins_contribute_nothing() {
        let nl = netlist_of(vec![inst(0, InstanceKind::IoPin, 1.0, 1.0, 0.0, 0.0)]);
        let pos = nl.positions();
        let g = smoothed_density(&nl, &pos, 16, 16, None, 0, 1.0).unwrap();
        assert!(g.rho.iter().all(|&r| r == 0.0));
    }
}
