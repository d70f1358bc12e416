//! Canonical netlist/placement data model and the evaluation metrics
//! (HPWL, bin density, overflow) the rest of the flow consumes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstanceKind {
    MovableCell,
    MovableMacro,
    FixedMacro,
    IoPin,
}

impl InstanceKind {
    pub fn is_fixed(self) -> bool {
        matches!(self, InstanceKind::FixedMacro | InstanceKind::IoPin)
    }

    pub fn is_movable(self) -> bool {
        !self.is_fixed()
    }
}

/// A placeable object. `position` is the lower-left corner (Bookshelf
/// .pl convention); centers are derived.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub id: usize,
    pub name: String,
    pub width: f64,
    pub height: f64,
    pub kind: InstanceKind,
    pub position: (f64, f64),
}

impl Instance {
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn center_of(&self, pos: (f64, f64)) -> (f64, f64) {
        (pos.0 + self.width / 2.0, pos.1 + self.height / 2.0)
    }

    pub fn center(&self) -> (f64, f64) {
        self.center_of(self.position)
    }
}

/// Pin offset is measured from the instance's lower-left corner.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Pin {
    pub instance: usize,
    pub dx: f64,
    pub dy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Net {
    pub id: usize,
    pub pins: Vec<Pin>,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlacementRegion {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
    pub num_bin_x: usize,
    pub num_bin_y: usize,
}

impl PlacementRegion {
    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (
            (self.xmin + self.xmax) / 2.0,
            (self.ymin + self.ymax) / 2.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xmax > self.xmin && self.ymax > self.ymin) {
            return Err(Error::Config(format!(
                "degenerate placement region [{},{}]x[{},{}]",
                self.xmin, self.xmax, self.ymin, self.ymax
            )));
        }
        if self.num_bin_x < 1 || self.num_bin_y < 1 {
            return Err(Error::Config("bin grid dims must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Netlist {
    pub instances: Vec<Instance>,
    pub nets: Vec<Net>,
    pub region: PlacementRegion,
}

impl Netlist {
    pub fn validate(&self) -> Result<()> {
        self.region.validate()?;
        for (i, inst) in self.instances.iter().enumerate() {
            if inst.id != i {
                return Err(Error::Config(format!(
                    "instance {} has non-dense id {}",
                    inst.name, inst.id
                )));
            }
            if inst.width < 0.0 || inst.height < 0.0 {
                return Err(Error::Config(format!(
                    "instance {} has negative footprint",
                    inst.name
                )));
            }
        }
        for net in &self.nets {
            if net.pins.is_empty() {
                return Err(Error::Config(format!("net {} has no pins", net.id)));
            }
            for pin in &net.pins {
                if pin.instance >= self.instances.len() {
                    return Err(Error::UnresolvablePin {
                        net: net.id,
                        instance: pin.instance,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn movable_count(&self) -> usize {
        self.instances.iter().filter(|i| i.kind.is_movable()).count()
    }

    pub fn fixed_count(&self) -> usize {
        self.instances.len() - self.movable_count()
    }

    pub fn pin_count(&self) -> usize {
        self.nets.iter().map(|n| n.pins.len()).sum()
    }

    pub fn movable_area(&self) -> f64 {
        self.instances
            .iter()
            .filter(|i| i.kind.is_movable())
            .map(|i| i.area())
            .sum()
    }

    /// Lower-left positions as stored on the instances.
    pub fn positions(&self) -> Vec<(f64, f64)> {
        self.instances.iter().map(|i| i.position).collect()
    }

    fn check_positions(&self, positions: &[(f64, f64)]) -> Result<()> {
        if positions.len() != self.instances.len() {
            return Err(Error::PositionCount {
                expected: self.instances.len(),
                got: positions.len(),
            });
        }
        Ok(())
    }
}

/// Per-bin occupancy (occupied area / bin area) on a uniform grid over
/// the placement region. Row-major, x fastest.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub nx: usize,
    pub ny: usize,
    pub xmin: f64,
    pub ymin: f64,
    pub bin_w: f64,
    pub bin_h: f64,
    pub rho: Vec<f64>,
}

impl DensityGrid {
    pub fn zeros(region: &PlacementRegion, nx: usize, ny: usize) -> Self {
        DensityGrid {
            nx,
            ny,
            xmin: region.xmin,
            ymin: region.ymin,
            bin_w: region.width() / nx as f64,
            bin_h: region.height() / ny as f64,
            rho: vec![0.0; nx * ny],
        }
    }

    pub fn bin_area(&self) -> f64 {
        self.bin_w * self.bin_h
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.rho[j * self.nx + i]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.rho[j * self.nx + i]
    }

    pub fn bin_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.xmin + (i as f64 + 0.5) * self.bin_w,
            self.ymin + (j as f64 + 0.5) * self.bin_h,
        )
    }

    /// Spread `area`-worth of a rectangle `[x0,x1]x[y0,y1]` onto the grid
    /// by exact rectangle intersection, clipped to the region, with the
    /// given density amplitude (area added per unit overlap).
    pub fn splat_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, amplitude: f64) {
        let xmax = self.xmin + self.bin_w * self.nx as f64;
        let ymax = self.ymin + self.bin_h * self.ny as f64;
        let x0 = x0.max(self.xmin);
        let y0 = y0.max(self.ymin);
        let x1 = x1.min(xmax);
        let y1 = y1.min(ymax);
        if x1 <= x0 || y1 <= y0 || amplitude == 0.0 {
            return;
        }
        let i0 = (((x0 - self.xmin) / self.bin_w).floor() as usize).min(self.nx - 1);
        let i1 = (((x1 - self.xmin) / self.bin_w).ceil() as usize).min(self.nx);
        let j0 = (((y0 - self.ymin) / self.bin_h).floor() as usize).min(self.ny - 1);
        let j1 = (((y1 - self.ymin) / self.bin_h).ceil() as usize).min(self.ny);
        let inv_bin_area = 1.0 / self.bin_area();
        for j in j0..j1 {
            let by0 = self.ymin + j as f64 * self.bin_h;
            let oy = (y1.min(by0 + self.bin_h) - y0.max(by0)).max(0.0);
            if oy == 0.0 {
                continue;
            }
            for i in i0..i1 {
                let bx0 = self.xmin + i as f64 * self.bin_w;
                let ox = (x1.min(bx0 + self.bin_w) - x0.max(bx0)).max(0.0);
                if ox > 0.0 {
                    self.rho[j * self.nx + i] += amplitude * ox * oy * inv_bin_area;
                }
            }
        }
    }
}

/// Weighted half-perimeter wirelength over all nets.
pub fn hpwl(netlist: &Netlist, positions: &[(f64, f64)]) -> Result<f64> {
    netlist.check_positions(positions)?;
    let mut total = 0.0;
    for net in &netlist.nets {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for pin in &net.pins {
            if pin.instance >= positions.len() {
                return Err(Error::UnresolvablePin {
                    net: net.id,
                    instance: pin.instance,
                });
            }
            let (px, py) = positions[pin.instance];
            let x = px + pin.dx;
            let y = py + pin.dy;
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        total += net.weight * ((xmax - xmin) + (ymax - ymin));
    }
    Ok(total)
}

/// Exact-overlap bin density of every instance at the given positions.
pub fn bin_density(
    netlist: &Netlist,
    positions: &[(f64, f64)],
    nx: usize,
    ny: usize,
) -> Result<DensityGrid> {
    netlist.check_positions(positions)?;
    if nx < 1 || ny < 1 {
        return Err(Error::Config("bin grid dims must be >= 1".into()));
    }
    let mut grid = DensityGrid::zeros(&netlist.region, nx, ny);
    for inst in &netlist.instances {
        let (x, y) = positions[inst.id];
        grid.splat_rect(x, y, x + inst.width, y + inst.height, 1.0);
    }
    Ok(grid)
}

/// Density overflow: sum of per-bin area above target, normalized by
/// the total movable area.
pub fn density_overflow(grid: &DensityGrid, rho_tgt: f64, movable_area: f64) -> Result<f64> {
    if rho_tgt <= 0.0 {
        return Err(Error::Config(format!(
            "target density must be positive, got {rho_tgt}"
        )));
    }
    if movable_area <= 0.0 {
        return Ok(0.0);
    }
    let bin_area = grid.bin_area();
    let excess: f64 = grid
        .rho
        .iter()
        .map(|&r| (r - rho_tgt).max(0.0) * bin_area)
        .sum();
    Ok(excess / movable_area)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn region(w: f64, h: f64, nx: usize, ny: usize) -> PlacementRegion {
        PlacementRegion {
            xmin: 0.0,
            ymin: 0.0,
            xmax: w,
            ymax: h,
            num_bin_x: nx,
            num_bin_y: ny,
        }
    }

    fn cell(id: usize, w: f64, h: f64, x: f64, y: f64) -> Instance {
        Instance {
            id,
            name: format!("o{id}"),
            width: w,
            height: h,
            kind: InstanceKind::MovableCell,
            position: (x, y),
        }
    }

    fn point_net(id: usize, pts: &[(usize, f64, f64)]) -> Net {
        Net {
            id,
            pins: pts
                .iter()
                .map(|&(instance, dx, dy)| Pin { instance, dx, dy })
                .collect(),
            weight: 1.0,
        }
    }

    #[test]
    fn hpwl_two_pin_net() {
        let nl = Netlist {
            instances: vec![cell(0, 0.0, 0.0, 0.0, 0.0), cell(1, 0.0, 0.0, 3.0, 4.0)],
            nets: vec![point_net(0, &[(0, 0.0, 0.0), (1, 0.0, 0.0)])],
            region: region(10.0, 10.0, 1, 1),
        };
        let p = nl.positions();
        assert_eq!(hpwl(&nl, &p).unwrap(), 7.0);
    }

    #[test]
    fn hpwl_single_pin_net_is_zero() {
        let nl = Netlist {
            instances: vec![cell(0, 0.0, 0.0, 2.0, 5.0)],
            nets: vec![point_net(0, &[(0, 0.0, 0.0)])],
            region: region(10.0, 10.0, 1, 1),
        };
        assert_eq!(hpwl(&nl, &nl.positions()).unwrap(), 0.0);
    }

    #[test]
    fn hpwl_matches_per_net_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let instances: Vec<Instance> = (0..50)
            .map(|id| cell(id, 0.0, 0.0, rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect();
        let nets: Vec<Net> = (0..20)
            .map(|id| {
                let deg = rng.gen_range(2..6);
                point_net(
                    id,
                    &(0..deg)
                        .map(|_| (rng.gen_range(0..50usize), 0.0, 0.0))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let nl = Netlist {
            instances,
            nets,
            region: region(100.0, 100.0, 1, 1),
        };
        let p = nl.positions();
        // independent per-net min/max recomputation
        let mut oracle = 0.0;
        for net in &nl.nets {
            let xs: Vec<f64> = net.pins.iter().map(|q| p[q.instance].0 + q.dx).collect();
            let ys: Vec<f64> = net.pins.iter().map(|q| p[q.instance].1 + q.dy).collect();
            let fmax = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let fmin = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
            oracle += (fmax(&xs) - fmin(&xs)) + (fmax(&ys) - fmin(&ys));
        }
        let got = hpwl(&nl, &p).unwrap();
        assert!((got - oracle).abs() <= 1e-9 * oracle.abs().max(1.0));
    }

    #[test]
    fn hpwl_unresolvable_pin_names_net() {
        let nl = Netlist {
            instances: vec![cell(0, 0.0, 0.0, 0.0, 0.0)],
            nets: vec![point_net(3, &[(5, 0.0, 0.0)])],
            region: region(10.0, 10.0, 1, 1),
        };
        match nl.validate() {
            Err(Error::UnresolvablePin { net, instance }) => {
                assert_eq!(net, 3);
                assert_eq!(instance, 5);
            }
            other => panic!("expected UnresolvablePin, got {other:?}"),
        }
    }

    #[test]
    fn bin_density_cell_coinciding_with_bin() {
        let nl = Netlist {
            instances: vec![cell(0, 5.0, 5.0, 5.0, 0.0)],
            nets: vec![],
            region: region(10.0, 10.0, 2, 2),
        };
        let g = bin_density(&nl, &nl.positions(), 2, 2).unwrap();
        assert!((g.at(1, 0) - 1.0).abs() < 1e-12);
        assert_eq!(g.at(0, 0), 0.0);
        assert_eq!(g.at(0, 1), 0.0);
        assert_eq!(g.at(1, 1), 0.0);
    }

    #[test]
    fn bin_density_empty_netlist() {
        let nl = Netlist {
            instances: vec![],
            nets: vec![],
            region: region(10.0, 10.0, 4, 4),
        };
        let g = bin_density(&nl, &[], 4, 4).unwrap();
        assert!(g.rho.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn bin_density_straddling_split() {
        // cell of width 1 covering x in [4.7, 5.7] over a 2-bin grid split at 5:
        // 30% of its area in bin 0, 70% in bin 1
        let nl = Netlist {
            instances: vec![cell(0, 1.0, 10.0, 4.7, 0.0)],
            nets: vec![],
            region: region(10.0, 10.0, 2, 1),
        };
        let g = bin_density(&nl, &nl.positions(), 2, 1).unwrap();
        let bin_area = g.bin_area();
        assert!((g.at(0, 0) * bin_area - 3.0).abs() < 1e-9);
        assert!((g.at(1, 0) * bin_area - 7.0).abs() < 1e-9);
    }

    #[test]
    fn overflow_uniform_at_target_is_zero() {
        let mut g = DensityGrid::zeros(&region(10.0, 10.0, 4, 4), 4, 4);
        g.rho.iter_mut().for_each(|r| *r = 0.8);
        assert_eq!(density_overflow(&g, 0.8, 50.0).unwrap(), 0.0);
    }

    #[test]
    fn overflow_single_hot_bin() {
        let mut g = DensityGrid::zeros(&region(10.0, 10.0, 2, 2), 2, 2);
        *g.at_mut(0, 0) = 1.0;
        let bin_area = g.bin_area();
        let movable = bin_area; // that bin holds all movable area
        let got = density_overflow(&g, 0.5, movable).unwrap();
        assert!((got - 0.5 * bin_area / movable).abs() < 1e-12);
    }

    #[test]
    fn overflow_zero_grid_and_bad_target() {
        let g = DensityGrid::zeros(&region(10.0, 10.0, 2, 2), 2, 2);
        assert_eq!(density_overflow(&g, 1.0, 10.0).unwrap(), 0.0);
        assert!(density_overflow(&g, 0.0, 10.0).is_err());
    }

    #[test]
    fn overflow_monotone_in_target() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut g = DensityGrid::zeros(&region(10.0, 10.0, 4, 4), 4, 4);
        g.rho.iter_mut().for_each(|r| *r = rng.gen_range(0.0..2.0));
        let lo = density_overflow(&g, 1.0, 25.0).unwrap();
        let hi = density_overflow(&g, 0.5, 25.0).unwrap();
        assert!(lo <= hi);
    }

    proptest::proptest! {
        #[test]
        fn hpwl_translation_invariant(shift_x in -50.0f64..50.0, shift_y in -50.0f64..50.0,
                                      seed in 0u64..32) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let instances: Vec<Instance> = (0..10)
                .map(|id| cell(id, 0.0, 0.0, rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
                .collect();
            let nets = vec![point_net(0, &[(0,0.0,0.0),(3,0.0,0.0),(7,0.0,0.0)])];
            let nl = Netlist { instances, nets, region: region(100.0, 100.0, 1, 1) };
            let p = nl.positions();
            let shifted: Vec<(f64,f64)> = p.iter().map(|&(x,y)| (x+shift_x, y+shift_y)).collect();
            let a = hpwl(&nl, &p).unwrap();
            let b = hpwl(&nl, &shifted).unwrap();
            proptest::prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }

        #[test]
        fn bin_density_conserves_mass(seed in 0u64..32) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let instances: Vec<Instance> = (0..20)
                .map(|id| cell(id, rng.gen_range(0.5..8.0), rng.gen_range(0.5..8.0),
                               rng.gen_range(-2.0..95.0), rng.gen_range(-2.0..95.0)))
                .collect();
            let nl = Netlist { instances, nets: vec![], region: region(100.0, 100.0, 7, 5) };
            let g = bin_density(&nl, &nl.positions(), 7, 5).unwrap();
            let bin_area = g.bin_area();
            let total: f64 = g.rho.iter().map(|&r| r * bin_area).sum();
            // clipped-to-region area oracle
            let clipped: f64 = nl.instances.iter().map(|i| {
                let (x, y) = i.position;
                let ox = (x + i.width).min(100.0) - x.max(0.0);
                let oy = (y + i.height).min(100.0) - y.max(0.0);
                ox.max(0.0) * oy.max(0.0)
            }).sum();
            proptest::prop_assert!((total - clipped).abs() <= 1e-9 * clipped.max(1.0));
        }
    }
}
