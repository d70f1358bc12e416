use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceKind, Net, Netlist, Pin, PlacementRegion};

use super::DesignBundle;

/// Deterministic macro-heavy synthetic design recipe. The same spec and
/// seed always produce the identical design.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub cells: usize,
    pub macros: usize,
    /// macro side lengths as fractions of the region dims
    pub macro_size_range: (f64, f64),
    /// mean of the geometric net-degree distribution (>= 2)
    pub mean_net_degree: f64,
    /// probability a net is drawn within one cluster
    pub clustering: f64,
    pub region_w: f64,
    pub region_h: f64,
    pub seed: u64,
    /// fraction of macro-free area covered by cells
    pub cell_utilization: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            cells: 500,
            macros: 4,
            macro_size_range: (0.12, 0.25),
            mean_net_degree: 3.0,
            clustering: 0.5,
            region_w: 100.0,
            region_h: 100.0,
            seed: 1,
            cell_utilization: 0.45,
        }
    }
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.macro_size_range;
        if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
            return Err(Error::InfeasibleSpec(format!(
                "macro size range ({lo}, {hi}) must lie in (0,1)"
            )));
        }
        if !(0.0..=1.0).contains(&self.clustering) {
            return Err(Error::InfeasibleSpec("clustering factor must be in [0,1]".into()));
        }
        if self.region_w <= 0.0 || self.region_h <= 0.0 {
            return Err(Error::InfeasibleSpec("region dims must be positive".into()));
        }
        if self.cells > 0 && self.mean_net_degree < 2.0 {
            return Err(Error::InfeasibleSpec("mean net degree must be >= 2".into()));
        }
        if !(0.0 < self.cell_utilization && self.cell_utilization < 1.0) {
            return Err(Error::InfeasibleSpec("cell utilization must be in (0,1)".into()));
        }
        Ok(())
    }
}

/// Generates a deterministic macro-heavy design: fixed macros on a
/// jittered grid, clustered cells, geometric net degrees. Nets are
/// drawn within a cluster with probability equal to the clustering
/// factor, else uniformly across all cells.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<DesignBundle> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (rw, rh) = (spec.region_w, spec.region_h);

    let mut instances: Vec<Instance> = Vec::with_capacity(spec.cells + spec.macros);

    // macros on a jittered grid
    let grid = (spec.macros as f64).sqrt().ceil().max(1.0) as usize;
    let mut macro_area = 0.0;
    for m in 0..spec.macros {
        let (gi, gj) = (m % grid, m / grid);
        let w = rng.gen_range(spec.macro_size_range.0..=spec.macro_size_range.1) * rw;
        let h = rng.gen_range(spec.macro_size_range.0..=spec.macro_size_range.1) * rh;
        let (cell_w, cell_h) = (rw / grid as f64, rh / grid as f64);
        let jitter = 0.2;
        let cx = (gi as f64 + 0.5 + rng.gen_range(-jitter..jitter)) * cell_w;
        let cy = (gj as f64 + 0.5 + rng.gen_range(-jitter..jitter)) * cell_h;
        let x = (cx - w / 2.0).clamp(0.0, (rw - w).max(0.0));
        let y = (cy - h / 2.0).clamp(0.0, (rh - h).max(0.0));
        macro_area += w * h;
        instances.push(Instance {
            id: instances.len(),
            name: format!("m{m}"),
            width: w,
            height: h,
            kind: InstanceKind::FixedMacro,
            position: (x, y),
        });
    }
    let free = rw * rh - macro_area;
    if free <= 0.0 {
        return Err(Error::InfeasibleSpec(format!(
            "total macro area {macro_area} exceeds region area {}",
            rw * rh
        )));
    }

    // uniform square cells sized to hit the requested utilization
    let cell_side = if spec.cells > 0 {
        (spec.cell_utilization * free / spec.cells as f64).sqrt()
    } else {
        0.0
    };
    let center = ((rw - cell_side) / 2.0, (rh - cell_side) / 2.0);
    let first_cell = instances.len();
    for c in 0..spec.cells {
        instances.push(Instance {
            id: instances.len(),
            name: format!("c{c}"),
            width: cell_side,
            height: cell_side,
            kind: InstanceKind::MovableCell,
            position: center,
        });
    }

    // cluster assignment
    let num_clusters = ((spec.cells as f64).sqrt() / 2.0).round().max(1.0) as usize;
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); num_clusters];
    for c in 0..spec.cells {
        clusters[rng.gen_range(0..num_clusters)].push(first_cell + c);
    }

    // geometric net degrees: d = 2 + Geom(p), E[d] = mean
    let p = (1.0 / (spec.mean_net_degree - 1.0)).clamp(1e-6, 1.0);
    let num_nets = if spec.cells >= 2 { spec.cells } else { 0 };
    let all_cells: Vec<usize> = (first_cell..first_cell + spec.cells).collect();
    let mut nets = Vec::with_capacity(num_nets);
    for id in 0..num_nets {
        let mut degree = 2usize;
        while rng.gen::<f64>() > p && degree < 12 {
            degree += 1;
        }
        let pool: &[usize] = if rng.gen::<f64>() < spec.clustering {
            let cl = &clusters[rng.gen_range(0..num_clusters)];
            if cl.len() >= 2 {
                cl
            } else {
                &all_cells
            }
        } else {
            &all_cells
        };
        let degree = degree.min(pool.len());
        let chosen: Vec<usize> = pool.choose_multiple(&mut rng, degree).cloned().collect();
        let pins = chosen
            .into_iter()
            .map(|instance| Pin {
                instance,
                dx: instances[instance].width / 2.0,
                dy: instances[instance].height / 2.0,
            })
            .collect();
        nets.push(Net {
            id,
            pins,
            weight: 1.0,
        });
    }

    let netlist = Netlist {
        instances,
        nets,
        region: PlacementRegion {
            xmin: 0.0,
            ymin: 0.0,
            xmax: rw,
            ymax: rh,
            num_bin_x: 32,
            num_bin_y: 32,
        },
    };
    netlist.validate()?;
    let positions = netlist.positions();
    Ok(DesignBundle {
        netlist,
        positions,
        source: format!("synthetic(cells={}, macros={}, seed={})", spec.cells, spec.macros, spec.seed),
    })
}
