//! Spectral Poisson solver on the bin grid with zero normal derivative
//! at the region walls. The density is expanded in an orthonormal
//! cosine basis sampled at bin centers; the potential divides each
//! coefficient by the mode's continuous eigenvalue and the field
//! differentiates the expansion analytically.

use nalgebra::DMatrix;

use crate::model::{DensityGrid, Netlist};

/// Precomputed transform matrices for one grid geometry.
pub struct PoissonSolver {
    nx: usize,
    ny: usize,
    xmin: f64,
    ymin: f64,
    bin_w: f64,
    bin_h: f64,
    /// orthonormal cosine bases, row u = mode, column i = bin
    cx: DMatrix<f64>,
    cy: DMatrix<f64>,
    /// matching sine rows for the derivative of each cosine mode
    sx: DMatrix<f64>,
    sy: DMatrix<f64>,
    omega_x: Vec<f64>,
    omega_y: Vec<f64>,
}

/// Potential, field, and spectral Laplacian on bin centers, row-major
/// with x fastest (same layout as `DensityGrid::rho`).
pub struct PoissonSolution {
    pub nx: usize,
    pub ny: usize,
    pub xmin: f64,
    pub ymin: f64,
    pub bin_w: f64,
    pub bin_h: f64,
    pub phi: Vec<f64>,
    pub ex: Vec<f64>,
    pub ey: Vec<f64>,
    /// spectral second derivative of phi, for residual checks
    pub laplacian: Vec<f64>,
}

fn cosine_basis(n: usize, length: f64) -> (DMatrix<f64>, DMatrix<f64>, Vec<f64>) {
    let step = length / n as f64;
    let norm0 = (1.0 / n as f64).sqrt();
    let norm = (2.0 / n as f64).sqrt();
    let omega: Vec<f64> = (0..n)
        .map(|u| std::f64::consts::PI * u as f64 / length)
        .collect();
    let cos = DMatrix::from_fn(n, n, |u, i| {
        let s = if u == 0 { norm0 } else { norm };
        let x = (i as f64 + 0.5) * step;
        s * (omega[u] * x).cos()
    });
    let sin = DMatrix::from_fn(n, n, |u, i| {
        let s = if u == 0 { norm0 } else { norm };
        let x = (i as f64 + 0.5) * step;
        s * (omega[u] * x).sin()
    });
    (cos, sin, omega)
}

impl PoissonSolver {
    pub fn new(grid: &DensityGrid) -> Self {
        let (cx, sx, omega_x) = cosine_basis(grid.nx, grid.bin_w * grid.nx as f64);
        let (cy, sy, omega_y) = cosine_basis(grid.ny, grid.bin_h * grid.ny as f64);
        PoissonSolver {
            nx: grid.nx,
            ny: grid.ny,
            xmin: grid.xmin,
            ymin: grid.ymin,
            bin_w: grid.bin_w,
            bin_h: grid.bin_h,
            cx,
            cy,
            sx,
            sy,
            omega_x,
            omega_y,
        }
    }

    /// Solves lap(phi) = -(rho - mean)/epsilon. The target density and
    /// the mean are constants absorbed by zeroing the DC coefficient,
    /// which also enforces the compatibility condition of the pure
    /// Neumann problem.
    pub fn solve(&self, grid: &DensityGrid, epsilon: f64) -> PoissonSolution {
        assert_eq!(grid.nx, self.nx);
        assert_eq!(grid.ny, self.ny);
        let rho = DMatrix::from_fn(self.ny, self.nx, |j, i| grid.rho[j * self.nx + i]);
        let rho_hat = &self.cy * rho * self.cx.transpose();

        let mut phi_hat = rho_hat;
        let mut lap_hat = DMatrix::zeros(self.ny, self.nx);
        for v in 0..self.ny {
            for u in 0..self.nx {
                let eig = self.omega_x[u] * self.omega_x[u] + self.omega_y[v] * self.omega_y[v];
                if u == 0 && v == 0 {
                    phi_hat[(v, u)] = 0.0;
                } else {
                    phi_hat[(v, u)] /= epsilon * eig;
                }
                lap_hat[(v, u)] = -eig * phi_hat[(v, u)];
            }
        }

        let ex_hat = DMatrix::from_fn(self.ny, self.nx, |v, u| {
            -phi_hat[(v, u)] * self.omega_x[u]
        });
        let ey_hat = DMatrix::from_fn(self.ny, self.nx, |v, u| {
            -phi_hat[(v, u)] * self.omega_y[v]
        });

        let phi = self.cy.transpose() * &phi_hat * &self.cx;
        let lap = self.cy.transpose() * lap_hat * &self.cx;
        let ex = self.cy.transpose() * ex_hat * &self.sx;
        let ey = self.sy.transpose() * ey_hat * &self.cx;

        let flatten = |m: DMatrix<f64>| {
            let mut out = vec![0.0; self.nx * self.ny];
            for j in 0..self.ny {
                for i in 0..self.nx {
                    out[j * self.nx + i] = m[(j, i)];
                }
            }
            out
        };
        PoissonSolution {
            nx: self.nx,
            ny: self.ny,
            xmin: self.xmin,
            ymin: self.ymin,
            bin_w: self.bin_w,
            bin_h: self.bin_h,
            phi: flatten(phi),
            ex: flatten(ex),
            ey: flatten(ey),
            laplacian: flatten(lap),
        }
    }
}

impl PoissonSolution {
    /// Bilinear interpolation over the bin-center lattice, clamped at
    /// the walls.
    fn interp(&self, field: &[f64], x: f64, y: f64) -> f64 {
        let fx = ((x - self.xmin) / self.bin_w - 0.5).clamp(0.0, self.nx as f64 - 1.0);
        let fy = ((y - self.ymin) / self.bin_h - 0.5).clamp(0.0, self.ny as f64 - 1.0);
        let i0 = (fx.floor() as usize).min(self.nx - 1);
        let j0 = (fy.floor() as usize).min(self.ny - 1);
        let i1 = (i0 + 1).min(self.nx - 1);
        let j1 = (j0 + 1).min(self.ny - 1);
        let tx = fx - i0 as f64;
        let ty = fy - j0 as f64;
        let f = |i: usize, j: usize| field[j * self.nx + i];
        (1.0 - ty) * ((1.0 - tx) * f(i0, j0) + tx * f(i1, j0))
            + ty * ((1.0 - tx) * f(i0, j1) + tx * f(i1, j1))
    }

    pub fn ex_at(&self, x: f64, y: f64) -> f64 {
        self.interp(&self.ex, x, y)
    }

    pub fn ey_at(&self, x: f64, y: f64) -> f64 {
        self.interp(&self.ey, x, y)
    }

    /// Max residual |lap(phi) + (rho - mean)/epsilon| over interior bins.
    pub fn interior_residual(&self, grid: &DensityGrid, epsilon: f64) -> f64 {
        let mean = grid.rho.iter().sum::<f64>() / grid.rho.len() as f64;
        let mut worst = 0.0f64;
        for j in 1..self.ny.saturating_sub(1) {
            for i in 1..self.nx.saturating_sub(1) {
                let b = j * self.nx + i;
                let r = self.laplacian[b] + (grid.rho[b] - mean) / epsilon;
                worst = worst.max(r.abs());
            }
        }
        worst
    }
}

/// Half the source-potential pairing: the density penalty whose
/// position derivative the field gradient below approximates.
pub fn field_energy(grid: &DensityGrid, sol: &PoissonSolution) -> f64 {
    let bin_area = grid.bin_area();
    0.5 * bin_area
        * grid
            .rho
            .iter()
            .zip(&sol.phi)
            .map(|(&r, &p)| r * p)
            .sum::<f64>()
}

/// Per-instance penalty gradient: area times the field at the instance
/// center, zero for fixed objects.
pub fn density_gradient(
    netlist: &Netlist,
    positions: &[(f64, f64)],
    sol: &PoissonSolution,
) -> Vec<(f64, f64)> {
    netlist
        .instances
        .iter()
        .map(|inst| {
            if inst.kind.is_fixed() || inst.area() == 0.0 {
                return (0.0, 0.0);
            }
            let (cx, cy) = inst.center_of(positions[inst.id]);
            (inst.area() * sol.ex_at(cx, cy), inst.area() * sol.ey_at(cx, cy))
        })
        .collect()
}
