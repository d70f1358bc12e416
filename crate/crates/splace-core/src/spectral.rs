//! Sparse signed-graph kernel: graph construction from the netlist,
//! Laplacian application, augmented normalized adjacency operators,
//! multi-band filtering by repeated SpMV, smoothness / zero-crossing
//! diagnostics, the Gershgorin spectral bound, and a dense
//! eigendecomposition oracle for tests.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Netlist;

/// Symmetric sparse weighted graph; weights may be negative. Self-loops
/// are never stored (they enter only through the sigma augmentation).
#[derive(Debug, Clone)]
pub struct SignedGraph {
    n: usize,
    row_ptr: Vec<usize>,
    col: Vec<u32>,
    weight: Vec<f64>,
    /// unique undirected edges, i < j
    edges: Vec<(u32, u32, f64)>,
    pub fixed: Vec<bool>,
    pub virtual_node: Vec<bool>,
}

pub struct GraphBuilder {
    n: usize,
    acc: HashMap<(u32, u32), f64>,
    fixed: Vec<bool>,
    virtual_node: Vec<bool>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            n,
            acc: HashMap::new(),
            fixed: vec![false; n],
            virtual_node: vec![false; n],
        }
    }

    /// Adds a node, returning its index.
    pub fn add_node(&mut self, fixed: bool, virtual_node: bool) -> usize {
        self.fixed.push(fixed);
        self.virtual_node.push(virtual_node);
        self.n += 1;
        self.n - 1
    }

    pub fn set_fixed(&mut self, i: usize, fixed: bool) {
        self.fixed[i] = fixed;
    }

    /// Accumulates weight onto the undirected edge (i, j). Self-edges
    /// are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize, w: f64) {
        if i == j || w == 0.0 {
            return;
        }
        let key = if i < j {
            (i as u32, j as u32)
        } else {
            (j as u32, i as u32)
        };
        *self.acc.entry(key).or_insert(0.0) += w;
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn build(self) -> SignedGraph {
        let mut edges: Vec<(u32, u32, f64)> = self
            .acc
            .into_iter()
            .filter(|&(_, w)| w != 0.0)
            .map(|((i, j), w)| (i, j, w))
            .collect();
        edges.sort_unstable_by_key(|&(i, j, _)| (i, j));

        let mut deg = vec![0usize; self.n];
        for &(i, j, _) in &edges {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        let mut row_ptr = vec![0usize; self.n + 1];
        for i in 0..self.n {
            row_ptr[i + 1] = row_ptr[i] + deg[i];
        }
        let nnz = row_ptr[self.n];
        let mut col = vec![0u32; nnz];
        let mut weight = vec![0.0; nnz];
        let mut cursor = row_ptr.clone();
        for &(i, j, w) in &edges {
            col[cursor[i as usize]] = j;
            weight[cursor[i as usize]] = w;
            cursor[i as usize] += 1;
            col[cursor[j as usize]] = i;
            weight[cursor[j as usize]] = w;
            cursor[j as usize] += 1;
        }
        SignedGraph {
            n: self.n,
            row_ptr,
            col,
            weight,
            edges,
            fixed: self.fixed,
            virtual_node: self.virtual_node,
        }
    }
}

impl SignedGraph {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32, f64)] {
        &self.edges
    }

    /// Signed row sum (the Laplacian diagonal entry).
    pub fn signed_degree(&self, i: usize) -> f64 {
        self.weight[self.row_ptr[i]..self.row_ptr[i + 1]]
            .iter()
            .sum()
    }

    /// Weights of the edges incident to node i.
    pub fn neighbor_weights(&self, i: usize) -> &[f64] {
        &self.weight[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn abs_degree(&self, i: usize) -> f64 {
        self.weight[self.row_ptr[i]..self.row_ptr[i + 1]]
            .iter()
            .map(|w| w.abs())
            .sum()
    }

    /// y = A x (adjacency SpMV).
    pub fn adjacency_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.weight[idx] * x[self.col[idx] as usize];
            }
            y[i] = acc;
        }
        y
    }

    /// y = L x with L = D - A, D the signed row sums.
    pub fn laplacian_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            let mut d = 0.0;
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.weight[idx] * x[self.col[idx] as usize];
                d += self.weight[idx];
            }
            y[i] = d * x[i] - acc;
        }
        y
    }

    /// Text edge-list dump for diffing.
    pub fn dump_edges(&self) -> String {
        let mut out = String::new();
        for &(i, j, w) in &self.edges {
            out.push_str(&format!("{i} {j} {w:.12e}\n"));
        }
        out
    }
}

/// Per-node (x, y) signal, one row per graph node.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl GraphSignal {
    pub fn zeros(n: usize) -> Self {
        GraphSignal {
            x: vec![0.0; n],
            y: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn row(&self, i: usize) -> (f64, f64) {
        (self.x[i], self.y[i])
    }

    pub fn set_row(&mut self, i: usize, v: (f64, f64)) {
        self.x[i] = v.0;
        self.y[i] = v.1;
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FilterBand {
    pub sigma: f64,
    pub k: u32,
    pub alpha: f64,
}

/// Three-band blend of augmented normalized adjacency powers.
/// alpha_low + alpha_mid + alpha_high must equal 1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BandFilterSpec {
    pub low: FilterBand,
    pub mid: FilterBand,
    pub high: FilterBand,
}

impl Default for BandFilterSpec {
    fn default() -> Self {
        BandFilterSpec {
            low: FilterBand {
                sigma: 4.0,
                k: 4,
                alpha: 0.5,
            },
            mid: FilterBand {
                sigma: 4.0,
                k: 2,
                alpha: 0.3,
            },
            high: FilterBand {
                sigma: 2.0,
                k: 2,
                alpha: 0.2,
            },
        }
    }
}

impl BandFilterSpec {
    pub fn bands(&self) -> [FilterBand; 3] {
        [self.low, self.mid, self.high]
    }

    pub fn validate(&self) -> Result<()> {
        let sum = self.low.alpha + self.mid.alpha + self.high.alpha;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "band filter mixing weights must sum to 1, got {sum}"
            )));
        }
        for b in self.bands() {
            if b.sigma < 0.0 {
                return Err(Error::Config("band filter sigma must be >= 0".into()));
            }
            if b.k < 1 {
                return Err(Error::Config("band filter power must be >= 1".into()));
            }
            if b.alpha < 0.0 {
                return Err(Error::Config("band filter alpha must be >= 0".into()));
            }
        }
        Ok(())
    }
}

/// Net-to-graph model. Clique weighting with per-edge weight 2/p
/// preserves total net weight; nets above `max_degree` are skipped.
pub fn build_instance_graph(netlist: &Netlist, max_degree: usize) -> SignedGraph {
    let mut b = GraphBuilder::new(netlist.instances.len());
    for inst in &netlist.instances {
        b.set_fixed(inst.id, inst.kind.is_fixed());
    }
    for net in &netlist.nets {
        add_net_clique(&mut b, net.weight, net.pins.iter().map(|p| p.instance), max_degree);
    }
    b.build()
}

/// Clique edges among the distinct nodes of one net, weight w*2/p.
pub fn add_net_clique(
    b: &mut GraphBuilder,
    net_weight: f64,
    nodes: impl Iterator<Item = usize>,
    max_degree: usize,
) {
    let mut ids: Vec<usize> = nodes.collect();
    ids.sort_unstable();
    ids.dedup();
    let p = ids.len();
    if p < 2 || p > max_degree {
        return;
    }
    let w = net_weight * 2.0 / p as f64;
    for a in 0..p {
        for c in a + 1..p {
            b.add_edge(ids[a], ids[c], w);
        }
    }
}

/// Laplacian quadratic form per channel.
pub fn smoothness(graph: &SignedGraph, signal: &GraphSignal) -> (f64, f64) {
    let mut sx = 0.0;
    let mut sy = 0.0;
    for &(i, j, w) in &graph.edges {
        let (i, j) = (i as usize, j as usize);
        let dx = signal.x[j] - signal.x[i];
        let dy = signal.y[j] - signal.y[i];
        sx += w * dx * dx;
        sy += w * dy * dy;
    }
    (sx, sy)
}

/// Number of edges whose endpoint values have opposite signs.
pub fn zero_crossings(graph: &SignedGraph, channel: &[f64]) -> usize {
    graph
        .edges
        .iter()
        .filter(|&&(i, j, _)| channel[i as usize] * channel[j as usize] < 0.0)
        .count()
}

fn augmented_inv_sqrt_degrees(graph: &SignedGraph, sigma: f64) -> Result<Vec<f64>> {
    let mut inv_sqrt = vec![0.0; graph.n];
    for i in 0..graph.n {
        let d = graph.abs_degree(i) + sigma;
        if d <= 0.0 {
            return Err(Error::Graph(format!(
                "node {i} has zero degree under sigma={sigma}; use sigma > 0"
            )));
        }
        inv_sqrt[i] = 1.0 / d.sqrt();
    }
    Ok(inv_sqrt)
}

fn augmented_apply_channel(
    graph: &SignedGraph,
    sigma: f64,
    k: u32,
    inv_sqrt: &[f64],
    x: &[f64],
) -> Vec<f64> {
    let mut v = x.to_vec();
    for _ in 0..k {
        let scaled: Vec<f64> = v.iter().zip(inv_sqrt).map(|(a, s)| a * s).collect();
        let mut av = graph.adjacency_apply(&scaled);
        for i in 0..graph.n {
            av[i] = (av[i] + sigma * scaled[i]) * inv_sqrt[i];
        }
        v = av;
    }
    v
}

/// Applies the augmented normalized adjacency power
/// `(D^-1/2 (A + sigma I) D^-1/2)^k` to both channels, where D holds
/// row sums of |A| + sigma I. Computed by k sparse matrix-vector
/// products, never via eigendecomposition.
pub fn apply_augmented_adjacency(
    graph: &SignedGraph,
    sigma: f64,
    k: u32,
    signal: &GraphSignal,
) -> Result<GraphSignal> {
    let inv_sqrt = augmented_inv_sqrt_degrees(graph, sigma)?;
    Ok(GraphSignal {
        x: augmented_apply_channel(graph, sigma, k, &inv_sqrt, &signal.x),
        y: augmented_apply_channel(graph, sigma, k, &inv_sqrt, &signal.y),
    })
}

/// Alpha-weighted blend of the three augmented-adjacency powers.
pub fn apply_band_filter(
    graph: &SignedGraph,
    spec: &BandFilterSpec,
    signal: &GraphSignal,
) -> Result<GraphSignal> {
    spec.validate()?;
    let mut out = GraphSignal::zeros(signal.len());
    for band in spec.bands() {
        if band.alpha == 0.0 {
            continue;
        }
        let part = apply_augmented_adjacency(graph, band.sigma, band.k, signal)?;
        for i in 0..out.len() {
            out.x[i] += band.alpha * part.x[i];
            out.y[i] += band.alpha * part.y[i];
        }
    }
    Ok(out)
}

/// Gershgorin upper bound on the spectrum of L = D - A:
/// max_i (L_ii + sum_{j != i} |L_ij|).
pub fn gershgorin_upper(graph: &SignedGraph) -> f64 {
    (0..graph.n)
        .map(|i| graph.signed_degree(i) + graph.abs_degree(i))
        .fold(0.0, f64::max)
}

/// Dense eigendecomposition oracle (test/diagnostic; N <= 2000).
pub mod oracle {
    use nalgebra::{DMatrix, DVector};

    use super::{GraphSignal, SignedGraph};
    use crate::error::{Error, Result};

    pub const MAX_DENSE_NODES: usize = 2000;

    pub fn dense_adjacency(graph: &SignedGraph) -> DMatrix<f64> {
        let n = graph.node_count();
        let mut a = DMatrix::zeros(n, n);
        for &(i, j, w) in graph.edges() {
            a[(i as usize, j as usize)] = w;
            a[(j as usize, i as usize)] = w;
        }
        a
    }

    pub fn dense_laplacian(graph: &SignedGraph) -> DMatrix<f64> {
        let n = graph.node_count();
        let a = dense_adjacency(graph);
        let mut l = -a;
        for i in 0..n {
            l[(i, i)] += graph.signed_degree(i);
        }
        l
    }

    /// Cyclic Jacobi eigendecomposition. Accumulated rotations keep the
    /// eigenvector matrix orthogonal to machine precision, which tight
    /// filter-oracle tolerances depend on when eigenvalues cluster.
    fn jacobi_eigen(mut a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
        let n = a.nrows();
        let mut v = DMatrix::<f64>::identity(n, n);
        let off = |a: &DMatrix<f64>| -> f64 {
            let mut s = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    s += a[(p, q)] * a[(p, q)];
                }
            }
            s.sqrt()
        };
        let scale = a.iter().map(|x| x.abs()).fold(0.0f64, f64::max).max(1.0);
        for _sweep in 0..100 {
            if off(&a) <= 1e-15 * scale * n as f64 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= 1e-18 * scale {
                        continue;
                    }
                    let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[(k, p)], a[(k, q)]);
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        ((0..n).map(|i| a[(i, i)]).collect(), v)
    }

    /// Eigenbasis of a symmetric operator, eigenvalues ascending.
    pub struct GftBasis {
        pub eigenvalues: Vec<f64>,
        pub vectors: DMatrix<f64>,
    }

    impl GftBasis {
        pub fn of_matrix(m: DMatrix<f64>) -> Result<Self> {
            let n = m.nrows();
            if n > MAX_DENSE_NODES {
                return Err(Error::Graph(format!(
                    "dense oracle limited to {MAX_DENSE_NODES} nodes, got {n}"
                )));
            }
            let (raw_values, raw_vectors) = jacobi_eigen(m);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));
            let eigenvalues: Vec<f64> = order.iter().map(|&i| raw_values[i]).collect();
            let mut vectors = DMatrix::zeros(n, n);
            for (dst, &src) in order.iter().enumerate() {
                vectors.set_column(dst, &raw_vectors.column(src));
            }
            Ok(GftBasis {
                eigenvalues,
                vectors,
            })
        }

        /// Laplacian eigenbasis of the graph.
        pub fn of_graph(graph: &SignedGraph) -> Result<Self> {
            Self::of_matrix(dense_laplacian(graph))
        }

        pub fn forward(&self, channel: &[f64]) -> Vec<f64> {
            let v = DVector::from_column_slice(channel);
            (self.vectors.transpose() * v).as_slice().to_vec()
        }

        pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
            let v = DVector::from_column_slice(coeffs);
            (&self.vectors * v).as_slice().to_vec()
        }

        /// Applies the spectral response h(lambda) elementwise.
        pub fn filter(&self, channel: &[f64], h: impl Fn(f64) -> f64) -> Vec<f64> {
            let mut coeffs = self.forward(channel);
            for (c, &lam) in coeffs.iter_mut().zip(&self.eigenvalues) {
                *c *= h(lam);
            }
            self.inverse(&coeffs)
        }
    }

    /// Dense route for the augmented normalized adjacency power.
    pub fn dense_augmented_filter(
        graph: &SignedGraph,
        sigma: f64,
        k: u32,
        signal: &GraphSignal,
    ) -> Result<GraphSignal> {
        let n = graph.node_count();
        let mut m = dense_adjacency(graph);
        for i in 0..n {
            m[(i, i)] += sigma;
        }
        for i in 0..n {
            let d = graph.abs_degree(i) + sigma;
            if d <= 0.0 {
                return Err(Error::Graph(format!("node {i} has zero augmented degree")));
            }
        }
        let inv_sqrt: Vec<f64> = (0..n)
            .map(|i| 1.0 / (graph.abs_degree(i) + sigma).sqrt())
            .collect();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
            }
        }
        let basis = GftBasis::of_matrix(m)?;
        Ok(GraphSignal {
            x: basis.filter(&signal.x, |lam| lam.powi(k as i32)),
            y: basis.filter(&signal.y, |lam| lam.powi(k as i32)),
        })
    }
}
