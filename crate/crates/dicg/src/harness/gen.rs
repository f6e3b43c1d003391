//! Deterministic synthetic instances. Every generator is driven by a
//! ChaCha8 stream cipher RNG seeded from a single u64, so an instance is
//! reproducible from its parameters on any platform.

use crate::error::{Error, Result};
use crate::objective::{lasso_over_simplex, ChangeOfVariables, DistanceObjective, QuadraticObjective};
use crate::point::DensePoint;
use crate::polytope::{
    ChainMarginalPolytope, ChainModel, DagGraph, FlowPolytope, PolytopeOracle, UnitSimplex,
};
use crate::vertex::Vertex;
use ndarray::{Array1, Array2};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Layered DAG: source, `layers` ranks of `width` nodes with full
/// connections between consecutive ranks, then a sink. Has width^layers
/// source-sink paths, each of length layers + 1.
pub fn layered_dag(layers: usize, width: usize) -> Result<DagGraph> {
    if layers == 0 || width == 0 {
        return Err(Error::InvalidParameter(
            "layered graph needs at least one layer and positive width".into(),
        ));
    }
    let node = |layer: usize, slot: usize| 1 + (layer - 1) * width + slot;
    let num_nodes = 2 + layers * width;
    let target = num_nodes - 1;
    let mut edges = Vec::new();
    for slot in 0..width {
        edges.push((0, node(1, slot)));
    }
    for layer in 1..layers {
        for a in 0..width {
            for b in 0..width {
                edges.push((node(layer, a), node(layer + 1, b)));
            }
        }
    }
    for slot in 0..width {
        edges.push((node(layers, slot), target));
    }
    DagGraph::new(num_nodes, edges, 0, target)
}

/// Lasso regression recast over the doubled simplex: design matrix, noisy
/// targets, and the planted sparse signal mapped to simplex coordinates.
pub struct LassoInstance {
    pub objective: QuadraticObjective,
    pub change: ChangeOfVariables,
    /// Planted signal in simplex coordinates (dimension 2p). With zero
    /// noise the objective is exactly zero here.
    pub planted: DensePoint,
}

/// Quadratic over a flow polytope with a planted face-interior optimum.
pub struct FlowQpInstance {
    pub objective: DistanceObjective,
    pub polytope: FlowPolytope,
    pub planted: DensePoint,
    /// Support size of the planted optimum (union of the chosen paths).
    pub card_star: usize,
}

/// Quadratic over a chain marginal polytope, planted the same way.
pub struct ChainQpInstance {
    pub objective: DistanceObjective,
    pub polytope: ChainMarginalPolytope,
    pub planted: DensePoint,
    pub card_star: usize,
}

/// Quadratic over the unit simplex whose optimum spreads uniformly over a
/// random k-subset of coordinates.
pub struct SimplexMixtureInstance {
    pub objective: DistanceObjective,
    pub polytope: UnitSimplex,
    pub planted: DensePoint,
    pub card_star: usize,
}

pub fn gen_lasso(m: usize, p: usize, radius: f64, seed: u64) -> Result<LassoInstance> {
    gen_lasso_with_noise(m, p, radius, 0.01, seed)
}

/// Noise-free variant: the planted point attains objective value zero, so
/// the instance carries a known optimum.
pub fn gen_lasso_noiseless(m: usize, p: usize, radius: f64, seed: u64) -> Result<LassoInstance> {
    gen_lasso_with_noise(m, p, radius, 0.0, seed)
}

fn gen_lasso_with_noise(
    m: usize,
    p: usize,
    radius: f64,
    noise_scale: f64,
    seed: u64,
) -> Result<LassoInstance> {
    if m == 0 || p == 0 {
        return Err(Error::InvalidParameter(
            "lasso needs at least one row and one column".into(),
        ));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lasso radius must be positive, got {radius}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let design = Array2::from_shape_fn((m, p), |_| rng.sample::<f64, _>(StandardNormal));

    // Sparse signal: ceil(p/10) entries, random signs, total l1 mass
    // strictly inside the ball so the simplex embedding has slack.
    let card = p.div_ceil(10);
    let support = rand::seq::index::sample(&mut rng, p, card).into_vec();
    let mut signal = vec![0.0; p];
    for &i in &support {
        let magnitude = rng.random_range(0.1..=1.0) * radius / card as f64;
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        signal[i] = sign * magnitude;
    }

    let mut targets = Array1::zeros(m);
    for r in 0..m {
        let mut acc = 0.0;
        for c in 0..p {
            acc += design[[r, c]] * signal[c];
        }
        let noise: f64 = rng.sample(StandardNormal);
        targets[r] = acc + noise_scale * noise;
    }

    let (mut objective, change) = lasso_over_simplex(design, targets, radius)?;
    let planted = DensePoint(change.to_simplex(&signal)?);
    if noise_scale == 0.0 {
        objective = objective.with_fstar(0.0);
    }
    Ok(LassoInstance {
        objective,
        change,
        planted,
    })
}

pub fn gen_flow_qp(
    layers: usize,
    width: usize,
    paths_in_opt: usize,
    seed: u64,
) -> Result<FlowQpInstance> {
    let graph = layered_dag(layers, width)?;
    let polytope = FlowPolytope::new(graph)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let paths = sample_layer_paths(polytope.graph(), layers, width, paths_in_opt, &mut rng)?;
    let (center, card_star) = mix_vertices(&paths, polytope.dim());
    Ok(FlowQpInstance {
        objective: DistanceObjective::with_fstar(center.clone(), 0.0),
        polytope,
        planted: DensePoint(center),
        card_star,
    })
}

pub fn gen_chain_qp(length: usize, states: usize, seed: u64) -> Result<ChainQpInstance> {
    let model = ChainModel::new(vec![states; length])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = model.state_counts().iter().product();
    // A handful of distinct assignments; fewer on tiny models.
    let wanted = 3usize.min(total);
    let mut assignments: Vec<Vec<usize>> = Vec::with_capacity(wanted);
    let mut guard = 0;
    while assignments.len() < wanted {
        let a: Vec<usize> = (0..length).map(|_| rng.random_range(0..states)).collect();
        if !assignments.contains(&a) {
            assignments.push(a);
        }
        guard += 1;
        if guard > 10_000 {
            return Err(Error::InternalConsistency(
                "failed to sample distinct chain assignments".into(),
            ));
        }
    }
    let vertices = assignments
        .iter()
        .map(|a| model.assignment_vertex(a))
        .collect::<Result<Vec<_>>>()?;
    let (center, card_star) = mix_vertices(&vertices, model.dim());
    Ok(ChainQpInstance {
        objective: DistanceObjective::with_fstar(center.clone(), 0.0),
        polytope: ChainMarginalPolytope::new(model),
        planted: DensePoint(center),
        card_star,
    })
}

pub fn gen_simplex_mixture(n: usize, k: usize, seed: u64) -> Result<SimplexMixtureInstance> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "mixture support k = {k} must be in 1..={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support = rand::seq::index::sample(&mut rng, n, k).into_vec();
    let mut center = vec![0.0; n];
    for &i in &support {
        center[i] = 1.0 / k as f64;
    }
    Ok(SimplexMixtureInstance {
        objective: DistanceObjective::with_fstar(center.clone(), 0.0),
        polytope: UnitSimplex::new(n)?,
        planted: DensePoint(center),
        card_star: k,
    })
}

/// Uniform mixture of vertices and the size of their support union.
fn mix_vertices(vertices: &[Vertex], dim: usize) -> (Vec<f64>, usize) {
    let mut center = vec![0.0; dim];
    for v in vertices {
        for &i in v.support() {
            center[i] += 1.0 / vertices.len() as f64;
        }
    }
    let card = center.iter().filter(|v| **v > 0.0).count();
    (center, card)
}

/// Distinct random source-sink paths through a layered DAG, sampled by
/// independent uniform slot choices per rank.
fn sample_layer_paths(
    graph: &DagGraph,
    layers: usize,
    width: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vertex>> {
    let available = (width as f64).powi(layers as i32);
    if count == 0 || (count as f64) > available {
        return Err(Error::InvalidParameter(format!(
            "cannot pick {count} distinct paths from {available}"
        )));
    }
    // Edge ids follow the construction order in layered_dag: source fan-out,
    // then width^2 blocks per rank pair, then the sink fan-in.
    let edge_id = |layer: usize, from_slot: usize, to_slot: usize| -> usize {
        debug_assert!(layer < layers);
        if layer == 0 {
            to_slot
        } else {
            width + (layer - 1) * width * width + from_slot * width + to_slot
        }
    };
    let sink_edge = |slot: usize| width + (layers - 1) * width * width + slot;

    let mut picked: Vec<Vec<usize>> = Vec::with_capacity(count);
    let mut paths = Vec::with_capacity(count);
    let mut guard = 0;
    while paths.len() < count {
        let slots: Vec<usize> = (0..layers).map(|_| rng.random_range(0..width)).collect();
        guard += 1;
        if guard > 100_000 {
            return Err(Error::InternalConsistency(
                "failed to sample distinct paths".into(),
            ));
        }
        if picked.contains(&slots) {
            continue;
        }
        let mut support = Vec::with_capacity(layers + 1);
        support.push(edge_id(0, 0, slots[0]));
        for layer in 1..layers {
            support.push(edge_id(layer, slots[layer - 1], slots[layer]));
        }
        support.push(sink_edge(slots[layers - 1]));
        paths.push(Vertex::new(support, graph.num_edges())?);
        picked.push(slots);
    }
    Ok(paths)
}
