use super::{EdgeWeighting, EmbeddingError, EmbeddingTable, EmotionGraph};

pub const DEFAULT_RETROFIT_ITERATIONS: usize = 10;

/// State after one full sweep over the graph words.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub objective: f64,
    /// Largest Euclidean distance any single vector moved during the sweep.
    pub max_displacement: f64,
}

struct Node {
    row: usize,
    alpha: f64,
    /// Scale that makes `scale * beta` symmetric across each edge.
    scale: f64,
    neighbors: Vec<(usize, f64)>,
}

fn prepare(table: &EmbeddingTable, graph: &EmotionGraph) -> Result<Vec<Node>, EmbeddingError> {
    if let EdgeWeighting::Uniform(beta) = graph.weighting() {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(EmbeddingError::InvalidParameter("edge weight must be positive".into()));
        }
    }
    let graph = graph.restrict_to(table);
    let mut nodes = Vec::new();
    for word in graph.words() {
        let degree = graph.degree(word);
        if degree == 0 {
            continue;
        }
        let (beta, scale) = match graph.weighting() {
            EdgeWeighting::InverseDegree => (1.0 / degree as f64, degree as f64),
            EdgeWeighting::Uniform(beta) => (beta, 1.0),
        };
        let alpha = graph.anchor(word);
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(EmbeddingError::InvalidParameter(format!("anchor weight of {word:?} must be positive")));
        }
        nodes.push(Node {
            row: table.row_of(word).expect("restricted to table words"),
            alpha,
            scale,
            neighbors: graph
                .neighbors(word)
                .map(|n| (table.row_of(n).expect("restricted to table words"), beta))
                .collect(),
        });
    }
    Ok(nodes)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn objective(nodes: &[Node], original: &EmbeddingTable, current: &EmbeddingTable) -> f64 {
    nodes
        .iter()
        .map(|node| {
            let q = current.row(node.row);
            let anchor = node.alpha * squared_distance(q, original.row(node.row));
            let edges: f64 = node
                .neighbors
                .iter()
                .map(|&(n, beta)| beta * squared_distance(q, current.row(n)))
                .sum();
            node.scale * (anchor + 0.5 * edges)
        })
        .sum()
}

/// The objective the retrofitting sweep descends:
///
/// `Σ_i c_i α_i ‖q_i − q̂_i‖² + ½ Σ_i Σ_{j∈N(i)} c_i β_ij ‖q_i − q_j‖²`
///
/// where `c_i` is `degree(i)` under inverse-degree weighting and 1 under
/// uniform weighting, so that `c_i β_ij = c_j β_ji` and each per-word update
/// is the exact minimizer over `q_i` with the other vectors held fixed.
pub fn retrofit_objective(
    original: &EmbeddingTable,
    current: &EmbeddingTable,
    graph: &EmotionGraph,
) -> Result<f64, EmbeddingError> {
    Ok(objective(&prepare(original, graph)?, original, current))
}

/// Pulls graph neighbors together while anchoring each vector to its
/// original position.
///
/// Each sweep visits graph words in lexicographic order and replaces
/// `q_i` with `(α_i q̂_i + Σ_j β_ij q_j) / (α_i + Σ_j β_ij)` using the
/// latest neighbor values. Words outside the graph, or without neighbors in
/// the table, keep their vectors.
pub fn retrofit(table: &EmbeddingTable, graph: &EmotionGraph, iterations: usize) -> Result<EmbeddingTable, EmbeddingError> {
    retrofit_with_trace(table, graph, iterations).map(|(t, _)| t)
}

pub fn retrofit_with_trace(
    table: &EmbeddingTable,
    graph: &EmotionGraph,
    iterations: usize,
) -> Result<(EmbeddingTable, Vec<Sweep>), EmbeddingError> {
    if iterations == 0 {
        return Err(EmbeddingError::InvalidParameter("iterations must be at least 1".into()));
    }
    let nodes = prepare(table, graph)?;
    let mut current = table.clone();
    let mut trace = Vec::with_capacity(iterations);
    let dim = table.dim();
    let mut next = vec![0.0; dim];

    for _ in 0..iterations {
        let mut max_displacement: f64 = 0.0;
        for node in &nodes {
            let mut denom = node.alpha;
            for (acc, &orig) in next.iter_mut().zip(table.row(node.row)) {
                *acc = node.alpha * orig;
            }
            for &(n, beta) in &node.neighbors {
                denom += beta;
                for (acc, &q) in next.iter_mut().zip(current.row(n)) {
                    *acc += beta * q;
                }
            }
            next.iter_mut().for_each(|v| *v /= denom);
            let moved = squared_distance(&next, current.row(node.row)).sqrt();
            max_displacement = max_displacement.max(moved);
            current.row_mut(node.row).copy_from_slice(&next);
        }
        trace.push(Sweep {
            objective: objective(&nodes, table, &current),
            max_displacement,
        });
    }
    Ok((current, trace))
}
