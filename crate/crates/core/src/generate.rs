//! Seeded random problem generators for tests, the acceptance suite and
//! benches. Integer-valued data keeps linear order predicates exact in
//! floats, so validation never trips over rounding.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cone::ConvexCone;
use crate::graph::SuccessorGraph;
use crate::instance::{Instance, ProductPoint};
use crate::metric::MetricSpace;
use crate::scaling::{NormalFunction, PowerTerm};
use crate::vector::Vector;

/// Random integer distance table turned into a metric by shortest-path
/// closure; off-diagonal entries stay >= 1.
pub fn random_metric_matrix(rng: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    let mut d = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=9) as f64;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    MetricSpace::matrix(d)
}

/// Random point cloud in the plane under the Euclidean norm.
pub fn random_metric_points(rng: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    let coords = (0..n)
        .map(|_| Vector::new(vec![rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)]))
        .collect();
    MetricSpace::points(coords, 2.0)
}

/// Random orthant instance in the plane: integer values, linear or
/// two-term scaling with a strictly positive first coefficient component.
pub fn random_orthant_instance(rng: &mut ChaCha8Rng, max_points: usize) -> Instance {
    let n_x = rng.gen_range(1..=8);
    let space = random_metric_matrix(rng, n_x);
    let lambda = if rng.gen_bool(0.5) {
        NormalFunction::linear(Vector::new(vec![
            rng.gen_range(1..=3) as f64,
            rng.gen_range(0..=3) as f64,
        ]))
        .unwrap()
    } else {
        NormalFunction::new(vec![
            PowerTerm {
                k: Vector::new(vec![rng.gen_range(1..=2) as f64, 0.0]),
                exp: 0.5,
            },
            PowerTerm {
                k: Vector::new(vec![0.0, rng.gen_range(1..=2) as f64]),
                exp: 1.0,
            },
        ])
        .unwrap()
    };
    let m = rng.gen_range(1..=max_points.max(1));
    let points = (0..m)
        .map(|_| ProductPoint {
            x: rng.gen_range(0..n_x),
            y: Vector::new(vec![
                rng.gen_range(0..=40) as f64,
                rng.gen_range(0..=40) as f64,
            ]),
        })
        .collect();
    Instance::new(
        space,
        ConvexCone::orthant(2),
        ConvexCone::orthant(2),
        lambda,
        points,
    )
}

/// Random instance over the lex cone: K = orthant(2) inside H = lex(2),
/// scaling along the second coordinate. Roughly a third of the points get
/// a positive first value coordinate, which makes their gauge unbounded.
pub fn random_lex_instance(rng: &mut ChaCha8Rng, max_points: usize) -> Instance {
    let n_x = rng.gen_range(1..=6);
    let space = random_metric_matrix(rng, n_x);
    let m = rng.gen_range(1..=max_points.max(1));
    let mut points: Vec<ProductPoint> = (0..m)
        .map(|_| {
            let y = if rng.gen_bool(0.3) {
                vec![rng.gen_range(1..=5) as f64, rng.gen_range(0..=40) as f64]
            } else {
                vec![0.0, rng.gen_range(0..=40) as f64]
            };
            ProductPoint { x: rng.gen_range(0..n_x), y: Vector::new(y) }
        })
        .collect();
    // Guarantee a nonempty restricted domain.
    points[0].y = Vector::new(vec![0.0, rng.gen_range(0..=40) as f64]);
    let inst = Instance::new(
        space,
        ConvexCone::orthant(2),
        ConvexCone::lex(2),
        NormalFunction::linear(Vector::new(vec![0.0, 1.0])).unwrap(),
        points,
    );
    if rng.gen_bool(0.5) {
        inst.with_lower_bound(Vector::zeros(2))
    } else {
        inst
    }
}

/// Random scalar problem: metric space (table or point cloud) and a finite
/// value table.
pub fn random_scalar_problem(rng: &mut ChaCha8Rng, max_n: usize) -> (MetricSpace, Vec<f64>) {
    let n = rng.gen_range(1..=max_n.max(1));
    let space = if rng.gen_bool(0.5) {
        random_metric_matrix(rng, n)
    } else {
        random_metric_points(rng, n)
    };
    let f = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
    (space, f)
}

/// An ascending walk through the materialized relation: moves to a random
/// successor while one exists, staying put otherwise. Pairwise domination
/// follows from edge transitivity on validated instances.
pub fn ascending_walk(
    inst: &Instance,
    graph: &SuccessorGraph,
    rng: &mut ChaCha8Rng,
    len: usize,
) -> Vec<ProductPoint> {
    let mut current = rng.gen_range(0..inst.len());
    let mut seq = Vec::with_capacity(len);
    seq.push(inst.points[current].clone());
    for _ in 1..len {
        let succ = &graph.adj[current];
        if !succ.is_empty() {
            current = succ[rng.gen_range(0..succ.len())];
        }
        seq.push(inst.points[current].clone());
    }
    seq
}
