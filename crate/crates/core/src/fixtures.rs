//! Canonical instances shared by tests, the property suite and benches.
//!
//! The JSON files under `fixtures/` at the repository root mirror these
//! constructors byte-for-byte in content.

use crate::cone::ConvexCone;
use crate::instance::{Instance, ProductPoint};
use crate::metric::MetricSpace;
use crate::scaling::{NormalFunction, PowerTerm};
use crate::vector::Vector;

fn pt(x: usize, y: Vec<f64>) -> ProductPoint {
    ProductPoint { x, y: Vector::new(y) }
}

/// Two carrier points at distance 1, scalar values 5 / 3 / 2.9 with the
/// identity scaling: the smallest instance whose order relation has a
/// nontrivial chain. Edges: 0 -> 1, 0 -> 2, 1 -> 2.
pub fn three_point_chain() -> Instance {
    Instance::new(
        MetricSpace::matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
        ConvexCone::orthant(1),
        ConvexCone::orthant(1),
        NormalFunction::linear(Vector::new(vec![1.0])).unwrap(),
        vec![pt(0, vec![5.0]), pt(1, vec![3.0]), pt(1, vec![2.9])],
    )
}

/// Three carrier points on a path, plane values, linear scaling (1, 2).
pub fn orthant_linear_dim2() -> Instance {
    Instance::new(
        MetricSpace::matrix(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ]),
        ConvexCone::orthant(2),
        ConvexCone::orthant(2),
        NormalFunction::linear(Vector::new(vec![1.0, 2.0])).unwrap(),
        vec![
            pt(0, vec![10.0, 20.0]),
            pt(1, vec![8.0, 16.0]),
            pt(2, vec![5.0, 10.0]),
            pt(2, vec![4.0, 8.0]),
            pt(1, vec![9.0, 14.0]),
        ],
    )
}

/// Same carrier with the two-term scaling sqrt + identity.
pub fn two_power_instance() -> Instance {
    Instance::new(
        MetricSpace::matrix(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ]),
        ConvexCone::orthant(2),
        ConvexCone::orthant(2),
        NormalFunction::new(vec![
            PowerTerm { k: Vector::new(vec![1.0, 0.0]), exp: 0.5 },
            PowerTerm { k: Vector::new(vec![0.0, 1.0]), exp: 1.0 },
        ])
        .unwrap(),
        vec![
            pt(0, vec![9.0, 9.0]),
            pt(1, vec![7.0, 7.0]),
            pt(2, vec![4.0, 4.0]),
            pt(2, vec![4.0, 3.0]),
        ],
    )
}

/// The lexicographic fixture: K = orthant(2) inside H = lex(2), scaling
/// along the second coordinate, carrier distance 2 between the two points.
///
/// Points 0..8 alternate carriers while descending in the second value
/// coordinate: an ascending chain whose carrier never settles, which is
/// exactly what a non-Archimedean H permits. Point 8 has unbounded gauge.
pub fn lex_instance() -> Instance {
    let mut points = Vec::new();
    for n in 0..8usize {
        points.push(pt(n % 2, vec![0.0, 2.0 * (8 - n) as f64]));
    }
    points.push(pt(0, vec![1.0, 0.0]));
    Instance::new(
        MetricSpace::matrix(vec![vec![0.0, 2.0], vec![2.0, 0.0]]),
        ConvexCone::orthant(2),
        ConvexCone::lex(2),
        NormalFunction::linear(Vector::new(vec![0.0, 1.0])).unwrap(),
        points,
    )
    .with_lower_bound(Vector::zeros(2))
}

/// A halfspace-cone fixture: H cut out by the normals (1,0) and (1,1).
pub fn halfspace_instance() -> Instance {
    Instance::new(
        MetricSpace::matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
        ConvexCone::orthant(2),
        ConvexCone::halfspaces(vec![
            Vector::new(vec![1.0, 0.0]),
            Vector::new(vec![1.0, 1.0]),
        ]),
        NormalFunction::linear(Vector::new(vec![1.0, 1.0])).unwrap(),
        vec![
            pt(0, vec![5.0, 5.0]),
            pt(1, vec![3.0, 3.0]),
            pt(1, vec![3.0, 2.0]),
        ],
    )
    .with_lower_bound(Vector::zeros(2))
}

/// Path carrier of three points with values 3 / 1 / 0.5: the scalar
/// variational demo problem.
pub fn scalar_path_problem() -> (MetricSpace, Vec<f64>) {
    (
        MetricSpace::matrix(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ]),
        vec![3.0, 1.0, 0.5],
    )
}
