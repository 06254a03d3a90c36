//! Built-in spaces and instances used throughout the docs and tests.

use crate::caristi::{CaristiInstance, Variant};
use crate::rational::Rational;
use crate::space::{FiniteSpace, PointMap, Potential};

fn table(points: &[&str], rows: &[[i64; 4]]) -> FiniteSpace {
    let table = rows
        .iter()
        .map(|row| row.iter().map(|&v| Rational::from_integer(v)).collect())
        .collect();
    FiniteSpace::new(points.iter().map(|s| s.to_string()).collect(), table)
        .expect("catalog table is valid")
}

/// The four-point M-metric with all self-distances nonzero
/// (`m(1,1)=1, m(2,2)=3, m(3,3)=5, m(4,4)=3`).
pub fn example_one() -> FiniteSpace {
    table(
        &["1", "2", "3", "4"],
        &[[1, 10, 7, 8], [10, 3, 7, 6], [7, 7, 5, 6], [8, 6, 6, 3]],
    )
}

/// The four-point M-metric with `m(1,1) = m(4,4) = 0`.
pub fn example_two() -> FiniteSpace {
    table(
        &["1", "2", "3", "4"],
        &[[0, 10, 7, 8], [10, 3, 7, 5], [7, 7, 5, 6], [8, 5, 6, 0]],
    )
}

/// The three-point table `m(1,1)=1, m(2,2)=4, m(3,3)=5, m(1,2)=10,
/// m(1,3)=7, m(2,3)=6`. It is commonly presented as an M-metric, but the
/// excess triangle inequality fails at `(1,2,3)`: `9 > 8`.
pub fn three_point() -> FiniteSpace {
    let rows = [[1, 10, 7], [10, 4, 6], [7, 6, 5]];
    FiniteSpace::from_fn(&["1", "2", "3"], |i, j| Rational::from_integer(rows[i][j]))
        .expect("valid")
}

/// `p(x,y) = max{x,y}` restricted to the given nonnegative integers.
pub fn max_restriction(values: &[i64]) -> FiniteSpace {
    let labels: Vec<String> = values.iter().map(i64::to_string).collect();
    FiniteSpace::from_fn(&labels, |i, j| {
        Rational::from_integer(values[i].max(values[j]))
    })
    .expect("valid")
}

/// `d(x,y) = |x - y|` on the given integers.
pub fn absolute_difference(values: &[i64]) -> FiniteSpace {
    let labels: Vec<String> = values.iter().map(i64::to_string).collect();
    FiniteSpace::from_fn(&labels, |i, j| {
        Rational::from_integer((values[i] - values[j]).abs())
    })
    .expect("valid")
}

/// The two-point M-metric `m(a,a)=0, m(b,b)=1, m(a,b)=0`. With `φ ≡ 0` no
/// point admits a strict Ekeland certificate.
pub fn flat_pair() -> FiniteSpace {
    let rows = [[0, 0], [0, 1]];
    FiniteSpace::from_fn(&["a", "b"], |i, j| Rational::from_integer(rows[i][j])).expect("valid")
}

/// `φ(x) = 10x` on a space labelled by integers.
pub fn ten_x(space: &FiniteSpace) -> Potential {
    Potential::from_fn(space, |i| {
        let x: i64 = space.label(i).parse().expect("integer label");
        Rational::from_integer(10 * x)
    })
    .expect("nonnegative labels")
}

/// `T(x) = 1` for `x != 4`, `T(4) = 4`.
pub fn collapse_to_one(space: &FiniteSpace) -> PointMap {
    let one = space.index_of("1").expect("point 1");
    let four = space.index_of("4").expect("point 4");
    PointMap::from_indices(
        (0..space.len())
            .map(|i| if i == four { four } else { one })
            .collect(),
    )
}

/// Example one with `φ(x) = 10x`, `T` collapsing to 1 except at 4, weak condition.
pub fn example_one_instance() -> CaristiInstance {
    let space = example_one();
    let phi = ten_x(&space);
    let map = collapse_to_one(&space);
    CaristiInstance::new(space, map, phi, Variant::MWeak).expect("valid instance")
}

/// Example two with the same `φ` and `T`, strong condition.
pub fn example_two_instance() -> CaristiInstance {
    let space = example_two();
    let phi = ten_x(&space);
    let map = collapse_to_one(&space);
    CaristiInstance::new(space, map, phi, Variant::MStrong).expect("valid instance")
}
