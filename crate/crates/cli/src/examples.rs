//! Built-in example systems.

use nalgebra::Matrix3;

use crate::spec::{AdjacencySpec, NamedMatrix, SpecOptions, SystemSpecFile};
use crate::CliError;

pub const EXAMPLE_NAMES: [&str; 2] = ["example1", "example2"];

fn rows(m: &Matrix3<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Base matrix and similarity of the four-mode example.
pub fn example1_generators() -> (Matrix3<f64>, Matrix3<f64>) {
    let a = Matrix3::new(-0.2, 1.0, 0.0, -1.0, 1.4, 0.0, 0.0, 0.0, -0.4);
    let (s, c) = std::f64::consts::FRAC_PI_3.sin_cos();
    let u = Matrix3::new(1.2, 0.0, 0.0, 0.0, c, s, 0.0, -s, c);
    (a, u)
}

/// `A_k = U^{-k}·A·U^k` for `k = 0..3`.
pub fn example1(adjacency: AdjacencySpec) -> SystemSpecFile {
    let (a, u) = example1_generators();
    let u_inv = u.try_inverse().expect("U is invertible");
    let mut left = Matrix3::identity();
    let mut right = Matrix3::identity();
    let mut subsystems = Vec::with_capacity(4);
    for k in 0..4 {
        let ak = left * a * right;
        subsystems.push(NamedMatrix {
            name: format!("A{k}"),
            rows: rows(&ak),
        });
        left = u_inv * left;
        right *= u;
    }
    SystemSpecFile { dimension: 3, subsystems, adjacency, options: SpecOptions::default() }
}

pub fn example2() -> SystemSpecFile {
    let a1 = vec![vec![-0.38, 0.2, 0.1], vec![-0.16, 0.72, 0.16], vec![-0.24, 0.24, 0.8]];
    let a2 = vec![vec![-0.8, -0.07, 0.04], vec![0.1, -1.0, 0.05], vec![-0.1, -0.06, -0.34]];
    SystemSpecFile {
        dimension: 3,
        subsystems: vec![NamedMatrix { name: "A1".into(), rows: a1 }, NamedMatrix { name: "A2".into(), rows: a2 }],
        adjacency: AdjacencySpec::Full,
        options: SpecOptions::default(),
    }
}

/// `adjacency` defaults to `full`.
pub fn generate_example(name: &str, adjacency: Option<AdjacencySpec>) -> Result<SystemSpecFile, CliError> {
    match name {
        "example1" => Ok(example1(adjacency.unwrap_or(AdjacencySpec::Full))),
        "example2" => {
            let mut s = example2();
            if let Some(adj) = adjacency {
                s.adjacency = adj;
            }
            Ok(s)
        }
        _ => Err(CliError::UnknownExample(name.to_owned())),
    }
}
