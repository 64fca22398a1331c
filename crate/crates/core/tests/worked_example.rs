use minctrl_core::linalg::rational::{int, parse_rational};
use minctrl_core::oracles::kalman_test_exact;
use minctrl_core::*;

fn instance() -> HittingSetInstance {
    HittingSetInstance::new(3, vec![vec![1, 2], vec![2, 3], vec![1, 3], vec![1, 2, 3]]).unwrap()
}

fn parse_rows(rows: &[&str]) -> RationalMatrix {
    RationalMatrix::from_rows(
        rows.iter()
            .map(|r| {
                r.split_whitespace()
                    .map(|x| parse_rational(x).unwrap())
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

fn expected_v() -> RationalMatrix {
    parse_rows(&[
        "2 0 0 0 0 0 0 1",
        "0 2 0 0 0 0 0 1",
        "0 0 2 0 0 0 0 1",
        "1 1 0 4 0 0 0 0",
        "0 1 1 0 4 0 0 0",
        "1 0 1 0 0 4 0 0",
        "1 1 1 0 0 0 4 0",
        "0 0 0 0 0 0 0 1",
    ])
}

fn expected_a() -> RationalMatrix {
    parse_rows(&[
        "1 0 0 0 0 0 0 -7/2",
        "0 2 0 0 0 0 0 -3",
        "0 0 3 0 0 0 0 -5/2",
        "3/4 1/2 0 4 0 0 0 13/8",
        "0 3/4 1/2 0 5 0 0 11/8",
        "5/4 0 3/4 0 0 6 0 3/2",
        "3/2 5/4 1 0 0 0 7 9/4",
        "0 0 0 0 0 0 0 8",
    ])
}

#[test]
fn reduction_matches_printed_matrices() {
    let out = build_reduction(&instance()).unwrap();
    assert_eq!(out.v, expected_v());
    assert_eq!(out.a, expected_a());
    assert_eq!(out.eigenvalues, (1..=8).collect::<Vec<i64>>());
    assert_eq!(
        v_inverse_closed_form(&instance()).unwrap(),
        out.v.inverse().unwrap().unwrap()
    );
}

#[test]
fn printed_input_is_controllable_and_optimal() {
    let a = expected_a();
    let b: Vec<_> = [1, 1, 0, 0, 0, 0, 0, 1].iter().map(|&x| int(x)).collect();
    assert!(kalman_test_exact(&a, &RationalMatrix::column(&b)).unwrap());
    let eval = RankEvaluator::exact(&a).unwrap();
    assert_eq!(eval.rank_vector_exact(&b).unwrap(), 8);

    let hs = brute_force_hitting_set(&instance()).unwrap();
    assert_eq!(hs.optimum, 2);
    let vs = brute_force_min_vector_support(&expected_v()).unwrap();
    assert_eq!(vs.optimum, 3);
    assert_eq!(
        brute_force_min_diagonal_support(&expected_v())
            .unwrap()
            .optimum,
        3
    );
}

#[test]
fn solvers_find_three_sparse_inputs() {
    let a = expected_a().to_dense().unwrap();
    for backend in [RankBackend::Exact, RankBackend::Pbh, RankBackend::Svd] {
        let det = deterministic_greedy_vector(&a, backend).unwrap();
        assert!(det.controllable, "{backend}");
        assert_eq!(det.sparsity(), 3, "{backend}");
        let rnd = randomized_greedy_vector(&a, 7, backend).unwrap();
        assert_eq!(rnd.sparsity(), 3, "{backend}");
        let diag = greedy_diagonal(&a, backend).unwrap();
        assert_eq!(diag.sparsity(), 3, "{backend}");
    }
}

#[test]
fn numeric_eigensystem_recovers_v_rows() {
    let a = expected_a().to_dense().unwrap();
    let eig = left_eigensystem(&a).unwrap();
    assert!(eig.has_distinct_eigenvalues());
    assert!(eig.max_residual() <= 1e-8);
    let v = expected_v().to_dense().unwrap();
    for (lambda, w) in eig.eigenvalues.iter().zip(&eig.left_eigenvectors) {
        let k = lambda.re.round() as usize - 1;
        assert!((lambda.re - (k + 1) as f64).abs() < 1e-8 && lambda.im.abs() < 1e-8);
        let row = v.row(k);
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        let overlap: f64 = row.iter().zip(w).map(|(x, y)| x * y.re).sum::<f64>() / norm;
        assert!((overlap.abs() - 1.0).abs() < 1e-8, "eigenvalue {}", k + 1);
    }
}
