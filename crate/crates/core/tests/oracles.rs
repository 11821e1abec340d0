mod common;

use clickbait_core::learn::Criterion;
use proptest::prelude::*;

use common::*;

/// `n x d` matrix with labels holding both classes.
fn labeled_matrix(max_n: usize, max_d: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>)> {
    (2..=max_n, 1..=max_d).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(prop::collection::vec(-100.0..100.0f64, d), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(rows, mut labels)| {
                let n = labels.len();
                labels[0] = true;
                labels[n - 1] = false;
                (rows, labels)
            })
    })
}

fn small_tree_data() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (1..=12usize, 1..=3usize).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(prop::collection::vec(0..6i32, d), n),
            prop::collection::vec(0..5i32, n),
        )
            .prop_map(|(rows, y)| {
                let rows = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
                (rows, y.into_iter().map(|v| v as f64 / 4.0).collect())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fisher_matches_brute_force((rows, labels) in labeled_matrix(50, 20)) {
        check_fisher_oracle(&rows, &labels).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn fisher_matches_brute_force_with_ties(
        (rows, labels) in labeled_matrix(50, 20).prop_map(|(rows, l)| {
            let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(|v| (v / 25.0).round()).collect()).collect();
            (rows, l)
        })
    ) {
        check_fisher_oracle(&rows, &labels).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn auc_matches_pairwise(
        data in prop::collection::vec((0..20u8, any::<bool>()), 1..=30)
    ) {
        let scores: Vec<f64> = data.iter().map(|(s, _)| *s as f64 / 20.0).collect();
        let classes: Vec<bool> = data.iter().map(|(_, c)| *c).collect();
        check_auc_oracle(&scores, &classes).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn auc_matches_pairwise_continuous(
        data in prop::collection::vec((0.0..1.0f64, any::<bool>()), 2..=30)
    ) {
        let scores: Vec<f64> = data.iter().map(|(s, _)| *s).collect();
        let classes: Vec<bool> = data.iter().map(|(_, c)| *c).collect();
        check_auc_oracle(&scores, &classes).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn logistic_gradient_matches_finite_differences(
        (rows, labels) in labeled_matrix(20, 5),
        w_seed in prop::collection::vec(-1.0..1.0f64, 5),
        b in -1.0..1.0f64,
        l2 in 0.0..0.1f64,
    ) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(|v| v / 50.0).collect()).collect();
        let w = &w_seed[..rows[0].len()];
        check_logistic_gradient(&rows, &labels, w, b, l2).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn tree_root_split_matches_brute_force((rows, y) in small_tree_data()) {
        check_root_split(&rows, &y, Criterion::Variance).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn gini_root_split_matches_brute_force((rows, y) in small_tree_data()) {
        let y: Vec<f64> = y.into_iter().map(|v| if v > 0.5 { 1.0 } else { 0.0 }).collect();
        check_root_split(&rows, &y, Criterion::Gini).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn single_tree_forest_equals_tree(
        (rows, y) in small_tree_data(),
        depth in prop::option::of(0..6usize),
    ) {
        check_forest_equals_tree(&rows, &y, depth).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn brute_fisher_hand_example() {
    let rows: Vec<Vec<f64>> = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0].iter().map(|&v| vec![v]).collect();
    let labels = [false, false, false, true, true, true];
    assert!((brute_fisher(&rows, &labels, false)[0] - 2.25).abs() < 1e-9);
}

#[test]
fn brute_split_step_function() {
    let rows = vec![vec![0.0], vec![0.0], vec![1.0], vec![1.0]];
    let y = [0.0, 0.0, 1.0, 1.0];
    let (f, t, g) = brute_best_split(&rows, &y, Criterion::Variance).unwrap();
    assert_eq!((f, t), (0, 0.5));
    assert!((g - 1.0).abs() < 1e-12);
    check_root_split(&rows, &y, Criterion::Variance).unwrap();
}
