use hypernym::scorer::{build_matrix, ppmi, prob, spmi, Weighting};
use hypernym::PairCounts;
use hypernym_oracles as oracle;
use proptest::prelude::*;

fn counts_strategy(max_pairs: usize, vocab: usize) -> impl Strategy<Value = Vec<(String, String, u64)>> {
    prop::collection::btree_map((0..vocab, 0..vocab), 1u64..20, 1..=max_pairs)
        .prop_map(|m| m.into_iter().map(|((x, y), c)| (format!("t{x:02}"), format!("t{y:02}"), c)).collect())
}

fn to_counts(rows: &[(String, String, u64)], scale: u64) -> PairCounts {
    let mut c = PairCounts::new();
    for (x, y, n) in rows {
        c.insert(x, y, n * scale, ["p".to_string()]);
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ppmi_matrix_matches_brute_force(rows in counts_strategy(50, 12)) {
        let counts = to_counts(&rows, 1);
        let m = build_matrix(&counts, Weighting::Ppmi).unwrap();
        for x in m.vocab.terms() {
            for y in m.vocab.terms() {
                let want = oracle::ppmi(&rows, x, y);
                let got = m.score(x, y).unwrap();
                prop_assert!((got - want).abs() <= 1e-12, "{x} {y}: {got} vs {want}");
                prop_assert!(got >= 0.0);
                prop_assert_eq!(ppmi(&counts, x, y).unwrap().to_bits(), got.to_bits());
            }
        }
        prop_assert!(m.matrix.values().iter().all(|v| *v != 0.0));
    }

    #[test]
    fn probabilities_sum_to_one(rows in counts_strategy(50, 12)) {
        let counts = to_counts(&rows, 1);
        let total: f64 = rows.iter().map(|(x, y, _)| prob(&counts, x, y).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        let pm = build_matrix(&counts, Weighting::Prob).unwrap();
        for (x, y, _) in &rows {
            prop_assert!((pm.score(x, y).unwrap() - oracle::prob(&rows, x, y)).abs() <= 1e-15);
        }
    }

    #[test]
    fn scaling_counts_leaves_ppmi_bit_identical(rows in counts_strategy(30, 10), k in 2u64..50) {
        let a = build_matrix(&to_counts(&rows, 1), Weighting::Ppmi).unwrap();
        let b = build_matrix(&to_counts(&rows, k), Weighting::Ppmi).unwrap();
        prop_assert_eq!(&a.matrix, &b.matrix);
        let pa = build_matrix(&to_counts(&rows, 1), Weighting::Prob).unwrap();
        let pb = build_matrix(&to_counts(&rows, k), Weighting::Prob).unwrap();
        prop_assert_eq!(pa.matrix, pb.matrix);
    }

    #[test]
    fn full_rank_spmi_reconstructs_ppmi(rows in counts_strategy(40, 20)) {
        let counts = to_counts(&rows, 1);
        let pm = build_matrix(&counts, Weighting::Ppmi).unwrap();
        let m = pm.vocab.len();
        let model = pm.factorize(m, 42).unwrap();
        let dense = pm.matrix.to_dense();
        for (i, x) in pm.vocab.terms().iter().enumerate() {
            for (j, y) in pm.vocab.terms().iter().enumerate() {
                let got = spmi(&model, x, y).unwrap();
                prop_assert!((got - dense[i][j]).abs() <= 1e-8, "{x} {y}: {got} vs {}", dense[i][j]);
            }
        }
    }
}

#[test]
fn truncated_spmi_matches_dense_oracle() {
    let rows: Vec<(String, String, u64)> = (0..15)
        .flat_map(|i| (0..3).map(move |k| (format!("h{i}"), format!("g{}", (i * 7 + k * 3) % 11), (i + k + 1) as u64)))
        .collect();
    let counts = to_counts(&rows, 1);
    let pm = build_matrix(&counts, Weighting::Ppmi).unwrap();
    let dense = pm.matrix.to_dense();
    for r in [1, 3, 5] {
        let model = pm.factorize(r, 42).unwrap();
        for (i, x) in pm.vocab.terms().iter().enumerate().step_by(3) {
            for (j, y) in pm.vocab.terms().iter().enumerate().step_by(2) {
                let want = oracle::truncated_entry(&dense, r, i, j);
                let got = spmi(&model, x, y).unwrap();
                assert!((got - want).abs() < 1e-8, "r={r} ({x},{y}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn scaling_counts_leaves_spmi_unchanged() {
    let rows: Vec<(String, String, u64)> =
        (0..12).map(|i| (format!("a{}", i % 5), format!("b{}", (i * 3) % 7), 1 + i as u64 % 4)).collect();
    let a = build_matrix(&to_counts(&rows, 1), Weighting::Ppmi).unwrap().factorize(3, 42).unwrap();
    let b = build_matrix(&to_counts(&rows, 10), Weighting::Ppmi).unwrap().factorize(3, 42).unwrap();
    assert_eq!(a, b);
}
