use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use stickel_core::zlattice::{bareiss_determinant, hnf, rank, snf_diagonal, solve_integer};
use stickel_core::IntMatrix;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

/// Cofactor expansion, for small square matrices only.
fn laplace(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * laplace(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bareiss_matches_cofactor_expansion(n in 1usize..=5, seed in prop::collection::vec(-9i64..=9, 25)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
        prop_assert_eq!(bareiss_determinant(&IntMatrix::from_rows(&rows)).unwrap(), BigInt::from(laplace(&rows)));
    }

    #[test]
    fn smith_diagonal_divides_and_matches_rank(rows in matrix(5, 5)) {
        let m = IntMatrix::from_rows(&rows);
        let d = snf_diagonal(&m);
        let nonzero: Vec<&BigInt> = d.iter().take_while(|x| !x.is_zero()).collect();
        prop_assert!(d[nonzero.len()..].iter().all(Zero::is_zero));
        prop_assert!(nonzero.iter().all(|x| x.is_positive()));
        for w in nonzero.windows(2) {
            prop_assert!((w[1] % w[0]).is_zero());
        }
        prop_assert_eq!(nonzero.len(), rank(&m));
        prop_assert_eq!(hnf(&m).rank(), rank(&m));
        if rows.len() == rows[0].len() {
            let prod: BigInt = d.iter().product();
            prop_assert_eq!(prod, bareiss_determinant(&m).unwrap().abs());
        }
    }

    #[test]
    fn solve_outcome_always_verifies(rows in matrix(6, 4), b in prop::collection::vec(-15i64..=15, 6)) {
        let m = IntMatrix::from_rows(&rows);
        let b: Vec<BigInt> = b[..rows.len()].iter().map(|&x| BigInt::from(x)).collect();
        let outcome = solve_integer(&m, &b).unwrap();
        prop_assert!(outcome.verify(&m, &b).is_ok());
    }
}
