use std::time::Instant;

use goldberg_core::a0_solver::{exact_a0, exact_a0_with, A0Options};
use goldberg_core::trace_theory::{baribaud_bound, nstar_bound};
use goldberg_core::word_algebra::{entry_formulas, stats};
use num_bigint::BigInt;
use num_traits::Signed;

fn direct(n0: i64, n1: i64) -> goldberg_core::a0_solver::A0Result {
    let opts = A0Options {
        reduce: false,
        force: true,
        ..A0Options::default()
    };
    exact_a0_with(n0, n1, opts).unwrap()
}

#[test]
fn symmetric_pairs_share_minimal_trace() {
    let start = Instant::now();
    for n0 in 2..=6i64 {
        for n1 in 1..n0 {
            let a = direct(n0, n1);
            let b = direct(n1, n0);
            let c = direct(n0, n0 - n1);
            assert_eq!(a.t_min, b.t_min, "({n0},{n1}) vs swap");
            assert_eq!(a.t_min, c.t_min, "({n0},{n1}) vs ({n0},{})", n0 - n1);
            let t = a.t_min.clone();
            assert_eq!(&t % 4, BigInt::from(2));
            let ns = nstar_bound(n0, n1).unwrap();
            assert!(t >= BigInt::from(2 * ns.nstar));
            assert!(t >= BigInt::from(baribaud_bound(n0, n1).unwrap()));
            for r in [&a, &b, &c] {
                for w in &r.witnesses {
                    let s = stats(w);
                    assert_eq!((s.n0, s.n1), (r.n0, r.n1));
                    assert_eq!(entry_formulas(w).trace().abs(), r.t_min);
                }
            }
            println!(
                "({n0},{n1}) t_min {} witnesses {} examined {}",
                t,
                a.witnesses.len(),
                a.words_examined + b.words_examined + c.words_examined
            );
        }
    }
    println!("grid took {:?}", start.elapsed());
}

#[test]
fn reduced_search_matches_direct_on_grid() {
    for n0 in 2..=6i64 {
        for n1 in 1..n0 {
            assert_eq!(exact_a0(n0, n1).unwrap().t_min, direct(n0, n1).t_min);
        }
    }
}
