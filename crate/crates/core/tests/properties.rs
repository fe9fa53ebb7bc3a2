use ogs_core::budgeted::{threshold_support, Draws};
use ogs_core::instance::{Instance, Job};
use ogs_core::norm::{AggregateSpec, NormSpec};
use ogs_core::reductions::{budget_levels, copy_count, reduce_to_copies};
use ogs_core::rng::Seed;
use proptest::prelude::*;

fn vec_of(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..10.0, d)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn lp_is_sandwiched_by_linf_and_l1(x in vec_of(5), p in 1.0f64..6.0) {
        let lp = NormSpec::Lp { p }.eval(&x).unwrap();
        let inf = NormSpec::LInf.eval(&x).unwrap();
        let l1 = NormSpec::Lp { p: 1.0 }.eval(&x).unwrap();
        prop_assert!(inf <= lp + 1e-9 && lp <= l1 + 1e-9);
    }

    #[test]
    fn topk_interpolates(x in vec_of(4)) {
        let t1 = NormSpec::TopK { k: 1 }.eval(&x).unwrap();
        let t4 = NormSpec::TopK { k: 4 }.eval(&x).unwrap();
        prop_assert!(close(t1, NormSpec::LInf.eval(&x).unwrap()));
        prop_assert!(close(t4, x.iter().sum()));
    }

    #[test]
    fn ordered_with_unit_weights_is_l1(x in vec_of(3)) {
        let o = NormSpec::OrderedSym { weights: vec![1.0; 3] }.eval(&x).unwrap();
        prop_assert!(close(o, x.iter().sum()));
    }

    #[test]
    fn sum_powers_p1_is_weighted_sum(x in vec_of(3), w in vec_of(3)) {
        let f = AggregateSpec::SumPowers { p: 1.0, weights: w.clone() };
        let want: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
        prop_assert!(close(f.eval(&x).unwrap(), want));
    }

    #[test]
    fn draws_stay_in_support(seed in any::<u64>(), m in 1usize..20, k in 1usize..10) {
        let d = Draws::sample(Seed(seed), m, k);
        let support: Vec<f64> = threshold_support(k).iter().map(|p| p.0).collect();
        prop_assert_eq!(d.tau_bar.len(), m);
        prop_assert!(d.tau_bar.iter().all(|t| support.contains(t)));
        prop_assert_eq!(d, Draws::sample(Seed(seed), m, k));
    }

    #[test]
    fn copies_halve_budgets(m in 1usize..6, b in 0.5f64..20.0, load in 0.1f64..5.0) {
        let inst = Instance {
            m,
            r: 1,
            inner_norms: vec![NormSpec::LInf; m],
            aggregate: AggregateSpec::NormAgg { norm: NormSpec::Lp { p: 2.0 } },
            budget: b,
            jobs: vec![Job::new(vec![load; m])],
        };
        let (copies, map) = reduce_to_copies(&inst, 1e12).unwrap();
        prop_assert_eq!(copy_count(m), budget_levels(m) + 1);
        prop_assert_eq!(copies.machine_budgets.len(), m * copy_count(m));
        for i in 0..m {
            let row = &copies.machine_budgets[i * copy_count(m)..(i + 1) * copy_count(m)];
            for w in row.windows(2) {
                prop_assert!(close(w[1] * 2.0, w[0]));
            }
        }
        prop_assert_eq!(map.origin.len(), copies.machine_budgets.len());
    }
}
