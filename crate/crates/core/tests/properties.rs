use fusion_core::dual::{dual, DualOptions};
use fusion_core::fusion::{fuse, FuseOptions};
use fusion_core::linalg::Rat;
use fusion_core::module::{Module, ModuleSpec};
use proptest::prelude::*;

fn twisted() -> Module {
    Module::new(ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8)).with_singular_level(2).unwrap())
}

fn nonzero_w() -> impl Strategy<Value = Rat> {
    (1i64..6, 1i64..4, any::<bool>()).prop_map(|(p, q, neg)| Rat::new(if neg { -p } else { p }, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn jordan_structure_ignores_the_insertion_point(w in nonzero_w(), depth in 0usize..2) {
        let m = twisted();
        let base = fuse(&m, &m, &FuseOptions::new(depth)).unwrap();
        let moved = fuse(&m, &m, &FuseOptions::new(depth).with_w(w)).unwrap();
        prop_assert_eq!(base.jordan, moved.jordan);
        prop_assert_eq!(base.graded_dims, moved.graded_dims);
    }

    #[test]
    fn dual_matrix_is_traceless_and_singular(w in nonzero_w()) {
        let m = twisted();
        let d = dual(&m, &m, &DualOptions::new(0).with_w(w)).unwrap();
        prop_assert!(d.trace.is_zero());
        prop_assert!(d.determinant.is_zero());
        prop_assert_eq!(d.solution_dimension, 2);
    }

    #[test]
    fn heisenberg_weight_is_additive(a in -3i64..4, b in -3i64..4) {
        let f1 = Module::new(ModuleSpec::heisenberg(Rat::from(a)));
        let f2 = Module::new(ModuleSpec::heisenberg(Rat::from(b)));
        let res = fuse(&f1, &f2, &FuseOptions::new(0)).unwrap();
        prop_assert_eq!(res.dimension, 1);
        let s = Rat::from(a + b);
        prop_assert_eq!(res.l0_matrix.get(0, 0), &(&s * &s / Rat::from(2)));
    }
}

#[test]
fn dimension_grows_with_depth() {
    let m = twisted();
    let dims: Vec<usize> = (0..=3).map(|d| fuse(&m, &m, &FuseOptions::new(d)).unwrap().dimension).collect();
    assert_eq!(dims, vec![2, 3, 6, 9]);
}
