use proptest::prelude::*;

use hwembed::embedding::{decide_strong_solvability, kani_check, EmbeddingProblem};
use hwembed::field::Field;
use hwembed::group::{alternating4, cyclic, klein4, symmetric, ExtensionData, FiniteGroup};
use hwembed::hasse_witt::{common_splitting_field, transfer_delta_over, CoverDatum};
use hwembed::matrix::EchelonBasis;
use hwembed::modrep::{hom_space, rational_classes, simple_modules, GModule};
use hwembed::projectives::{projective_covers, projective_table};
use hwembed::selftest::extension_battery;
use hwembed::Settings;

fn groups() -> Vec<FiniteGroup> {
    vec![FiniteGroup::trivial(), cyclic(2), cyclic(3), cyclic(4), klein4(), symmetric(3).unwrap(), alternating4()]
}

#[test]
fn projective_dimensions_fill_the_regular_module() {
    let s = Settings::default();
    for g in groups() {
        for p in [2, 3, 5] {
            let k = common_splitting_field(&[&g], p, &s).unwrap();
            let t = projective_table(&simple_modules(&g, &k, &s).unwrap(), &s).unwrap();
            let total: usize = t.dim_pv.iter().zip(&t.dim_v).map(|(a, b)| a * b).sum();
            assert_eq!(total, g.order(), "{g:?} p = {p}");
        }
    }
}

/// dim Ω² k from the head of Ω k, computed without any cohomology.
#[test]
fn second_syzygy_from_the_head_of_the_first() {
    let s = Settings::default();
    for g in groups() {
        for p in [2, 3] {
            let k = common_splitting_field(&[&g], p, &s).unwrap();
            let simples = simple_modules(&g, &k, &s).unwrap();
            let covers = projective_covers(&simples).unwrap();
            let triv = simples.trivial_index();
            let pk = &covers.iter().find(|c| c.simple_index == triv).unwrap().module;
            let onto = hom_space(pk, &GModule::trivial(&g, &k)).unwrap();
            assert_eq!(onto.len(), 1);
            let mut basis = EchelonBasis::new(&k, pk.dim());
            for row in onto[0].kernel_basis().row_vecs() {
                basis.insert(&row);
            }
            let omega = pk.submodule(&basis);
            let projective_part: usize = covers
                .iter()
                .map(|c| c.module.dim() * hom_space(&omega, simples.get(c.simple_index)).unwrap().len())
                .sum();
            let table = projective_table(&simples, &s).unwrap();
            assert_eq!(table.dim_omega1, omega.dim());
            assert_eq!(table.dim_omega2, projective_part - omega.dim(), "{g:?} p = {p}");
        }
    }
}

#[test]
fn transfer_along_the_identity_is_the_identity() {
    let s = Settings::default();
    for g in groups() {
        for p in [2, 3] {
            let k = common_splitting_field(&[&g], p, &s).unwrap();
            let Ok(y) = CoverDatum::ordinary_over(&g, &k, 2, &s) else { continue };
            let z = transfer_delta_over(&y, &ExtensionData::identity(&g), &k, &s).unwrap();
            assert_eq!(z.delta, y.delta);
        }
    }
}

fn deltas(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(0i64..4, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(p in prop::sample::select(vec![2u32, 3, 5, 7]), m in 1usize..4, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Field::new(p, m).unwrap();
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn simples_do_not_depend_on_the_seed(seed in any::<u64>(), which in 0usize..7, p in prop::sample::select(vec![2u32, 3])) {
        let g = &groups()[which];
        let s = Settings::with_seed(seed);
        let k = common_splitting_field(&[g], p, &s).unwrap();
        let a: Vec<_> = simple_modules(g, &k, &s).unwrap().iter().map(|v| v.canonical_key()).collect();
        let b: Vec<_> = simple_modules(g, &k, &Settings::default()).unwrap().iter().map(|v| v.canonical_key()).collect();
        prop_assert_eq!(a, b);
    }

    /// The verdict is the sign of the slack, and more spare coefficients never hurt.
    #[test]
    fn verdict_is_monotone_in_delta(which in 0usize..18, table in deltas(4), bump in 0usize..4) {
        let s = Settings::default();
        let battery = extension_battery();
        let (_, ext, p) = &battery[which % battery.len()];
        let k = common_splitting_field(&[&ext.h], *p, &s).unwrap();
        let ks = simple_modules(&ext.h, &k, &s).unwrap();
        let classes = rational_classes(&simple_modules(&ext.h, &Field::prime(*p).unwrap(), &s).unwrap(), &ks, &s).unwrap();
        let n = ks.len();
        let mut table: Vec<i64> = (0..n).map(|j| table[classes.class_of[j] % 4]).collect();
        let cover = CoverDatum::user_supplied(&ext.h, *p, 2, table.clone(), &s).unwrap();
        let problem = EmbeddingProblem::new(cover, ext.clone()).unwrap();
        let verdict = decide_strong_solvability(&problem, &s).unwrap();
        let slack = kani_check(&problem, &s).unwrap();
        prop_assert_eq!(verdict.solvable, slack.iter().all(|e| e.slack >= 0));
        let bumped = classes.class_of[bump % n];
        for j in 0..n {
            if classes.class_of[j] == bumped {
                table[j] += 1;
            }
        }
        let richer = CoverDatum::user_supplied(&ext.h, *p, 2, table, &s).unwrap();
        let richer = decide_strong_solvability(&EmbeddingProblem::new(richer, ext.clone()).unwrap(), &s).unwrap();
        prop_assert!(!verdict.solvable || richer.solvable);
    }
}

#[test]
fn conjugate_simples_must_share_coefficients() {
    let s = Settings::default();
    assert!(CoverDatum::user_supplied(&cyclic(3), 2, 2, vec![2, 0, 1], &s).is_err());
    assert!(CoverDatum::user_supplied(&cyclic(3), 2, 2, vec![2, 1, 1], &s).is_ok());
}

#[test]
fn inflation_never_loses_first_cohomology() {
    let s = Settings::default();
    for (label, ext, p) in extension_battery() {
        let k = common_splitting_field(&[&ext.g, &ext.h], p, &s).unwrap();
        for v in simple_modules(&ext.h, &k, &s).unwrap().iter() {
            let up = hwembed::modrep::inflate(v, &ext.q).unwrap();
            assert!(hwembed::cohomology::h1(v, &s).unwrap() <= hwembed::cohomology::h1(&up, &s).unwrap(), "{label}");
        }
    }
}
