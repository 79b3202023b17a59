mod common;

use affectgauge::polarization::emd_1d;
use common::{enumerate_matching, hungarian, ot_oracle, replicated_cost};
use proptest::prelude::*;

fn sample(max: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-5.0f64..=5.0, 1..=max)
}

#[test]
fn hand_examples() {
    assert_eq!(emd_1d(&[0.0, 1.0], &[0.5, 0.5]), Some(0.5));
    assert_eq!(emd_1d(&[1.5], &[-2.0]), Some(3.5));
    assert_eq!(emd_1d(&[0.2, -1.0, 3.0], &[3.0, 0.2, -1.0]), Some(0.0));
    assert_eq!(emd_1d(&[], &[1.0]), None);
    assert!((ot_oracle(&[0.0, 1.0], &[0.5, 0.5]) - 0.5).abs() < 1e-12);
}

#[test]
fn unequal_sizes_split_mass() {
    // One point at 0 against two points: half the mass travels to each.
    let got = emd_1d(&[0.0], &[1.0, 3.0]).unwrap();
    assert!((got - 2.0).abs() < 1e-12);
    assert!((ot_oracle(&[0.0], &[1.0, 3.0]) - 2.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hungarian_agrees_with_enumeration(a in sample(4), b in sample(4)) {
        let (cost, l) = replicated_cost(&a, &b);
        prop_assume!(l <= 7);
        prop_assert!((hungarian(&cost) - enumerate_matching(&cost)).abs() < 1e-9);
    }

    #[test]
    fn matches_transport_oracle(a in sample(10), b in sample(10)) {
        let got = emd_1d(&a, &b).unwrap();
        prop_assert!((got - ot_oracle(&a, &b)).abs() <= 1e-9);
    }

    #[test]
    fn symmetric_and_non_negative(a in sample(12), b in sample(12)) {
        let ab = emd_1d(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - emd_1d(&b, &a).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn zero_only_for_equal_distributions(a in sample(8), b in sample(8)) {
        prop_assert_eq!(emd_1d(&a, &a), Some(0.0));
        let doubled: Vec<f64> = a.iter().chain(&a).copied().collect();
        prop_assert!(emd_1d(&a, &doubled).unwrap() <= 1e-12);
        let mut sa = a.clone();
        let mut sb = b.clone();
        sa.sort_by(f64::total_cmp);
        sb.sort_by(f64::total_cmp);
        if sa.len() == sb.len() && sa != sb {
            prop_assert!(emd_1d(&a, &b).unwrap() > 0.0);
        }
    }

    #[test]
    fn triangle_inequality(a in sample(8), b in sample(8), c in sample(8)) {
        let ab = emd_1d(&a, &b).unwrap();
        let bc = emd_1d(&b, &c).unwrap();
        let ac = emd_1d(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
    }

    #[test]
    fn homogeneous_and_shift_invariant(a in sample(8), b in sample(8), c in 0.01f64..10.0, t in -3.0f64..3.0) {
        let base = emd_1d(&a, &b).unwrap();
        let sa: Vec<f64> = a.iter().map(|x| x * c).collect();
        let sb: Vec<f64> = b.iter().map(|x| x * c).collect();
        prop_assert!((emd_1d(&sa, &sb).unwrap() - c * base).abs() <= 1e-9);
        let ta: Vec<f64> = a.iter().map(|x| x + t).collect();
        let tb: Vec<f64> = b.iter().map(|x| x + t).collect();
        prop_assert!((emd_1d(&ta, &tb).unwrap() - base).abs() <= 1e-9);
    }
}
