use greedylab_core::chebyshev::{sigma_profile, theta_profile};
use greedylab_core::democracy::{h_r, h_r_exact_size, h_restricted, Side};
use greedylab_core::greedy::{gamma, greedy_sets, DEFAULT_CAP};
use greedylab_core::weights::dilation_bounds;
use greedylab_core::{chebyshev_project, SequenceSpace, SignedSet, SparseVector, Weight};
use itertools::Itertools;
use proptest::prelude::*;

fn vector(max_index: usize, max_len: usize) -> impl Strategy<Value = SparseVector> {
    let level = prop_oneof![
        Just(-2.0),
        Just(-1.0),
        Just(-0.5),
        Just(0.5),
        Just(1.0),
        Just(2.0),
        -3.0..3.0f64
    ];
    proptest::collection::btree_map(1..=max_index, level, 1..=max_len)
        .prop_map(|m| SparseVector::from_pairs(m.into_iter().filter(|e| e.1 != 0.0)).unwrap())
}

fn spaces() -> Vec<SequenceSpace> {
    let mut v = SequenceSpace::bundled();
    v.push(SequenceSpace::lp(0.5).unwrap());
    v
}

fn schreier_oracle(x: &SparseVector) -> f64 {
    let e = x.entries();
    (0..1usize << e.len())
        .map(|mask| {
            let f: Vec<(usize, f64)> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
            match f.first() {
                Some(&(min, _)) if (min as f64).sqrt() >= f.len() as f64 => f.iter().map(|v| v.1.abs()).sum(),
                _ => 0.0,
            }
        })
        .fold(0.0, f64::max)
}

fn mixnorm_oracle(x: &SparseVector) -> f64 {
    let moduli: Vec<f64> = x.iter().map(|v| v.1.abs()).collect();
    let mut lorentz = 0.0f64;
    for n in 1..=moduli.len() {
        let s: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
        for perm in moduli.iter().permutations(n) {
            let t: f64 = perm
                .iter()
                .enumerate()
                .map(|(i, &&v)| v / ((i + 1) as f64).sqrt())
                .sum();
            lorentz = lorentz.max(t / s.sqrt());
        }
    }
    let even = x.iter().filter(|v| v.0 % 2 == 0).map(|v| v.1 * v.1).sum::<f64>().sqrt();
    lorentz.max(even)
}

fn difference_oracle(x: &SparseVector) -> f64 {
    let n = x.max_index().unwrap_or(0);
    let a: Vec<f64> = (1..=n + 1).map(|i| x.get(i)).collect();
    (0..n).map(|i| (a[i] - a[i + 1]).abs()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn homogeneous(x in vector(20, 8), t in -4.0..4.0f64) {
        for s in spaces() {
            let lhs = s.norm(&x.scale(t));
            let rhs = t.abs() * s.norm(&x);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs), "{}", s.name());
        }
    }

    #[test]
    fn quasi_triangle(x in vector(20, 8), y in vector(20, 8)) {
        for s in spaces() {
            let z = &x + &y;
            let (nz, nx, ny) = (s.norm(&z), s.norm(&x), s.norm(&y));
            prop_assert!(nz <= s.kappa * (nx + ny) + 1e-9, "{}", s.name());
            let p = s.p_convexity;
            prop_assert!(nz.powf(p) <= nx.powf(p) + ny.powf(p) + 1e-9, "{}", s.name());
        }
    }

    #[test]
    fn unconditional_spaces_ignore_signs_and_suppression(x in vector(24, 8), mask in any::<u32>()) {
        for s in spaces().into_iter().filter(|s| s.unconditional) {
            let mut y = x.clone();
            let mut kept = vec![];
            for (i, (n, v)) in x.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    y.set(n, -v);
                    kept.push(n);
                }
            }
            prop_assert!((s.norm(&y) - s.norm(&x)).abs() <= 1e-9);
            prop_assert!(s.norm(&x.project(&kept)) <= s.norm(&x) + 1e-12);
        }
    }

    #[test]
    fn schreier_matches_admissible_set_enumeration(x in vector(40, 8)) {
        let s = SequenceSpace::schreier();
        prop_assert!((s.norm(&x) - schreier_oracle(&x)).abs() <= 1e-12);
    }

    #[test]
    fn mixnorm_matches_permutation_search(x in vector(16, 5)) {
        let s = SequenceSpace::mixnorm();
        prop_assert!((s.norm(&x) - mixnorm_oracle(&x)).abs() <= 1e-12);
    }

    #[test]
    fn difference_matches_dense_formula(x in vector(20, 8)) {
        let s = SequenceSpace::difference();
        prop_assert!((s.norm(&x) - difference_oracle(&x)).abs() <= 1e-12);
    }

    #[test]
    fn linear_programs_agree_with_closed_forms(x in vector(10, 5), extra in 1usize..12, pick in any::<u8>()) {
        let mut a: Vec<usize> = x.support().into_iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|e| e.1).collect();
        a.push(extra);
        for s in [SequenceSpace::summing(), SequenceSpace::difference(), SequenceSpace::schreier()] {
            let sol = chebyshev_project(&s, &x, &a).unwrap();
            prop_assert!(sol.certified, "{} {:?} {:?}", s.name(), x, a);
            prop_assert!(sol.residual <= s.norm(&x.remove(&a)) + 1e-12);
        }
    }

    #[test]
    fn greedy_sets_respect_the_threshold(x in vector(16, 8), m in 1usize..8) {
        let fam = greedy_sets(&x, m, DEFAULT_CAP).unwrap();
        for a in &fam.sets {
            prop_assert_eq!(a.len(), m);
            let inside = a.iter().map(|&n| x.get(n).abs()).fold(f64::INFINITY, f64::min);
            let outside = x.iter().filter(|e| !a.contains(&e.0)).map(|e| e.1.abs()).fold(0.0, f64::max);
            prop_assert!(inside >= outside);
        }
    }

    #[test]
    fn error_chain(x in vector(12, 6)) {
        for s in SequenceSpace::bundled() {
            let len = x.len().saturating_sub(1);
            let sig = sigma_profile(&s, &x, len, 4).unwrap();
            let th = theta_profile(&s, &x, len, DEFAULT_CAP).unwrap();
            for m in 1..=len {
                let g = gamma(&s, &x, m, DEFAULT_CAP).unwrap().value;
                prop_assert!(sig[m - 1] <= th[m - 1].value + 1e-9, "{} m={m}", s.name());
                prop_assert!(th[m - 1].value <= g + 1e-9, "{} m={m}", s.name());
            }
        }
    }

    #[test]
    fn dilation_is_submultiplicative(m in 2usize..12, n in 2usize..12, gamma in 0.0..2.0f64) {
        let w = Weight::sqrt_log(gamma);
        let k = 64;
        let mn = dilation_bounds(&w, m * n, k).unwrap().big_phi_hat;
        let bound = dilation_bounds(&w, m, n * k).unwrap().big_phi_hat * dilation_bounds(&w, n, k).unwrap().big_phi_hat;
        prop_assert!(mn <= bound * (1.0 + 1e-12));
    }
}

#[test]
fn democracy_sandwich_and_witnesses() {
    for s in spaces() {
        for m in 1..=4 {
            let full = h_r(&s, m, 10).unwrap();
            let exact = h_r_exact_size(&s, m, 10).unwrap();
            let lower = 2f64.powf(1.0 - 1.0 / s.p_convexity) * full.value;
            assert!(
                lower <= exact.value + 1e-12 && exact.value <= full.value + 1e-12,
                "{} m={m}",
                s.name()
            );
            for r in [&full, &exact] {
                assert!((s.indicator_norm(&r.witness) - r.value).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn right_restricted_is_monotone_up_to_basis_constant() {
    for s in SequenceSpace::bundled() {
        let kb = s.basis_constant.unwrap();
        for u in 1..=3 {
            let h: Vec<f64> = (1..=4)
                .map(|m| h_restricted(&s, m, u, Side::Right, u + 10).unwrap().value)
                .collect();
            for m1 in 0..4 {
                for m2 in 0..=m1 {
                    assert!(kb * h[m1] >= h[m2] - 1e-12, "{} u={u}", s.name());
                }
            }
        }
    }
}

#[test]
fn schreier_blocks_bounded_by_root_of_end() {
    let s = SequenceSpace::schreier();
    for n in 0..30usize {
        for m in 1..=30 - n {
            let v = s.indicator_norm(&SignedSet::positive((n + 1..=n + m).collect()).unwrap());
            assert!(v <= ((n + m) as f64).sqrt() + 1e-12 && v <= m as f64);
        }
    }
}
