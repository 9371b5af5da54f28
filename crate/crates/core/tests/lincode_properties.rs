mod common;

use proptest::prelude::*;
use sodesign::{BitVector, LinearCode};

fn random_code() -> impl Strategy<Value = LinearCode> {
    (2usize..=20, 1usize..=10, any::<u64>()).prop_map(|(n, k, seed)| {
        let mut rng = common::rng(seed);
        LinearCode::from_rows(&common::random_matrix(&mut rng, k, n))
    })
}

fn random_so() -> impl Strategy<Value = LinearCode> {
    (2usize..=20, any::<u64>())
        .prop_map(|(n, seed)| common::random_so_code(&mut common::rng(seed), n, 10))
}

proptest! {
    #[test]
    fn weight_counts_sum_to_size(c in random_code()) {
        prop_assert_eq!(c.weight_distribution().unwrap().total(), 1u64 << c.dimension());
    }

    #[test]
    fn self_orthogonal_codes_are_even(c in random_so()) {
        prop_assert!(c.is_self_orthogonal());
        prop_assert!(c.weight_distribution().unwrap().is_even());
    }

    #[test]
    fn weights_survive_permutation(c in random_code(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let wd = c.weight_distribution().unwrap().clone();
        for _ in 0..100 {
            let p = common::random_perm(&mut rng, c.length());
            let moved = c.permuted(&p);
            prop_assert_eq!(moved.weight_distribution().unwrap(), &wd);
        }
    }

    #[test]
    fn extend_then_cross_section_is_identity(c in random_so()) {
        let n = c.length();
        match c.extend() {
            Ok(ext) => {
                prop_assert_eq!((ext.length(), ext.dimension()), (n + 1, c.dimension() + 1));
                prop_assert_eq!(ext.cross_section(n).unwrap(), c);
            }
            Err(_) => prop_assert!(c.contains(&BitVector::ones(n))),
        }
    }

    #[test]
    fn cross_sections_stay_self_orthogonal(c in random_so()) {
        for j in 0..c.length() {
            let s = c.cross_section(j).unwrap();
            prop_assert!(s.is_self_orthogonal());
            let touched = c.generator().column(j).weight() > 0;
            prop_assert_eq!(s.dimension(), c.dimension() - usize::from(touched));
        }
    }

    #[test]
    fn min_distance_matches_enumeration(c in random_code()) {
        let brute = c.codewords(24).unwrap().iter().map(|w| w.weight()).filter(|&w| w > 0).min();
        prop_assert_eq!(c.min_distance().unwrap(), brute.unwrap_or(c.length() + 1));
    }

    #[test]
    fn doubly_even_shortcut_agrees(c in random_so()) {
        prop_assert_eq!(c.is_doubly_even().unwrap(), c.is_doubly_even_by_basis());
    }
}

#[test]
fn hamming_code_lies_in_its_dual() {
    let c = common::code(&["1110001", "1001101", "0101011"]);
    assert_eq!(c.weight_distribution().unwrap().to_sparse(), "0:1,4:7");
    let dual = c.dual();
    assert_eq!(dual.dimension(), 4);
    assert!(c.is_subcode_of(&dual));
}

#[test]
fn extended_self_orthogonal_maximal_code_is_self_dual() {
    let c = common::code(&["1110001", "1001101", "0101011"]);
    let ext = c.extend().unwrap();
    assert!(ext.is_self_dual());
}
