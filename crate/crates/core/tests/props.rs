mod common;

use common::{brute_canonical, naive_extendible, naive_orthogonal, naive_rename, random_orthogonal, random_transform};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uom_core::{are_equivalent, canonical_form, check_sequences, find_extension, is_uom, FeatureCandidate, Uom};

/// A pairwise-orthogonal matrix drawn from a seed, `n` in `2..=max_n`.
fn orthogonal(max_m: usize, max_n: usize) -> impl Strategy<Value = (Uom, u64)> {
    (2..=max_n, any::<u64>(), 1u16..4).prop_flat_map(move |(n, seed, classes)| {
        let top = max_m.min(1 << n);
        (2..=top).prop_map(move |m| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (random_orthogonal(&mut rng, m, n, classes), seed)
        })
    })
}

proptest! {
    #[test]
    fn features_survive_transforms((u, seed) in orthogonal(10, 5)) {
        let v = random_transform(&mut ChaCha8Rng::seed_from_u64(seed ^ 1), &u);
        prop_assert_eq!(FeatureCandidate::of_matrix(&u), FeatureCandidate::of_matrix(&v));
    }

    #[test]
    fn renaming_matches_the_direct_rule((u, seed) in orthogonal(10, 5)) {
        let v = random_transform(&mut ChaCha8Rng::seed_from_u64(seed), &u);
        let r = v.rename_canonical();
        prop_assert_eq!(r.to_rows(), naive_rename(&v.to_rows()));
        prop_assert_eq!(r.rename_canonical(), r.clone());
        prop_assert!(r.is_canonically_named());
    }

    #[test]
    fn canonical_form_is_a_class_invariant((u, seed) in orthogonal(10, 5)) {
        let v = random_transform(&mut ChaCha8Rng::seed_from_u64(seed ^ 2), &u);
        let c = canonical_form(&u);
        prop_assert_eq!(canonical_form(&v), c.clone());
        prop_assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn verdicts_survive_transforms((u, seed) in orthogonal(10, 5)) {
        let v = random_transform(&mut ChaCha8Rng::seed_from_u64(seed ^ 3), &u);
        prop_assert!(u.is_pairwise_orthogonal() && naive_orthogonal(&u));
        prop_assert_eq!(v.is_pairwise_orthogonal(), true);
        prop_assert_eq!(is_uom(&u), is_uom(&v));
    }

    #[test]
    fn extendibility_oracles_agree((u, _) in orthogonal(10, 5)) {
        let ext = find_extension(&u);
        if let Some(w) = &ext {
            prop_assert!(w.covers_all(&u));
        }
        prop_assert_eq!(check_sequences(&u), ext.is_none());
        prop_assert_eq!(ext.is_some(), naive_extendible(&u));
    }

    #[test]
    fn canonical_forms_separate_exactly_the_classes(
        (a, seed) in orthogonal(5, 3),
        (b, _) in orthogonal(5, 3),
        same in any::<bool>(),
    ) {
        let b = if same { random_transform(&mut ChaCha8Rng::seed_from_u64(seed), &a) } else { b };
        if a.shape() == b.shape() {
            let brute = brute_canonical(&a) == brute_canonical(&b);
            prop_assert_eq!(canonical_form(&a) == canonical_form(&b), brute);
            prop_assert_eq!(are_equivalent(&a, &b).equivalent, brute);
        }
    }
}
