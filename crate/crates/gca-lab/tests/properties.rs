//! Randomized algebraic laws complementing the exhaustive suites.

use proptest::prelude::*;

use gca_lab::ca::{Gca, LocalRule};
use gca_lab::config::{Alphabet, Configuration};
use gca_lab::groups::{Element, Group};

fn small_group() -> impl Strategy<Value = Group> {
    prop_oneof![
        (1usize..=8).prop_map(|n| Group::cyclic(n).unwrap()),
        Just(Group::symmetric(3).unwrap()),
        Just(Group::dihedral(4).unwrap()),
    ]
}

proptest! {
    /// The shift is a left action: g . (k . x) = (gk) . x.
    #[test]
    fn shift_is_an_action(g in small_group(), seed in any::<u64>()) {
        let n = g.order().unwrap();
        let alphabet = Alphabet::binary();
        let code = seed % (1u64 << n);
        let x = Configuration::from_code(&g, alphabet, code).unwrap();
        let a = Element::Finite((seed / 7) as usize % n);
        let b = Element::Finite((seed / 13) as usize % n);
        let lhs = x.shift(&b).unwrap().shift(&a).unwrap();
        let rhs = x.shift(&g.mul(&a, &b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Configurations survive the code round-trip.
    #[test]
    fn config_code_roundtrip(g in small_group(), seed in any::<u64>()) {
        let n = g.order().unwrap();
        let alphabet = Alphabet::binary();
        let code = seed % (1u64 << n);
        let x = Configuration::from_code(&g, alphabet, code).unwrap();
        let table = x.dense_table().unwrap();
        let recoded: u64 = table
            .iter()
            .enumerate()
            .map(|(i, &v)| (v as u64) << i)
            .sum();
        prop_assert_eq!(recoded, code);
    }

    /// Minimizing the memory set never changes the realized map.
    #[test]
    fn minimization_preserves_the_map(
        g in small_group(),
        table_bits in any::<u16>(),
        picks in any::<u32>(),
    ) {
        let n = g.order().unwrap();
        let alphabet = Alphabet::binary();
        let mut memory = Vec::new();
        for j in 0..3usize.min(n) {
            let e = Element::Finite((picks as usize >> (5 * j)) % n);
            if !memory.contains(&e) {
                memory.push(e);
            }
        }
        let table: Vec<u8> = (0..1u16 << memory.len())
            .map(|i| ((table_bits >> i) & 1) as u8)
            .collect();
        let rule = LocalRule::new(g, memory, alphabet, table).unwrap();
        let full = Gca::classical(rule.clone());
        let minimized = Gca::classical(rule.minimized());
        for code in 0..(1u64 << n) {
            let x = Configuration::from_code(full.domain_space(), alphabet, code).unwrap();
            prop_assert_eq!(full.apply(&x).unwrap(), minimized.apply(&x).unwrap());
        }
    }
}
