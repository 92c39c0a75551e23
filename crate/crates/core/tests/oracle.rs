mod common;

use common::{all_graphs, diamond, fixtures, path};
use num_bigint::BigUint;
use walkfilter::graph::{hamiltonian_frequency, vertex_numbers};
use walkfilter::numerics::PrecisionReal;
use walkfilter::walk_oracle::{
    check_visit_pair_uniqueness, count_hamiltonian_paths, enumerate_n_walks, oracle_series, walk_spectrum,
};
use walkfilter::{Error, Graph};

/// `sum_{u,v} (A^{n-1})_{u,v}` with exact integers.
fn matrix_power_walks(g: &Graph) -> u64 {
    let n = g.n();
    let mut counts = vec![1u64; n];
    for _ in 1..n {
        counts = (0..n).map(|v| g.neighbors(v).map(|u| counts[u]).sum()).collect();
    }
    counts.iter().sum()
}

#[test]
fn visit_pairs_unique_up_to_five_vertices() {
    for n in 1..=5 {
        let a_h = hamiltonian_frequency(&Graph::new(n).unwrap());
        for g in all_graphs(n) {
            let check = check_visit_pair_uniqueness(&g, 7).unwrap();
            assert!(check.unique, "{:?}: {:?}", g.edges(), check.witness);
            let spectrum = walk_spectrum(&g, 7).unwrap();
            assert_eq!(spectrum.get(&a_h), count_hamiltonian_paths(&g, 7).unwrap());
            assert_eq!(spectrum.total(), matrix_power_walks(&g));
        }
    }
}

#[test]
fn visit_pair_walk_numbers_are_distinct() {
    // distinct visit-count vectors summing to n give distinct sum_l k_l n^l
    for n in 2..=5usize {
        let numbers = vertex_numbers(n);
        let mut seen = std::collections::BTreeMap::new();
        let mut counts = vec![0usize; n];
        loop {
            if counts.iter().sum::<usize>() == n {
                let w: BigUint = counts
                    .iter()
                    .zip(numbers.numbers())
                    .map(|(&k, v)| v * BigUint::from(k))
                    .sum();
                assert!(seen.insert(w, counts.clone()).is_none(), "collision at n = {n}");
            }
            let mut i = 0;
            while i < n {
                counts[i] += 1;
                if counts[i] <= n {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
}

#[test]
fn spectrum_keys_bounded_below() {
    for (_, g) in fixtures() {
        let floor = BigUint::from(g.n() * g.n());
        for (w, _) in walk_spectrum(&g, 7).unwrap().iter() {
            assert!(w >= &floor);
        }
    }
}

#[test]
fn oracle_series_low_coefficients() {
    for (name, g) in fixtures() {
        let s = oracle_series(&g, &BigUint::from(1u32), 4, 128, 7).unwrap();
        let n_p = walk_spectrum(&g, 7).unwrap().total();
        assert_eq!(s.coeff(0).re, PrecisionReal::from_i64(n_p as i64, 128), "{name}");
        assert!(s.coeff(0).im.is_zero());
        assert!(s.coeff(1).re.is_zero());
    }
}

#[test]
fn four_vertex_example_series() {
    let s = oracle_series(&diamond(), &BigUint::from(1u32), 3, 128, 7).unwrap();
    assert_eq!(s.coeff(0).re, PrecisionReal::from_i64(66, 128));
}

#[test]
fn small_examples() {
    assert_eq!(count_hamiltonian_paths(&Graph::new(3).unwrap(), 7).unwrap(), 0);
    assert_eq!(count_hamiltonian_paths(&path(3), 7).unwrap(), 2);
    let s = walk_spectrum(&path(2), 7).unwrap();
    assert_eq!(s.get(&BigUint::from(6u32)), 2);
    assert_eq!(s.len(), 1);
}

#[test]
fn limit_is_enforced() {
    let g = path(8);
    assert!(matches!(
        enumerate_n_walks(&g, 7),
        Err(Error::OracleLimit { n: 8, limit: 7 })
    ));
    assert_eq!(count_hamiltonian_paths(&g, 8).unwrap(), 2);
}
