//! Exponential-time ground truth by explicit n-walk enumeration.
//!
//! Everything here is exact integer arithmetic. The grid module must agree
//! with [`oracle_series`] for every graph small enough to enumerate.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{hamiltonian_frequency, vertex_numbers, Graph};
use crate::numerics::{NormalizedSeries, PrecisionComplex};

pub const DEFAULT_ORACLE_LIMIT: usize = 7;

/// Vertex indices (0-based) in visiting order.
pub type Walk = Vec<usize>;

fn check_limit(g: &Graph, limit: usize) -> Result<()> {
    if g.n() > limit {
        return Err(Error::OracleLimit { n: g.n(), limit });
    }
    Ok(())
}

/// Lexicographic depth-first enumeration of n-walks.
pub struct NWalks<'a> {
    graph: &'a Graph,
    stack: Vec<usize>,
    started: bool,
    first: Option<usize>,
    last: Option<usize>,
}

impl<'a> NWalks<'a> {
    fn new(graph: &'a Graph, start: Option<usize>) -> Self {
        NWalks {
            graph,
            stack: Vec::with_capacity(graph.n()),
            started: false,
            first: start,
            last: start,
        }
    }

    fn next_neighbor(&self, of: usize, after: Option<usize>) -> Option<usize> {
        self.graph.neighbors(of).find(|&v| after.is_none_or(|a| v > a))
    }

    /// Extends the stack with smallest choices until it has `n` entries.
    fn fill(&mut self) -> bool {
        while self.stack.len() < self.graph.n() {
            let top = *self.stack.last().unwrap();
            match self.next_neighbor(top, None) {
                Some(v) => self.stack.push(v),
                None => return false,
            }
        }
        true
    }

    /// Replaces the deepest entry with its next sibling, backtracking as needed.
    fn advance(&mut self) -> bool {
        while let Some(cur) = self.stack.pop() {
            let next = match self.stack.last() {
                Some(&parent) => self.next_neighbor(parent, Some(cur)),
                None => {
                    let bound = self.last.unwrap_or(self.graph.n() - 1);
                    (cur < bound).then_some(cur + 1)
                }
            };
            if let Some(v) = next {
                self.stack.push(v);
                return true;
            }
        }
        false
    }
}

impl Iterator for NWalks<'_> {
    type Item = Walk;

    fn next(&mut self) -> Option<Walk> {
        let mut ok = if !self.started {
            self.started = true;
            self.stack.push(self.first.unwrap_or(0));
            true
        } else {
            self.advance()
        };
        while ok {
            if self.fill() {
                return Some(self.stack.clone());
            }
            ok = self.advance();
        }
        None
    }
}

pub fn enumerate_n_walks(g: &Graph, limit: usize) -> Result<NWalks<'_>> {
    check_limit(g, limit)?;
    Ok(NWalks::new(g, None))
}

fn walks_from(g: &Graph, start: usize) -> NWalks<'_> {
    NWalks::new(g, Some(start))
}

fn is_hamiltonian(walk: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    walk.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
}

/// Directed Hamiltonian paths: each undirected path counts once per direction.
pub fn count_hamiltonian_paths(g: &Graph, limit: usize) -> Result<u64> {
    check_limit(g, limit)?;
    let per_start: Vec<u64> = (0..g.n())
        .into_par_iter()
        .map(|s| walks_from(g, s).filter(|w| is_hamiltonian(w, g.n())).count() as u64)
        .collect();
    Ok(per_start.iter().sum())
}

/// Walk-number -> number of n-walks carrying it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Spectrum {
    counts: BTreeMap<BigUint, u64>,
}

impl Spectrum {
    pub fn get(&self, walk_number: &BigUint) -> u64 {
        self.counts.get(walk_number).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

fn walk_number(walk: &[usize], numbers: &[BigUint]) -> BigUint {
    walk.iter().fold(BigUint::zero(), |acc, &v| acc + &numbers[v])
}

pub fn walk_spectrum(g: &Graph, limit: usize) -> Result<Spectrum> {
    check_limit(g, limit)?;
    let vn = vertex_numbers(g.n());
    let parts: Vec<BTreeMap<BigUint, u64>> = (0..g.n())
        .into_par_iter()
        .map(|s| {
            let mut m = BTreeMap::new();
            for w in walks_from(g, s) {
                *m.entry(walk_number(&w, vn.numbers())).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let mut counts = BTreeMap::new();
    for part in parts {
        for (k, v) in part {
            *counts.entry(k).or_insert(0) += v;
        }
    }
    Ok(Spectrum { counts })
}

/// Direct-sum ground truth for the grid output:
/// `a_k = sum_W mult(W) (i c (W - a_h))^k`, summed exactly then rounded once.
pub fn oracle_series(g: &Graph, c: &BigUint, m: usize, prec: u32, limit: usize) -> Result<NormalizedSeries> {
    let spectrum = walk_spectrum(g, limit)?;
    let a_h = BigInt::from(hamiltonian_frequency(g));
    let c = BigInt::from(c.clone());
    let shifted: Vec<(BigInt, BigInt)> = spectrum
        .iter()
        .map(|(w, mult)| (&c * (BigInt::from(w.clone()) - &a_h), BigInt::from(mult)))
        .collect();
    let coeffs = (0..=m)
        .into_par_iter()
        .map(|k| {
            let sum: BigInt = shifted.iter().map(|(freq, mult)| mult * Pow::pow(freq, k)).sum();
            // i^k selects the component and sign
            let sum = if k % 4 >= 2 { -sum } else { sum };
            let zero = BigInt::zero();
            if k % 2 == 0 {
                PrecisionComplex::from_bigints(&sum, &zero, prec)
            } else {
                PrecisionComplex::from_bigints(&zero, &sum, prec)
            }
        })
        .collect();
    Ok(NormalizedSeries::from_coeffs(coeffs, prec))
}

/// Outcome of grouping n-walks by walk-number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisitPairCheck {
    pub unique: bool,
    /// Two walks with equal walk-number but different visit counts.
    pub witness: Option<(Walk, Walk)>,
}

fn visit_counts(walk: &[usize], n: usize) -> Vec<u32> {
    let mut counts = vec![0u32; n];
    for &v in walk {
        counts[v] += 1;
    }
    counts
}

pub fn check_visit_pair_uniqueness(g: &Graph, limit: usize) -> Result<VisitPairCheck> {
    check_limit(g, limit)?;
    let vn = vertex_numbers(g.n());
    let mut first_seen: BTreeMap<BigUint, (Vec<u32>, Walk)> = BTreeMap::new();
    for w in enumerate_n_walks(g, limit)? {
        let counts = visit_counts(&w, g.n());
        match first_seen.entry(walk_number(&w, vn.numbers())) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((counts, w));
            }
            std::collections::btree_map::Entry::Occupied(e) => {
                let (seen, witness) = e.get();
                if *seen != counts {
                    return Ok(VisitPairCheck {
                        unique: false,
                        witness: Some((witness.clone(), w)),
                    });
                }
            }
        }
    }
    Ok(VisitPairCheck {
        unique: true,
        witness: None,
    })
}

/// The oracle block of a run report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub n_p: u64,
    pub n_h_directed: u64,
    /// Directed count halved; a single vertex is its own reverse, so n = 1 gives 1.
    pub n_h_undirected: u64,
}

pub fn oracle_summary(g: &Graph, limit: usize) -> Result<OracleSummary> {
    let spectrum = walk_spectrum(g, limit)?;
    let directed = count_hamiltonian_paths(g, limit)?;
    Ok(OracleSummary {
        n_p: spectrum.total(),
        n_h_directed: directed,
        n_h_undirected: if g.n() == 1 { directed } else { directed / 2 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        Graph::with_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (3, 2)]).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::with_edges(n, &edges).unwrap()
    }

    #[test]
    fn enumerates_p2_walks_in_order() {
        let g = path(2);
        let walks: Vec<Walk> = enumerate_n_walks(&g, 7).unwrap().collect();
        assert_eq!(walks, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn edgeless_and_single_vertex() {
        let g = Graph::new(2).unwrap();
        assert_eq!(enumerate_n_walks(&g, 7).unwrap().count(), 0);
        assert_eq!(count_hamiltonian_paths(&Graph::new(3).unwrap(), 7).unwrap(), 0);
        let one = Graph::new(1).unwrap();
        assert_eq!(enumerate_n_walks(&one, 7).unwrap().collect::<Vec<_>>(), vec![vec![0]]);
        let s = walk_spectrum(&one, 7).unwrap();
        assert_eq!(s.get(&BigUint::from(1u32)), 1);
        assert_eq!(s.total(), 1);
    }

    #[test]
    fn four_vertex_example_counts() {
        let g = diamond();
        assert_eq!(enumerate_n_walks(&g, 7).unwrap().count(), 66);
        assert_eq!(count_hamiltonian_paths(&g, 7).unwrap(), 12);
        let s = walk_spectrum(&g, 7).unwrap();
        assert_eq!(s.get(&BigUint::from(340u32)), 12);
        assert_eq!(s.total(), 66);
        let summary = oracle_summary(&g, 7).unwrap();
        assert_eq!(summary.n_h_undirected, 6);
    }

    #[test]
    fn enumeration_is_lexicographic_and_valid() {
        let g = diamond();
        let walks: Vec<Walk> = enumerate_n_walks(&g, 7).unwrap().collect();
        assert!(walks.windows(2).all(|w| w[0] < w[1]));
        for w in &walks {
            assert!(w.windows(2).all(|p| g.has_edge(p[0], p[1])));
        }
    }

    #[test]
    fn path_three_has_two_directed_paths() {
        assert_eq!(count_hamiltonian_paths(&path(3), 7).unwrap(), 2);
    }

    #[test]
    fn p2_spectrum_and_series() {
        let g = path(2);
        let s = walk_spectrum(&g, 7).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(&BigUint::from(6u32)), 2);
        let series = oracle_series(&g, &BigUint::from(5u32), 6, 64, 7).unwrap();
        let mut expected = NormalizedSeries::zero(6, 64);
        expected = expected
            .add(&NormalizedSeries::constant(PrecisionComplex::from_i64(2, 0, 64), 6, 64))
            .unwrap();
        assert_eq!(series, expected);
        let empty = oracle_series(&Graph::new(2).unwrap(), &BigUint::from(1u32), 4, 64, 7).unwrap();
        assert_eq!(empty, NormalizedSeries::zero(4, 64));
    }

    #[test]
    fn visit_pairs_unique_on_small_graphs() {
        assert!(
            check_visit_pair_uniqueness(&Graph::complete(4).unwrap(), 7)
                .unwrap()
                .unique
        );
        assert!(check_visit_pair_uniqueness(&path(2), 7).unwrap().unique);
    }

    #[test]
    fn refuses_above_limit() {
        let g = path(8);
        assert_eq!(
            enumerate_n_walks(&g, 7).err(),
            Some(Error::OracleLimit { n: 8, limit: 7 })
        );
        assert!(count_hamiltonian_paths(&g, 8).is_ok());
    }
}
