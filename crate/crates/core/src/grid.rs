//! Layered wavefront construction of the polynomial form of `f(t)`.
//!
//! Depth 1 puts `e^{i n^l t}` on wire `l`. Each later depth sums the
//! previous depth's wires over the neighbors of `l` and multiplies by
//! `e^{i n^l t}`, so after `d` depths wire `l` carries the sum of `e^{iWt}`
//! over all `d`-walks ending at `l`. Summing the wires at depth `n` gives
//! `x(t)`, then `y(t) = x(t) e^{-i a_h t}` and `f(t) = y(ct)`.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{hamiltonian_frequency, vertex_numbers, Graph};
use crate::numerics::{NormalizedSeries, PrecisionComplex, PrecisionReal};
use crate::schedule::PipelineProfile;

/// Wire series at one depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridState {
    wires: Vec<NormalizedSeries>,
    depth: usize,
}

impl GridState {
    pub fn wires(&self) -> &[NormalizedSeries] {
        &self.wires
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Sum of all wires, ascending vertex index.
    pub fn total(&self) -> NormalizedSeries {
        let first = NormalizedSeries::zero(self.wires[0].degree_bound(), self.wires[0].prec());
        self.wires
            .iter()
            .fold(first, |acc, w| acc.add(w).expect("wires share degree and precision"))
    }
}

fn imaginary_exp(freq: &BigUint, m: usize, p: u32) -> NormalizedSeries {
    let lambda = PrecisionComplex::new(PrecisionReal::zero(p), PrecisionReal::from_biguint(freq, p));
    NormalizedSeries::exp(&lambda, m, p)
}

/// Per-vertex factors `e^{i n^l t}`.
fn vertex_exponentials(g: &Graph, m: usize, p: u32) -> Vec<NormalizedSeries> {
    vertex_numbers(g.n())
        .numbers()
        .par_iter()
        .map(|v| imaginary_exp(v, m, p))
        .collect()
}

fn advance(g: &Graph, state: &GridState, exps: &[NormalizedSeries], m: usize, p: u32) -> GridState {
    let wires = (0..g.n())
        .into_par_iter()
        .map(|l| {
            let mut incoming = NormalizedSeries::zero(m, p);
            let mut any = false;
            for j in g.neighbors(l) {
                incoming = incoming.add(&state.wires[j]).expect("uniform wires");
                any = true;
            }
            if any {
                incoming.mul(&exps[l], m).expect("uniform wires")
            } else {
                incoming
            }
        })
        .collect();
    GridState {
        wires,
        depth: state.depth + 1,
    }
}

fn check_inputs(g: &Graph, m: usize, p: u32) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::Config("the grid needs at least two vertices".into()));
    }
    if m == 0 {
        return Err(Error::Config("grid degree bound must be positive".into()));
    }
    if p < crate::numerics::MIN_PRECISION {
        return Err(Error::Config(format!("precision {p} is too small")));
    }
    Ok(())
}

/// Wire series at `depth` (1-based), degree `m`, precision `p`.
pub fn grid_intermediate_with(g: &Graph, m: usize, p: u32, depth: usize) -> Result<GridState> {
    check_inputs(g, m, p)?;
    if depth == 0 || depth > g.n() {
        return Err(Error::Config(format!("depth {depth} outside 1..={}", g.n())));
    }
    let exps = vertex_exponentials(g, m, p);
    let mut state = GridState {
        wires: exps.clone(),
        depth: 1,
    };
    while state.depth < depth {
        state = advance(g, &state, &exps, m, p);
    }
    Ok(state)
}

/// `f(t)` at degree `m`, precision `p`, time scale `c`.
pub fn grid_series_with(g: &Graph, m: usize, p: u32, c: &BigUint) -> Result<NormalizedSeries> {
    if c.is_zero() {
        return Err(Error::Config("time scale c must be positive".into()));
    }
    let x = grid_intermediate_with(g, m, p, g.n())?.total();
    let lambda = PrecisionComplex::new(
        PrecisionReal::zero(p),
        PrecisionReal::from_biguint(&hamiltonian_frequency(g), p).neg(),
    );
    let y = x.mul(&NormalizedSeries::exp(&lambda, m, p), m)?;
    Ok(y.scale_time(c))
}

pub fn grid_intermediate(g: &Graph, profile: &PipelineProfile, depth: usize) -> Result<GridState> {
    let d = profile.desk_params()?;
    grid_intermediate_with(g, d.n_d1, d.p_1, depth)
}

/// `f(t)` at the profile's `n_d1`, `p_1` and `c`.
pub fn grid_series(g: &Graph, profile: &PipelineProfile) -> Result<NormalizedSeries> {
    let d = profile.desk_params()?;
    grid_series_with(g, d.n_d1, d.p_1, &d.c)
}
