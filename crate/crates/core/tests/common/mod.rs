#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walkfilter::numerics::{PrecisionComplex, PrecisionReal};
use walkfilter::Graph;

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::with_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::with_edges(n, &edges).unwrap()
}

pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::with_edges(n, &edges).unwrap()
}

pub fn diamond() -> Graph {
    Graph::with_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (3, 2)]).unwrap()
}

pub fn is_connected(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every labeled simple graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::with_edges(n, &edges).unwrap()
    })
}

/// Connected fixtures with 2 <= n <= 5: paths, cycles, stars, complete
/// graphs, the four-vertex example and seeded random graphs.
pub fn fixtures() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push((format!("P{n}"), path(n)));
        out.push((format!("K{n}"), Graph::complete(n).unwrap()));
        if n >= 3 {
            out.push((format!("C{n}"), cycle(n)));
        }
        if n >= 4 {
            out.push((format!("S{n}"), star(n)));
        }
    }
    out.push(("diamond".into(), diamond()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut made = 0;
    while made < 20 {
        let n = rng.gen_range(3..=5);
        let mut g = Graph::new(n).unwrap();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        if is_connected(&g) {
            out.push((format!("R{made}"), g));
            made += 1;
        }
    }
    out
}

pub fn real(v: f64, p: u32) -> PrecisionReal {
    PrecisionReal::from_f64(v, p).unwrap()
}

pub fn cplx(re: f64, im: f64, p: u32) -> PrecisionComplex {
    PrecisionComplex::new(real(re, p), real(im, p))
}

/// `|a - b| <= 2^{-bits} * scale`, with `scale = max(|b|, floor)`.
pub fn close(a: &PrecisionComplex, b: &PrecisionComplex, bits: i64, floor: &PrecisionReal) -> bool {
    let p = a.prec().max(b.prec()) + 16;
    let diff = a.sub_prec(b, p).abs(p);
    let mag = b.abs(p);
    let scale = if mag.cmp_abs(floor).is_ge() { mag } else { floor.clone() };
    diff.cmp_abs(&scale.mul_pow2(-bits)).is_le()
}
