//! Undirected simple graphs, vertex-numbers and the graph file format.
//!
//! Graph files are line oriented:
//!
//! ```text
//! # comment
//! n 4
//! e 1 2
//! e 2 3
//! ```
//!
//! Indices in files are 1-based; in memory vertex `l` is 0-based and carries
//! the vertex-number `n^(l+1)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::format::text_lines;

/// Largest vertex count accepted from a file.
pub const MAX_VERTICES: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("a graph needs at least one vertex".into()));
        }
        Ok(Graph {
            n,
            adjacency: vec![BTreeSet::new(); n],
        })
    }

    /// Builds a graph from 0-based edge pairs; duplicates collapse.
    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b)?;
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.n || b >= self.n {
            return Err(Error::Config(format!(
                "edge ({a}, {b}) references a vertex outside 0..{}",
                self.n
            )));
        }
        if a == b {
            return Err(Error::Config(format!("self-loop at vertex {a}")));
        }
        self.adjacency[a].insert(b);
        self.adjacency[b].insert(a);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency.get(a).is_some_and(|s| s.contains(&b))
    }

    /// Neighbors of `l` in ascending index order.
    pub fn neighbors(&self, l: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[l].iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as 0-based pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, set) in self.adjacency.iter().enumerate() {
            out.extend(set.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    /// Renders the graph in the file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (a, b) in self.edges() {
            s.push_str(&format!("e {} {}\n", a + 1, b + 1));
        }
        s
    }
}

/// `numbers[l] = n^(l+1)` for `l = 0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexNumbering {
    numbers: Vec<BigUint>,
}

impl VertexNumbering {
    pub fn numbers(&self) -> &[BigUint] {
        &self.numbers
    }

    pub fn get(&self, l: usize) -> &BigUint {
        &self.numbers[l]
    }
}

pub fn vertex_numbers(n: usize) -> VertexNumbering {
    let base = BigUint::from(n);
    let mut numbers = Vec::with_capacity(n);
    let mut v = BigUint::one();
    for _ in 0..n {
        v *= &base;
        numbers.push(v.clone());
    }
    VertexNumbering { numbers }
}

/// `a_h = sum_l n^l`, the walk-number shared by every Hamiltonian path.
pub fn hamiltonian_frequency(g: &Graph) -> BigUint {
    vertex_numbers(g.n())
        .numbers
        .iter()
        .fold(BigUint::zero(), |acc, v| acc + v)
}

fn parse_index(token: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let token = token.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    token
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("{what} `{token}` is not a non-negative integer")))
}

pub fn parse_graph(bytes: &[u8]) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut last_line = 0;
    for (no, line) in text_lines(bytes) {
        last_line = no;
        let line = line?;
        let content = line.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(tag) = tokens.next() else {
            continue;
        };
        match tag {
            "n" => {
                if graph.is_some() {
                    return Err(Error::parse(no, "duplicate `n` line"));
                }
                let n = parse_index(tokens.next(), no, "vertex count")?;
                if n == 0 {
                    return Err(Error::parse(no, "vertex count must be at least 1"));
                }
                if n > MAX_VERTICES {
                    return Err(Error::parse(no, format!("vertex count exceeds {MAX_VERTICES}")));
                }
                graph = Some(Graph::new(n)?);
            }
            "e" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| Error::parse(no, "edge before the `n` line"))?;
                let a = parse_index(tokens.next(), no, "edge endpoint")?;
                let b = parse_index(tokens.next(), no, "edge endpoint")?;
                for v in [a, b] {
                    if v == 0 || v > g.n() {
                        return Err(Error::parse(no, format!("vertex index {v} out of range 1..={}", g.n())));
                    }
                }
                if a == b {
                    return Err(Error::parse(no, format!("self-loop at vertex {a}")));
                }
                g.add_edge(a - 1, b - 1)?;
            }
            other => return Err(Error::parse(no, format!("unknown line tag `{other}`"))),
        }
        if tokens.next().is_some() {
            return Err(Error::parse(no, "trailing tokens"));
        }
    }
    graph.ok_or_else(|| Error::parse(last_line.max(1), "missing `n <count>` line"))
}
