use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// A simple undirected graph on at most 64 vertices, with optional loops.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    loops: u64,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graphs are limited to {MAX_VERTICES} vertices");
        Self { n, adj: vec![0; n], loops: 0 }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], loops: &[usize]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::domain(format!("graphs are limited to {MAX_VERTICES} vertices, got {n}")));
        }
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::domain(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            if i == j {
                g.set_loop(i, true);
            } else {
                g.add_edge(i, j);
            }
        }
        for &v in loops {
            if v >= n {
                return Err(Error::domain(format!("loop at {v} out of range for {n} vertices")));
            }
            g.set_loop(v, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
    }

    pub fn set_loop(&mut self, v: usize, on: bool) {
        if on {
            self.loops |= 1 << v;
        } else {
            self.loops &= !(1 << v);
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops >> v & 1 == 1
    }

    /// Whether a walk may step from i to j: an edge, or a loop when i = j.
    pub fn is_step(&self, i: usize, j: usize) -> bool {
        if i == j {
            self.has_loop(i)
        } else {
            self.has_edge(i, j)
        }
    }

    /// Neighbours of v that a walk can step to, loop included.
    pub fn step_mask(&self, v: usize) -> u64 {
        self.adj[v] | (self.loops >> v & 1) << v
    }

    pub fn loop_count(&self) -> usize {
        self.loops.count_ones() as usize
    }

    /// Number of neighbours, ignoring loops.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Every vertex has even degree.
    pub fn is_euler(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) % 2 == 0)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The 0/1 adjacency matrix with loops on the diagonal.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| u64::from(self.is_step(i, j))).collect()).collect()
    }

    /// Seidel switching: complements the edges between `part` and the rest.
    pub fn seidel_switch(&self, part: u64) -> Self {
        let mut g = self.clone();
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        for v in 0..self.n {
            let across = if part >> v & 1 == 1 { !part & all } else { part & all };
            g.adj[v] ^= across;
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let loops: Vec<usize> = (0..self.n).filter(|&v| self.has_loop(v)).collect();
        write!(f, "Graph(n={}, edges={:?}, loops={:?})", self.n, self.edges(), loops)
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let loops: Vec<usize> = (0..self.n).filter(|&v| self.has_loop(v)).collect();
        let mut st = s.serialize_struct("Graph", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges())?;
        st.serialize_field("loops", &loops)?;
        st.end()
    }
}
