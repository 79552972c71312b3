use std::collections::HashSet;

use serde::Serialize;

use crate::cyclotomic::CycElem;
use crate::error::{Error, Result};
use crate::matrices::{Graph, WalkMatrix};

/// Default cap on the number of walks a single enumeration may produce.
pub const WALK_BUDGET: u128 = 5_000_000;

/// An element r^k s^f of the dihedral group D_N, with k in [0, N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dihedral {
    pub k: usize,
    pub reflect: bool,
}

impl Dihedral {
    pub fn rotation(k: usize, order: usize) -> Self {
        Self { k: k % order, reflect: false }
    }

    /// r^k s.
    pub fn reflection(k: usize, order: usize) -> Self {
        Self { k: k % order, reflect: true }
    }

    pub fn identity() -> Self {
        Self { k: 0, reflect: false }
    }

    /// All 2N elements: rotations first, then reflections.
    pub fn all(order: usize) -> impl Iterator<Item = Dihedral> {
        (0..order).map(move |k| Self::rotation(k, order)).chain((0..order).map(move |k| Self::reflection(k, order)))
    }

    /// The product self·other, using s r^k = r^{−k} s.
    pub fn compose(self, other: Dihedral, order: usize) -> Dihedral {
        let k = if self.reflect { self.k + order - other.k } else { self.k + other.k };
        Dihedral { k: k % order, reflect: self.reflect ^ other.reflect }
    }

    pub fn inverse(self, order: usize) -> Dihedral {
        if self.reflect {
            self
        } else {
            Self::rotation(order - self.k, order)
        }
    }
}

/// A closed walk (w_0, …, w_N) with w_N = w_0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    vertices: Vec<usize>,
}

impl Walk {
    /// Builds a closed walk from w_0..w_N; the last vertex must equal the first.
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 2 || vertices.first() != vertices.last() {
            return Err(Error::Walk(format!("{vertices:?} is not a closed walk")));
        }
        Ok(Self { vertices })
    }

    /// Builds the closed walk w_0, …, w_{N−1}, w_0 from its cyclic part.
    pub fn from_cycle(cycle: &[usize]) -> Result<Self> {
        let first = *cycle.first().ok_or_else(|| Error::Walk("empty walk".into()))?;
        let mut vertices = cycle.to_vec();
        vertices.push(first);
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// The length N.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.vertices.windows(2).all(|w| w[0] < g.n() && w[1] < g.n() && g.is_step(w[0], w[1]))
    }

    /// No two consecutive vertices are equal.
    pub fn is_simple(&self) -> bool {
        self.vertices.windows(2).all(|w| w[0] != w[1])
    }

    /// w^k = (w_k, w_{k+1}, …, w_{k+N}), indices mod N.
    pub fn rotate(&self, k: usize) -> Walk {
        let n = self.len();
        let vertices = (0..=n).map(|i| self.vertices[(i + k) % n]).collect();
        Walk { vertices }
    }

    /// wᵀ = (w_N, …, w_0).
    pub fn reverse(&self) -> Walk {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Walk { vertices }
    }

    /// Image under r^k s^f: first reverse if f, then rotate by k.
    pub fn act(&self, g: Dihedral) -> Walk {
        if g.reflect {
            self.reverse().rotate(g.k)
        } else {
            self.rotate(g.k)
        }
    }

    pub fn is_palindromic(&self) -> bool {
        self.vertices.iter().eq(self.vertices.iter().rev())
    }

    /// Smallest p > 0 with w^p = w.
    pub fn rotation_period(&self) -> usize {
        let n = self.len();
        (1..=n).find(|&p| n % p == 0 && self.rotate(p) == *self).unwrap_or(n)
    }

    /// κ(w) = min{k ≥ 1 : w^{N/2^k} ≠ w} for a simple palindromic walk.
    ///
    /// The walk being simple and palindromic forces 2^k | N whenever
    /// w^{N/2^i} = w for all i < k; a violation is reported as such.
    pub fn kappa(&self) -> Result<u32> {
        if !self.is_palindromic() || !self.is_simple() {
            return Err(Error::domain("kappa is defined for simple palindromic walks"));
        }
        let n = self.len();
        let mut k = 1u32;
        loop {
            let step = 1usize << k;
            if n % step != 0 {
                return Err(Error::TheoremViolation(format!(
                    "palindromic simple walk {:?} has w^(N/2^i) = w for i < {k} but 2^{k} does not divide N",
                    self.vertices
                )));
            }
            if self.rotate(n / step) != *self {
                return Ok(k);
            }
            k += 1;
        }
    }

    /// ψ(w) = N/2^{κ(w)}.
    pub fn psi(&self) -> Result<usize> {
        Ok(self.len() >> self.kappa()?)
    }

    /// Ψ(w): w^{ψ(w)} if palindromic, else wᵀ. Defined for simple walks.
    pub fn big_psi(&self) -> Result<Walk> {
        if !self.is_simple() {
            return Err(Error::domain("Psi is defined for simple walks"));
        }
        if self.is_palindromic() {
            Ok(self.rotate(self.psi()?))
        } else {
            Ok(self.reverse())
        }
    }

    /// JSON dump {"N", "vertices", "weight"} used for failure witnesses.
    pub fn dump(&self, weight: Option<&CycElem>) -> serde_json::Value {
        let weight = weight.map(|w| w.coords().iter().map(crate::serde_int::to_number).collect::<Vec<_>>());
        serde_json::json!({ "N": self.len(), "vertices": self.vertices, "weight": weight })
    }
}

/// Number of closed N-walks, tr(Adj^N), in exact u128 arithmetic
/// (saturating on overflow).
pub fn closed_walk_count(g: &Graph, len: usize) -> u128 {
    let adj: Vec<Vec<u128>> =
        g.adjacency().into_iter().map(|row| row.into_iter().map(u128::from).collect()).collect();
    let n = g.n();
    let mut cur: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect();
    for _ in 0..len {
        let mut next = vec![vec![0u128; n]; n];
        for i in 0..n {
            for k in 0..n {
                if cur[i][k] == 0 {
                    continue;
                }
                for j in 0..n {
                    if adj[k][j] != 0 {
                        next[i][j] = next[i][j].saturating_add(cur[i][k].saturating_mul(adj[k][j]));
                    }
                }
            }
        }
        cur = next;
    }
    (0..n).fold(0u128, |acc, i| acc.saturating_add(cur[i][i]))
}

/// All closed walks of length N in lexicographic order, optionally only the
/// simple ones.
pub fn closed_walks(g: &Graph, len: usize, simple_only: bool, budget: u128) -> Result<Vec<Walk>> {
    if len == 0 {
        return Err(Error::domain("closed walks need N >= 1"));
    }
    let needed = closed_walk_count(g, len);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut out = Vec::with_capacity(needed as usize);
    let mut path = Vec::with_capacity(len + 1);
    for start in 0..g.n() {
        path.clear();
        path.push(start);
        extend_closed(g, len, simple_only, &mut path, &mut out);
    }
    Ok(out)
}

fn extend_closed(g: &Graph, len: usize, simple_only: bool, path: &mut Vec<usize>, out: &mut Vec<Walk>) {
    let last = *path.last().expect("nonempty");
    if path.len() == len {
        let first = path[0];
        if g.is_step(last, first) && !(simple_only && last == first) {
            let mut vertices = path.clone();
            vertices.push(first);
            out.push(Walk { vertices });
        }
        return;
    }
    for next in 0..g.n() {
        if !g.is_step(last, next) || (simple_only && next == last) {
            continue;
        }
        path.push(next);
        extend_closed(g, len, simple_only, path, out);
        path.pop();
    }
}

/// All (open) walks with `steps` steps in lexicographic order, as vertex
/// sequences, restricted to steps accepted by `allow`.
pub fn open_walks(
    n: usize,
    steps: usize,
    budget: u128,
    allow: impl Fn(usize, usize) -> bool,
) -> Result<Vec<Vec<usize>>> {
    let needed = (n as u128).saturating_pow(steps as u32 + 1);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(steps + 1);
    fn go(n: usize, steps: usize, allow: &dyn Fn(usize, usize) -> bool, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == steps + 1 {
            out.push(path.clone());
            return;
        }
        let last = *path.last().expect("nonempty");
        for next in 0..n {
            if allow(last, next) {
                path.push(next);
                go(n, steps, allow, path, out);
                path.pop();
            }
        }
    }
    for start in 0..n {
        path.clear();
        path.push(start);
        go(n, steps, &allow, &mut path, &mut out);
    }
    Ok(out)
}

/// wt(w) = ∏ A_{w_i, w_{i+1}}; a zero factor means the step is not an edge
/// of Γ(H).
pub fn weight(a: &WalkMatrix, w: &Walk) -> Result<CycElem> {
    let mut acc = a.ring().one();
    for step in w.vertices().windows(2) {
        let (i, j) = (step[0], step[1]);
        if i >= a.n() || j >= a.n() {
            return Err(Error::Walk(format!("vertex out of range in {:?}", w.vertices())));
        }
        let entry = a.get(i, j);
        if entry.is_zero() {
            return Err(Error::Walk(format!("step {i} -> {j} is not an edge of the underlying graph")));
        }
        acc = &acc * entry;
    }
    Ok(acc)
}

/// The D_N orbit of a closed walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    /// The lexicographically smallest member.
    pub representative: Walk,
    /// All members, sorted.
    pub members: Vec<Walk>,
    pub palindromic_count: usize,
    pub simple: bool,
    /// κ and ψ of the smallest palindromic member, when one exists and the
    /// walks are simple.
    pub kappa: Option<u32>,
    pub psi: Option<usize>,
}

/// Orbit of w under D_N, N = len(w).
pub fn orbit(w: &Walk) -> Result<OrbitRecord> {
    let n = w.len();
    if n < 3 {
        return Err(Error::domain("the dihedral action needs N >= 3"));
    }
    let mut members: Vec<Walk> = Dihedral::all(n).map(|g| w.act(g)).collect();
    members.sort();
    members.dedup();
    let palindromes: Vec<&Walk> = members.iter().filter(|x| x.is_palindromic()).collect();
    let simple = w.is_simple();
    let (kappa, psi) = match palindromes.first() {
        Some(p) if simple => (Some(p.kappa()?), Some(p.psi()?)),
        _ => (None, None),
    };
    Ok(OrbitRecord {
        representative: members[0].clone(),
        palindromic_count: palindromes.len(),
        simple,
        kappa,
        psi,
        members,
    })
}

/// Partitions a set of closed walks (closed under D_N) into orbits, in order
/// of first appearance.
pub fn orbits(walks: &[Walk]) -> Result<Vec<OrbitRecord>> {
    let mut seen: HashSet<Walk> = HashSet::with_capacity(walks.len());
    let mut out = Vec::new();
    for w in walks {
        if seen.contains(w) {
            continue;
        }
        let rec = orbit(w)?;
        seen.extend(rec.members.iter().cloned());
        out.push(rec);
    }
    Ok(out)
}

/// fix(g): closed N-walks of `graph` equal to their image under g.
pub fn fix_set(graph: &Graph, len: usize, g: Dihedral, budget: u128) -> Result<Vec<Walk>> {
    if len < 3 {
        return Err(Error::domain("the dihedral action needs N >= 3"));
    }
    if g.k >= len {
        return Err(Error::domain(format!("rotation index {} out of range for N = {len}", g.k)));
    }
    Ok(closed_walks(graph, len, false, budget)?.into_iter().filter(|w| w.act(g) == *w).collect())
}
