// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Qubit connectivity graphs and the 65-qubit heavy-hex lattice.
//!
//! The lattice has five rows of degree-2 "row" qubits joined by three bridge
//! qubits per gap. Columns run 0..=10; the first row covers columns 0..=9,
//! the last row columns 1..=10, and the middle rows all eleven columns.
//! Gaps alternate between bridges at columns {0, 4, 8} and {2, 6, 10}.
//! Labels are assigned row by row, each bridge row following the row above
//! it, which reproduces the familiar 65-qubit Hummingbird numbering
//! (0..=9, 10..=12, 13..=23, 24..=26, ...). A sub-lattice of `n` qubits keeps
//! the first `n` labels.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HEAVY_HEX_QUBITS: usize = 65;

const ROW_COLUMNS: [(usize, usize); 5] = [(0, 9), (0, 10), (0, 10), (0, 10), (1, 10)];
const BRIDGE_COLUMNS: [[usize; 3]; 2] = [[0, 4, 8], [2, 6, 10]];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    n: usize,
    /// Sorted `(a, b)` pairs with `a < b`.
    edges: Vec<(usize, usize)>,
}

impl Topology {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::QubitOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop on qubit {a}")));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Topology { n, edges: out })
    }

    /// The heavy-hex lattice restricted to qubits `0..n`, `1 <= n <= 65`.
    pub fn heavy_hex(n: usize) -> Result<Self> {
        if n == 0 || n > HEAVY_HEX_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "heavy-hex size must be in 1..={HEAVY_HEX_QUBITS}, got {n}"
            )));
        }
        let full = full_heavy_hex_edges();
        Topology::from_edges(n, full.into_iter().filter(|&(a, b)| a < n && b < n))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == q {
                    Some(b)
                } else if b == q {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, q: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == q || b == q).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|q| self.degree(q)).max().unwrap_or(0)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Two-colouring of the vertices, or `None` if the graph has an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let adj = self.adjacency();
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let s = side[u].unwrap();
                for &v in &adj[u] {
                    match side[v] {
                        None => {
                            side[v] = Some(!s);
                            queue.push_back(v);
                        }
                        Some(t) if t == s => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Partitions the edges into `max_degree` matchings.
    ///
    /// Edges are coloured in sorted order; a conflict is resolved by swapping
    /// the two colours along the alternating path that starts at the blocked
    /// endpoint. This always succeeds on bipartite graphs.
    pub fn edge_matchings(&self) -> Result<Vec<Vec<(usize, usize)>>> {
        if self.bipartition().is_none() {
            return Err(Error::InvalidParameter(
                "edge partition into max-degree matchings needs a bipartite graph".into(),
            ));
        }
        let colors = self.max_degree();
        // at[v][c] = neighbour joined to v by an edge of colour c.
        let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; colors]; self.n];
        for &(u, v) in &self.edges {
            let free = |at: &Vec<Vec<Option<usize>>>, x: usize| {
                (0..colors).find(|&c| at[x][c].is_none()).expect("degree bound")
            };
            let a = free(&at, u);
            let b = free(&at, v);
            if at[v][a].is_some() {
                // Walk the a/b path from v and swap its colours.
                let mut path = vec![v];
                let mut cur = v;
                let mut c = a;
                while let Some(next) = at[cur][c] {
                    path.push(next);
                    cur = next;
                    c = if c == a { b } else { a };
                }
                let mut c = a;
                for w in path.windows(2) {
                    let (x, y) = (w[0], w[1]);
                    at[x][c] = None;
                    at[y][c] = None;
                    c = if c == a { b } else { a };
                }
                let mut c = a;
                for w in path.windows(2) {
                    let other = if c == a { b } else { a };
                    at[w[0]][other] = Some(w[1]);
                    at[w[1]][other] = Some(w[0]);
                    c = other;
                }
            }
            at[u][a] = Some(v);
            at[v][a] = Some(u);
        }
        let mut out = vec![Vec::new(); colors];
        for &(u, v) in &self.edges {
            let c = (0..colors).find(|&c| at[u][c] == Some(v)).unwrap();
            out[c].push((u, v));
        }
        Ok(out)
    }
}

fn full_heavy_hex_edges() -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut next = 0usize;
    let mut row_labels: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut bridge_labels: Vec<Vec<usize>> = Vec::new();
    for (r, &(lo, hi)) in ROW_COLUMNS.iter().enumerate() {
        let row: Vec<(usize, usize)> = (lo..=hi)
            .map(|col| {
                next += 1;
                (col, next - 1)
            })
            .collect();
        row_labels.push(row);
        if r + 1 < ROW_COLUMNS.len() {
            bridge_labels.push((0..3).map(|k| next + k).collect());
            next += 3;
        }
    }
    let label_at = |row: &[(usize, usize)], col: usize| {
        row.iter().find(|&&(c, _)| c == col).map(|&(_, l)| l).unwrap()
    };
    for row in &row_labels {
        for w in row.windows(2) {
            edges.push((w[0].1, w[1].1));
        }
    }
    for (gap, bridges) in bridge_labels.iter().enumerate() {
        for (k, &b) in bridges.iter().enumerate() {
            let col = BRIDGE_COLUMNS[gap % 2][k];
            edges.push((label_at(&row_labels[gap], col), b));
            edges.push((b, label_at(&row_labels[gap + 1], col)));
        }
    }
    debug_assert_eq!(next, HEAVY_HEX_QUBITS);
    edges
}

/// The three CNOT layer presets on the first `n` heavy-hex qubits.
///
/// The full 65-qubit edge set is split into three matchings once; smaller
/// lattices keep the edges that fall inside them, so a preset on `n` qubits
/// is always a restriction of the preset on 65. Each pair is
/// `(control, target)` with the lower label as control.
pub fn heavy_hex_presets(n: usize) -> Result<[Vec<(usize, usize)>; 3]> {
    let sub = Topology::heavy_hex(n)?;
    let full = Topology::heavy_hex(HEAVY_HEX_QUBITS)?;
    let matchings = full.edge_matchings()?;
    let keep = |m: &Vec<(usize, usize)>| -> Vec<(usize, usize)> {
        m.iter().copied().filter(|&(a, b)| a < sub.n && b < sub.n).collect()
    };
    Ok([keep(&matchings[0]), keep(&matchings[1]), keep(&matchings[2])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn full_lattice_shape() {
        let t = Topology::heavy_hex(65).unwrap();
        assert_eq!(t.edges().len(), 72);
        assert!(t.max_degree() <= 3);
        assert!(t.is_connected());
        assert!(t.bipartition().is_some());
        // Spot-check the familiar numbering.
        for e in [(0, 10), (10, 13), (4, 11), (11, 17), (15, 24), (24, 29), (52, 56), (54, 64)] {
            assert!(t.edges().contains(&e), "missing {e:?}");
        }
    }

    #[test]
    fn small_sizes() {
        let one = Topology::heavy_hex(1).unwrap();
        assert!(one.edges().is_empty());
        assert!(Topology::heavy_hex(0).is_err());
        assert!(Topology::heavy_hex(66).is_err());
    }

    #[test]
    fn sub_lattice_is_a_restriction() {
        let full = Topology::heavy_hex(65).unwrap();
        let restricted: Vec<_> = full
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| a < 10 && b < 10)
            .collect();
        assert_eq!(Topology::heavy_hex(10).unwrap().edges(), &restricted[..]);
    }

    #[test]
    fn sweep_sizes_are_connected() {
        for n in (10..=60).step_by(10).chain([65]) {
            assert!(Topology::heavy_hex(n).unwrap().is_connected(), "n = {n}");
        }
    }

    #[test]
    fn presets_are_matchings_covering_each_edge_once() {
        for n in [2, 10, 27, 40, 65] {
            let presets = heavy_hex_presets(n).unwrap();
            let mut seen = HashSet::new();
            for preset in &presets {
                let mut used = HashSet::new();
                for &(c, t) in preset {
                    assert!(used.insert(c) && used.insert(t), "not a matching");
                    assert!(seen.insert((c, t)), "edge in two presets");
                }
            }
            let topo = Topology::heavy_hex(n).unwrap();
            assert_eq!(seen.len(), topo.edges().len());
            for e in topo.edges() {
                assert!(seen.contains(e));
            }
        }
    }

    #[test]
    fn explicit_edges() {
        let t = Topology::from_edges(4, [(1, 0), (2, 1), (0, 1)]).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (1, 2)]);
        assert!(!t.is_connected());
        assert!(Topology::from_edges(2, [(0, 2)]).is_err());
        let triangle = Topology::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(triangle.edge_matchings().is_err());
    }
}
