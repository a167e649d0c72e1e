use std::collections::VecDeque;

use super::{Gate, GateError};

/// Output of [`route`].
#[derive(Debug, Clone, PartialEq)]
pub struct Routed {
    pub gates: Vec<Gate>,
    pub swaps_inserted: usize,
    /// Logical qubit → physical qubit after the last gate.
    pub final_layout: Vec<usize>,
}

struct Coupling {
    adj: Vec<Vec<usize>>,
}

impl Coupling {
    fn new(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if a < n && b < n && a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { adj }
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Shortest path `from … to`, visiting neighbours in ascending order.
    fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.adj.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut v = to;
                while v != from {
                    v = prev[v];
                    path.push(v);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.adj[u] {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// Maps logical gates onto physical qubits under an undirected coupling map.
///
/// A two-qubit gate on non-adjacent qubits moves the first operand along a
/// BFS shortest path with SWAPs until it neighbours the second. SWAPs are
/// never undone; the layout is carried forward instead.
pub fn route(gates: &[Gate], n: usize, coupling: &[(usize, usize)]) -> Result<Routed, GateError> {
    let graph = Coupling::new(n, coupling);
    let mut l2p: Vec<usize> = (0..n).collect();
    let mut p2l: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(gates.len());
    let mut swaps = 0;
    for g in gates {
        let (q, arity) = g.qubits();
        if arity == 2 {
            let (pa, pb) = (l2p[q[0]], l2p[q[1]]);
            if !graph.adjacent(pa, pb) {
                let path = graph.path(pa, pb).ok_or(GateError::DisconnectedCoupling(pa, pb))?;
                for w in path[..path.len() - 1].windows(2) {
                    let (x, y) = (w[0], w[1]);
                    out.push(Gate::Swap(x, y));
                    swaps += 1;
                    let (lx, ly) = (p2l[x], p2l[y]);
                    p2l.swap(x, y);
                    l2p[lx] = y;
                    l2p[ly] = x;
                }
            }
        }
        out.push(g.map_qubits(|l| l2p[l]));
    }
    Ok(Routed { gates: out, swaps_inserted: swaps, final_layout: l2p })
}
