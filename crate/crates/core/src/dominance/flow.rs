//! Dinic maximum flow on real capacities.

use std::collections::VecDeque;

const EPS: f64 = 1e-15;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    rev: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            level: vec![-1; n],
            iter: vec![0; n],
        }
    }

    /// Adds `from → to` and returns its handle for [`Self::flow_on`].
    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> (usize, usize) {
        let rf = self.adj[to].len() + usize::from(from == to);
        let rt = self.adj[from].len();
        self.adj[from].push(Arc { to, cap, rev: rf });
        self.adj[to].push(Arc {
            to: from,
            cap: 0.0,
            rev: rt,
        });
        (from, rt)
    }

    /// Flow pushed along an edge: the capacity accumulated on its reverse arc.
    pub(crate) fn flow_on(&self, handle: (usize, usize)) -> f64 {
        let arc = &self.adj[handle.0][handle.1];
        self.adj[arc.to][arc.rev].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for a in &self.adj[v] {
                if a.cap > EPS && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[v] + 1;
                    queue.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: f64) -> f64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.adj[v].len() {
            let i = self.iter[v];
            let (to, cap) = (self.adj[v][i].to, self.adj[v][i].cap);
            if cap > EPS && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > EPS {
                    self.adj[v][i].cap -= d;
                    let rev = self.adj[v][i].rev;
                    self.adj[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0.0
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, f64::INFINITY);
                if f <= EPS {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `s` through arcs with residual capacity above `tol`.
    pub(crate) fn reachable(&self, s: usize, tol: f64) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for a in &self.adj[v] {
                if a.cap > tol && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // s=0, t=5; max flow 23 (CLRS figure 26.6).
        let mut g = FlowNetwork::new(6);
        for &(a, b, c) in &[
            (0, 1, 16.0),
            (0, 2, 13.0),
            (1, 3, 12.0),
            (2, 1, 4.0),
            (2, 4, 14.0),
            (3, 2, 9.0),
            (3, 5, 20.0),
            (4, 3, 7.0),
            (4, 5, 4.0),
        ] {
            g.add_edge(a, b, c);
        }
        assert!((g.max_flow(0, 5) - 23.0).abs() < 1e-12);
        let cut = g.reachable(0, 1e-12);
        assert!(cut[0] && !cut[5]);
    }
}
