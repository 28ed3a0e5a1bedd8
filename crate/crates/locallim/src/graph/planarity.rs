//! Left-right planarity criterion.
//!
//! Iterative implementation of the LR test: a DFS orientation computing
//! lowpoints and nesting order, followed by the constraint phase that keeps a
//! stack of conflict pairs of return-edge intervals. No embedding is
//! produced; only the planar / non-planar verdict is needed here.

use super::Graph;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Interval {
    low: u32,
    high: u32,
}

impl Interval {
    const EMPTY: Interval = Interval {
        low: NONE,
        high: NONE,
    };

    fn is_empty(&self) -> bool {
        self.low == NONE && self.high == NONE
    }
}

#[derive(Clone, Copy, Debug)]
struct ConflictPair {
    l: Interval,
    r: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.l, &mut self.r);
    }
}

struct Lr {
    /// Out-neighbour lists of the DFS orientation: `(target, edge id)`.
    out: Vec<Vec<(u32, u32)>>,
    parent_edge: Vec<u32>,
    height: Vec<u32>,
    // per directed edge (indexed by undirected edge id; each is oriented once)
    src: Vec<u32>,
    dst: Vec<u32>,
    lowpt: Vec<u32>,
    lowpt2: Vec<u32>,
    nesting: Vec<u32>,
    lowpt_edge: Vec<u32>,
    refer: Vec<u32>,
    stack_bottom: Vec<u32>,
    stack: Vec<ConflictPair>,
}

impl Lr {
    fn lowest(&self, p: &ConflictPair) -> u32 {
        if p.l.is_empty() {
            return self.lowpt[p.r.low as usize];
        }
        if p.r.is_empty() {
            return self.lowpt[p.l.low as usize];
        }
        self.lowpt[p.l.low as usize].min(self.lowpt[p.r.low as usize])
    }

    fn conflicting(&self, i: &Interval, b: u32) -> bool {
        !i.is_empty() && self.lowpt[i.high as usize] > self.lowpt[b as usize]
    }

    fn orient_from(&mut self, root: usize, adj: &[Vec<(u32, u32)>], oriented: &mut [bool]) {
        let mut stack = vec![root as u32];
        let mut ind = vec![0usize; adj.len()];
        let mut pending: Vec<u32> = vec![NONE; adj.len()]; // edge whose post-work is due at v
        self.height[root] = 0;
        while let Some(&v) = stack.last() {
            let v = v as usize;
            let e = self.parent_edge[v];
            let mut descended = false;
            while ind[v] < adj[v].len() || pending[v] != NONE {
                let id;
                if pending[v] != NONE {
                    id = pending[v];
                    pending[v] = NONE;
                } else {
                    let (w, eid) = adj[v][ind[v]];
                    ind[v] += 1;
                    if oriented[eid as usize] {
                        continue;
                    }
                    oriented[eid as usize] = true;
                    self.src[eid as usize] = v as u32;
                    self.dst[eid as usize] = w;
                    self.lowpt[eid as usize] = self.height[v];
                    self.lowpt2[eid as usize] = self.height[v];
                    if self.height[w as usize] == NONE {
                        // tree edge: visit w, finish this edge afterwards
                        self.parent_edge[w as usize] = eid;
                        self.height[w as usize] = self.height[v] + 1;
                        pending[v] = eid;
                        stack.push(w);
                        descended = true;
                        break;
                    }
                    // back edge
                    self.lowpt[eid as usize] = self.height[w as usize];
                    id = eid;
                }
                let i = id as usize;
                self.nesting[i] = 2 * self.lowpt[i];
                if self.lowpt2[i] < self.height[v] {
                    self.nesting[i] += 1; // chordal
                }
                if e != NONE {
                    let e = e as usize;
                    if self.lowpt[i] < self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[i]);
                        self.lowpt[e] = self.lowpt[i];
                    } else if self.lowpt[i] > self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[i]);
                    } else {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[i]);
                    }
                }
            }
            if !descended {
                stack.pop();
            }
        }
    }

    fn add_constraints(&mut self, ei: u32, e: u32) -> bool {
        let mut p = ConflictPair {
            l: Interval::EMPTY,
            r: Interval::EMPTY,
        };
        // merge return edges of ei into p.r
        loop {
            let mut q = match self.stack.pop() {
                Some(q) => q,
                None => return false,
            };
            if !q.l.is_empty() {
                q.swap();
            }
            if !q.l.is_empty() {
                return false; // not planar
            }
            if self.lowpt[q.r.low as usize] > self.lowpt[e as usize] {
                // merge intervals
                if p.r.is_empty() {
                    p.r.high = q.r.high;
                } else {
                    self.refer[p.r.low as usize] = q.r.high;
                }
                p.r.low = q.r.low;
            } else {
                // align
                self.refer[q.r.low as usize] = self.lowpt_edge[e as usize];
            }
            if self.stack.len() as u32 == self.stack_bottom[ei as usize] {
                break;
            }
        }
        // merge conflicting return edges of previous siblings into p.l
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.l, ei) || self.conflicting(&top.r, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.r, ei) {
                q.swap();
            }
            if self.conflicting(&q.r, ei) {
                return false; // not planar
            }
            // merge interval below lowpt(ei) into p.r
            self.refer[p.r.low as usize] = q.r.high;
            if q.r.low != NONE {
                p.r.low = q.r.low;
            }
            if p.l.is_empty() {
                p.l.high = q.l.high;
            } else {
                self.refer[p.l.low as usize] = q.l.high;
            }
            p.l.low = q.l.low;
        }
        if !(p.l.is_empty() && p.r.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: u32) {
        let u = self.src[e as usize] as usize;
        // drop entire conflict pairs that end at the parent
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            // trim left interval
            while p.l.high != NONE && self.dst[p.l.high as usize] as usize == u {
                p.l.high = self.refer[p.l.high as usize];
            }
            if p.l.high == NONE && p.l.low != NONE {
                self.refer[p.l.low as usize] = p.r.low;
                p.l.low = NONE;
            }
            // trim right interval
            while p.r.high != NONE && self.dst[p.r.high as usize] as usize == u {
                p.r.high = self.refer[p.r.high as usize];
            }
            if p.r.high == NONE && p.r.low != NONE {
                self.refer[p.r.low as usize] = p.l.low;
                p.r.low = NONE;
            }
            self.stack.push(p);
        }
        // the side bookkeeping of a highest return edge only matters for
        // embeddings; for the verdict we can stop here
        if self.lowpt[e as usize] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let hl = top.l.high;
                let hr = top.r.high;
                if hl != NONE && (hr == NONE || self.lowpt[hl as usize] > self.lowpt[hr as usize]) {
                    self.refer[e as usize] = hl;
                } else {
                    self.refer[e as usize] = hr;
                }
            }
        }
    }

    fn test_from(&mut self, root: usize) -> bool {
        let mut stack = vec![root as u32];
        let mut ind = vec![0usize; self.out.len()];
        let mut pending: Vec<u32> = vec![NONE; self.out.len()];
        while let Some(&v) = stack.last() {
            let v = v as usize;
            let e = self.parent_edge[v];
            let mut descended = false;
            while ind[v] < self.out[v].len() || pending[v] != NONE {
                let ei;
                let w;
                if pending[v] != NONE {
                    ei = pending[v];
                    w = self.dst[ei as usize];
                    pending[v] = NONE;
                } else {
                    let (tw, eid) = self.out[v][ind[v]];
                    ind[v] += 1;
                    self.stack_bottom[eid as usize] = self.stack.len() as u32;
                    if eid == self.parent_edge[tw as usize] {
                        // tree edge: recurse, run the return-edge block afterwards
                        pending[v] = eid;
                        stack.push(tw);
                        descended = true;
                        break;
                    }
                    // back edge
                    self.lowpt_edge[eid as usize] = eid;
                    self.stack.push(ConflictPair {
                        l: Interval::EMPTY,
                        r: Interval { low: eid, high: eid },
                    });
                    ei = eid;
                    w = tw;
                }
                let _ = w;
                // integrate new return edges
                if self.lowpt[ei as usize] < self.height[v] {
                    if Some(&ei) == self.out[v].first().map(|(_, id)| id) {
                        self.lowpt_edge[e as usize] = self.lowpt_edge[ei as usize];
                    } else if !self.add_constraints(ei, e) {
                        return false;
                    }
                }
            }
            if !descended {
                stack.pop();
                if e != NONE {
                    self.remove_back_edges(e);
                }
            }
        }
        true
    }
}

pub(super) fn is_planar(g: &Graph) -> bool {
    let n = g.n();
    let m = g.m();
    if n >= 3 && m > 3 * n - 6 {
        return false;
    }
    if n < 5 || m < 9 {
        // a Kuratowski subdivision needs at least e(K3,3) = 9 edges
        return true;
    }
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n + 1];
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        adj[u].push((v as u32, id as u32));
        adj[v].push((u as u32, id as u32));
    }
    let mut lr = Lr {
        out: Vec::new(),
        parent_edge: vec![NONE; n + 1],
        height: vec![NONE; n + 1],
        src: vec![NONE; m],
        dst: vec![NONE; m],
        lowpt: vec![0; m],
        lowpt2: vec![0; m],
        nesting: vec![0; m],
        lowpt_edge: vec![NONE; m],
        refer: vec![NONE; m],
        stack_bottom: vec![0; m],
        stack: Vec::new(),
    };
    let mut oriented = vec![false; m];
    let mut roots = Vec::new();
    for v in 1..=n {
        if lr.height[v] == NONE {
            roots.push(v);
            lr.orient_from(v, &adj, &mut oriented);
        }
    }
    // out-adjacency ordered by nesting depth
    let mut out: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n + 1];
    for id in 0..m {
        out[lr.src[id] as usize].push((lr.dst[id], id as u32));
    }
    for o in out.iter_mut().skip(1) {
        o.sort_by_key(|&(_, id)| lr.nesting[id as usize]);
    }
    lr.out = out;
    for &v in &roots {
        if !lr.test_from(v) {
            return false;
        }
    }
    true
}
