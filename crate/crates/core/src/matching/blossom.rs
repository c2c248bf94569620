//! Primal-dual blossom algorithm for minimum-cost perfect matching.
//!
//! Costs are integers. Duals follow the cut formulation: every vertex and
//! every blossom carries one dual value, and an edge `uv` has slack
//! `c(uv) - y(u) - y(v) - sum z(B)` over the blossoms `B` that `uv` crosses.
//! For two vertices in different top-level nodes this equals
//! `c(uv) - Y(u) - Y(v)`, where `Y(x)` sums the duals of `x` and of every
//! blossom containing it.
//!
//! Free vertices are grown one alternating tree at a time. Inside a search
//! only the duals of labelled top-level nodes move, and they move in lock
//! step with a global offset `delta`, so they are stored lazily together with
//! the offset at which the node was labelled. Pending events (tight edge to a
//! free node, tight edge between two S nodes, T blossom reaching zero) sit in
//! binary heaps keyed by the offset at which they fire; stale entries are
//! discarded when popped.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::MatchingError;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Free,
    S,
    T,
}

/// Connection between consecutive children of a blossom: `local` lies in
/// `children[i]`, `remote` in `children[i + 1]`.
#[derive(Debug, Clone, Copy)]
struct Link {
    edge: usize,
    local: usize,
    remote: usize,
}

/// A simple graph with integer costs, in compressed adjacency form.
#[derive(Debug, Clone)]
pub(crate) struct CostGraph {
    pub n: usize,
    pub ends: Vec<[usize; 2]>,
    pub cost: Vec<i64>,
    adj_start: Vec<usize>,
    adj: Vec<usize>,
}

impl CostGraph {
    pub fn new(n: usize, ends: Vec<[usize; 2]>, cost: Vec<i64>) -> Self {
        let mut degree = vec![0usize; n + 1];
        for &[u, v] in &ends {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut adj_start = vec![0usize; n + 1];
        for v in 0..n {
            adj_start[v + 1] = adj_start[v] + degree[v];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![0usize; adj_start[n]];
        for (e, &[u, v]) in ends.iter().enumerate() {
            adj[fill[u]] = e;
            fill[u] += 1;
            adj[fill[v]] = e;
            fill[v] += 1;
        }
        Self {
            n,
            ends,
            cost,
            adj_start,
            adj,
        }
    }

    #[inline]
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    #[inline]
    pub fn other(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Grow(usize),
    Shrink(usize),
    Expand(usize),
}

type Queue = BinaryHeap<Reverse<(i64, usize)>>;

pub(crate) struct BlossomSolver<'g> {
    g: &'g CostGraph,
    n: usize,

    // per node: vertices are 0..n, blossoms n..2n
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    links: Vec<Vec<Link>>,
    base: Vec<usize>,
    dual: Vec<i64>,
    label: Vec<Label>,
    stamp: Vec<i64>,
    label_edge: Vec<usize>,
    label_in: Vec<usize>,
    label_out: Vec<usize>,
    unused: Vec<usize>,

    // per vertex
    top: Vec<usize>,
    path_sum: Vec<i64>,
    mate: Vec<usize>,

    // current search
    delta: i64,
    grow: Queue,
    shrink: Queue,
    expand: Queue,
    tree: Vec<usize>,
    mark: Vec<u32>,
    mark_gen: u32,
    scratch: Vec<usize>,
}

impl<'g> BlossomSolver<'g> {
    pub fn new(g: &'g CostGraph) -> Self {
        let n = g.n;
        Self {
            g,
            n,
            parent: vec![NONE; 2 * n],
            children: vec![Vec::new(); 2 * n],
            links: vec![Vec::new(); 2 * n],
            base: (0..n).chain(std::iter::repeat_n(NONE, n)).collect(),
            dual: vec![0; 2 * n],
            label: vec![Label::Free; 2 * n],
            stamp: vec![0; 2 * n],
            label_edge: vec![NONE; 2 * n],
            label_in: vec![NONE; 2 * n],
            label_out: vec![NONE; 2 * n],
            unused: (n..2 * n).rev().collect(),
            top: (0..n).collect(),
            path_sum: vec![0; n],
            mate: vec![NONE; n],
            delta: 0,
            grow: BinaryHeap::new(),
            shrink: BinaryHeap::new(),
            expand: BinaryHeap::new(),
            tree: Vec::new(),
            mark: vec![0; 2 * n],
            mark_gen: 0,
            scratch: Vec::new(),
        }
    }

    /// Run to completion and return the matched edge of every vertex.
    pub fn solve(mut self) -> Result<Solved, MatchingError> {
        if self.n % 2 == 1 {
            return Err(MatchingError::NoPerfectMatching);
        }
        self.greedy_start()?;
        for root in 0..self.n {
            if self.mate[root] == NONE {
                self.search(root)?;
            }
        }
        let certificate = Certificate::capture(&self);
        Ok(Solved {
            mate: self.mate,
            certificate,
        })
    }

    fn greedy_start(&mut self) -> Result<(), MatchingError> {
        let g = self.g;
        for v in 0..self.n {
            let min = g
                .incident(v)
                .iter()
                .map(|&e| g.cost[e])
                .min()
                .ok_or(MatchingError::NoPerfectMatching)?;
            // costs are even, so halves stay integral
            self.dual[v] = min / 2;
        }
        for v in 0..self.n {
            if self.mate[v] != NONE {
                continue;
            }
            let raise = g
                .incident(v)
                .iter()
                .map(|&e| g.cost[e] - self.dual[v] - self.dual[g.other(e, v)])
                .min()
                .unwrap_or(0);
            self.dual[v] += raise;
            for &e in g.incident(v) {
                let w = g.other(e, v);
                if self.mate[w] == NONE && g.cost[e] == self.dual[v] + self.dual[w] {
                    self.mate[v] = e;
                    self.mate[w] = e;
                    break;
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn dual_eff(&self, b: usize) -> i64 {
        match self.label[b] {
            Label::Free => self.dual[b],
            Label::S => self.dual[b] + (self.delta - self.stamp[b]),
            Label::T => self.dual[b] - (self.delta - self.stamp[b]),
        }
    }

    #[inline]
    fn y(&self, v: usize) -> i64 {
        self.path_sum[v] + self.dual_eff(self.top[v])
    }

    #[inline]
    fn slack(&self, e: usize) -> i64 {
        let [u, v] = self.g.ends[e];
        self.g.cost[e] - self.y(u) - self.y(v)
    }

    fn collect_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
            return;
        }
        let mut stack = vec![b];
        while let Some(x) = stack.pop() {
            if x < self.n {
                out.push(x);
            } else {
                stack.extend(self.children[x].iter().copied());
            }
        }
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(b, &mut out);
        out
    }

    fn next_mark(&mut self) -> u32 {
        self.mark_gen = self.mark_gen.wrapping_add(1);
        if self.mark_gen == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.mark_gen = 1;
        }
        self.mark_gen
    }

    // ---------------------------------------------------------------- search

    fn search(&mut self, root: usize) -> Result<(), MatchingError> {
        debug_assert_eq!(self.top[root], root);
        self.delta = 0;
        self.grow.clear();
        self.shrink.clear();
        self.expand.clear();
        self.tree.clear();

        self.assign_label(root, Label::S, NONE, NONE, NONE);
        self.scan_node(root);

        loop {
            match self.next_event()? {
                Event::Grow(e) => {
                    if self.on_grow(e) {
                        break;
                    }
                }
                Event::Shrink(e) => self.on_shrink(e),
                Event::Expand(b) => self.expand_tree_blossom(b),
            }
        }
        self.finish_search();
        Ok(())
    }

    fn assign_label(&mut self, b: usize, label: Label, edge: usize, inside: usize, outside: usize) {
        self.label[b] = label;
        self.stamp[b] = self.delta;
        self.label_edge[b] = edge;
        self.label_in[b] = inside;
        self.label_out[b] = outside;
        self.tree.push(b);
        if label == Label::T && b >= self.n {
            self.expand.push(Reverse((self.delta + self.dual[b], b)));
        }
    }

    /// Queue events for all edges leaving the S node `b`.
    fn scan_node(&mut self, b: usize) {
        let mut verts = std::mem::take(&mut self.scratch);
        verts.clear();
        self.collect_leaves(b, &mut verts);
        for &v in &verts {
            self.scan_vertex(v);
        }
        self.scratch = verts;
    }

    fn scan_vertex(&mut self, v: usize) {
        let g = self.g;
        let bv = self.top[v];
        for &e in g.incident(v) {
            let w = g.other(e, v);
            let bw = self.top[w];
            if bw == bv {
                continue;
            }
            match self.label[bw] {
                Label::S => {
                    let s = self.slack(e);
                    debug_assert!(s >= 0 && s % 2 == 0, "S-S slack {s} on edge {e}");
                    self.shrink.push(Reverse((self.delta + s / 2, e)));
                }
                Label::Free => {
                    let s = self.slack(e);
                    debug_assert!(s >= 0, "S-free slack {s} on edge {e}");
                    self.grow.push(Reverse((self.delta + s, e)));
                }
                Label::T => {}
            }
        }
    }

    /// Queue growth events for edges from a newly free node to S nodes.
    fn scan_free_node(&mut self, b: usize) {
        let g = self.g;
        for v in self.leaves(b) {
            for &e in g.incident(v) {
                let w = g.other(e, v);
                let bw = self.top[w];
                if bw != b && self.label[bw] == Label::S {
                    let s = self.slack(e);
                    debug_assert!(s >= 0);
                    self.grow.push(Reverse((self.delta + s, e)));
                }
            }
        }
    }

    fn next_event(&mut self) -> Result<Event, MatchingError> {
        loop {
            let heads = [
                self.grow.peek().map(|r| r.0),
                self.shrink.peek().map(|r| r.0),
                self.expand.peek().map(|r| r.0),
            ];
            let pick = heads
                .iter()
                .enumerate()
                .filter_map(|(i, h)| h.map(|(k, id)| (k, i, id)))
                .min()
                .ok_or(MatchingError::NoPerfectMatching)?;
            let (key, which, id) = pick;
            match which {
                0 => self.grow.pop(),
                1 => self.shrink.pop(),
                _ => self.expand.pop(),
            };
            if key < self.delta {
                continue;
            }
            self.delta = key;
            match which {
                0 => {
                    let [u, v] = self.g.ends[id];
                    let (bu, bv) = (self.top[u], self.top[v]);
                    let ok = bu != bv
                        && matches!(
                            (self.label[bu], self.label[bv]),
                            (Label::S, Label::Free) | (Label::Free, Label::S)
                        );
                    if ok && self.slack(id) == 0 {
                        return Ok(Event::Grow(id));
                    }
                }
                1 => {
                    let [u, v] = self.g.ends[id];
                    let (bu, bv) = (self.top[u], self.top[v]);
                    if bu != bv
                        && self.label[bu] == Label::S
                        && self.label[bv] == Label::S
                        && self.slack(id) == 0
                    {
                        return Ok(Event::Shrink(id));
                    }
                }
                _ => {
                    let b = id;
                    if self.parent[b] == NONE
                        && !self.children[b].is_empty()
                        && self.label[b] == Label::T
                        && self.dual_eff(b) == 0
                    {
                        return Ok(Event::Expand(b));
                    }
                }
            }
        }
    }

    /// Returns true when the search ended with an augmentation.
    fn on_grow(&mut self, e: usize) -> bool {
        let [u, v] = self.g.ends[e];
        let (s_v, f_v) = if self.label[self.top[u]] == Label::S {
            (u, v)
        } else {
            (v, u)
        };
        let fb = self.top[f_v];
        let fbase = self.base[fb];
        if self.mate[fbase] == NONE {
            self.augment(e, s_v, f_v);
            return true;
        }
        self.assign_label(fb, Label::T, e, f_v, s_v);
        let m = self.mate[fbase];
        let w = self.g.other(m, fbase);
        let wb = self.top[w];
        debug_assert_eq!(self.label[wb], Label::Free);
        self.assign_label(wb, Label::S, m, w, fbase);
        self.scan_node(wb);
        false
    }

    /// Tree parent of a labelled node, as a top-level node.
    #[inline]
    fn tree_parent(&self, b: usize) -> Option<usize> {
        let out = self.label_out[b];
        (out != NONE).then(|| self.top[out])
    }

    fn on_shrink(&mut self, e: usize) {
        let [u, v] = self.g.ends[e];
        let (bu, bv) = (self.top[u], self.top[v]);

        // nearest common S ancestor: walk both paths alternately
        let gen = self.next_mark();
        let mut a = Some(bu);
        let mut b = Some(bv);
        let lca = loop {
            if let Some(x) = a {
                if self.mark[x] == gen {
                    break x;
                }
                self.mark[x] = gen;
                a = self.tree_parent(x).and_then(|t| self.tree_parent(t));
            }
            if let Some(x) = b {
                if self.mark[x] == gen {
                    break x;
                }
                self.mark[x] = gen;
                b = self.tree_parent(x).and_then(|t| self.tree_parent(t));
            }
            if a.is_none() && b.is_none() {
                unreachable!("S nodes of one tree always share the root");
            }
        };
        self.add_blossom(lca, e, u, v);
    }

    fn add_blossom(&mut self, lca: usize, e: usize, u: usize, v: usize) {
        let nb = self.unused.pop().expect("blossom id pool exhausted");
        let (bu, bv) = (self.top[u], self.top[v]);

        let mut children = Vec::new();
        let mut links = Vec::new();

        let mut up = Vec::new();
        let mut x = bu;
        while x != lca {
            up.push((
                x,
                Link {
                    edge: self.label_edge[x],
                    local: self.label_out[x],
                    remote: self.label_in[x],
                },
            ));
            x = self.top[self.label_out[x]];
        }
        children.push(lca);
        for &(c, link) in up.iter().rev() {
            links.push(link);
            children.push(c);
        }
        links.push(Link {
            edge: e,
            local: u,
            remote: v,
        });
        let mut x = bv;
        while x != lca {
            children.push(x);
            links.push(Link {
                edge: self.label_edge[x],
                local: self.label_in[x],
                remote: self.label_out[x],
            });
            x = self.top[self.label_out[x]];
        }
        debug_assert!(children.len() % 2 == 1 && children.len() >= 3);

        let mut rescan = Vec::new();
        for &c in &children {
            let d = self.dual_eff(c);
            let was_t = self.label[c] == Label::T;
            self.dual[c] = d;
            self.label[c] = Label::Free;
            self.parent[c] = nb;
            let start = rescan.len();
            self.collect_leaves(c, &mut rescan);
            for &w in &rescan[start..] {
                self.path_sum[w] += d;
                self.top[w] = nb;
            }
            if !was_t {
                rescan.truncate(start);
            }
        }

        self.base[nb] = self.base[lca];
        self.dual[nb] = 0;
        self.parent[nb] = NONE;
        self.children[nb] = children;
        self.links[nb] = links;
        let (le, li, lo) = (
            self.label_edge[lca],
            self.label_in[lca],
            self.label_out[lca],
        );
        self.assign_label(nb, Label::S, le, li, lo);

        for w in rescan {
            self.scan_vertex(w);
        }
    }

    /// Detach the children of top-level blossom `b`, making them top-level.
    fn dissolve(&mut self, b: usize) {
        debug_assert_eq!(self.dual_eff(b), 0);
        let children = std::mem::take(&mut self.children[b]);
        let mut verts = Vec::new();
        for &c in &children {
            self.parent[c] = NONE;
            self.label[c] = Label::Free;
            verts.clear();
            self.collect_leaves(c, &mut verts);
            let d = self.dual[c];
            for &w in &verts {
                self.path_sum[w] -= d;
                self.top[w] = c;
            }
        }
        self.children[b] = children;
    }

    fn release(&mut self, b: usize) {
        self.children[b].clear();
        self.links[b].clear();
        self.label[b] = Label::Free;
        self.parent[b] = NONE;
        self.base[b] = NONE;
        self.dual[b] = 0;
        self.unused.push(b);
    }

    fn expand_tree_blossom(&mut self, b: usize) {
        let (le, li, lo) = (self.label_edge[b], self.label_in[b], self.label_out[b]);
        self.dissolve(b);
        let children = std::mem::take(&mut self.children[b]);
        let links = std::mem::take(&mut self.links[b]);
        let k = children.len();
        let entry = self.top[li];
        let j = children
            .iter()
            .position(|&c| c == entry)
            .expect("entry child");

        let mut on_path = vec![false; k];
        let mut s_children = Vec::new();
        self.assign_label(entry, Label::T, le, li, lo);
        on_path[j] = true;
        let mut idx = j;
        if j % 2 == 1 {
            while idx != 0 {
                let a = links[idx];
                let s_child = children[(idx + 1) % k];
                self.assign_label(s_child, Label::S, a.edge, a.remote, a.local);
                s_children.push(s_child);
                let bl = links[(idx + 1) % k];
                let t_idx = (idx + 2) % k;
                self.assign_label(children[t_idx], Label::T, bl.edge, bl.remote, bl.local);
                on_path[(idx + 1) % k] = true;
                on_path[t_idx] = true;
                idx = t_idx;
            }
        } else {
            while idx != 0 {
                let a = links[idx - 1];
                let s_child = children[idx - 1];
                self.assign_label(s_child, Label::S, a.edge, a.local, a.remote);
                s_children.push(s_child);
                let bl = links[idx - 2];
                self.assign_label(children[idx - 2], Label::T, bl.edge, bl.local, bl.remote);
                on_path[idx - 1] = true;
                on_path[idx - 2] = true;
                idx -= 2;
            }
        }

        self.release(b);

        for s in s_children {
            self.scan_node(s);
        }
        for (i, &c) in children.iter().enumerate() {
            if !on_path[i] {
                self.scan_free_node(c);
            }
        }
    }

    fn augment(&mut self, e: usize, s_v: usize, f_v: usize) {
        let fb = self.top[f_v];
        if fb >= self.n {
            self.augment_blossom(fb, f_v);
        }
        self.mate[f_v] = e;

        let mut s = s_v;
        let mut edge = e;
        loop {
            let bs = self.top[s];
            if bs >= self.n {
                self.augment_blossom(bs, s);
            }
            self.mate[s] = edge;
            if self.label_edge[bs] == NONE {
                break;
            }
            let t = self.label_out[bs];
            let bt = self.top[t];
            let j = self.label_in[bt];
            if bt >= self.n {
                self.augment_blossom(bt, j);
            }
            self.mate[j] = self.label_edge[bt];
            s = self.label_out[bt];
            edge = self.label_edge[bt];
        }
    }

    /// Flip the even alternating path inside `b` from vertex `v` to the base,
    /// making `v` the new base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.parent[t] != b {
            t = self.parent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let k = self.children[b].len();
        let i = self.children[b].iter().position(|&c| c == t).unwrap();
        if i % 2 == 1 {
            let mut a = i + 1;
            loop {
                let link = self.links[b][a % k];
                let c0 = self.children[b][a % k];
                let c1 = self.children[b][(a + 1) % k];
                if c0 >= self.n {
                    self.augment_blossom(c0, link.local);
                }
                if c1 >= self.n {
                    self.augment_blossom(c1, link.remote);
                }
                self.mate[link.local] = link.edge;
                self.mate[link.remote] = link.edge;
                if (a + 1) % k == 0 {
                    break;
                }
                a += 2;
            }
        } else {
            let mut a = i;
            while a != 0 {
                let link = self.links[b][a - 2];
                let c1 = self.children[b][a - 1];
                let c0 = self.children[b][a - 2];
                if c1 >= self.n {
                    self.augment_blossom(c1, link.remote);
                }
                if c0 >= self.n {
                    self.augment_blossom(c0, link.local);
                }
                self.mate[link.local] = link.edge;
                self.mate[link.remote] = link.edge;
                a -= 2;
            }
        }
        self.children[b].rotate_left(i);
        self.links[b].rotate_left(i);
        self.base[b] = v;
    }

    fn finish_search(&mut self) {
        let tree = std::mem::take(&mut self.tree);
        let mut zero = Vec::new();
        for &b in &tree {
            if self.parent[b] != NONE || self.label[b] == Label::Free {
                continue;
            }
            if b >= self.n && self.children[b].is_empty() {
                continue;
            }
            self.dual[b] = self.dual_eff(b);
            self.label[b] = Label::Free;
            if b >= self.n && self.dual[b] == 0 {
                zero.push(b);
            }
        }
        // zero-dual blossoms carry no information; unwrap them
        while let Some(b) = zero.pop() {
            if self.parent[b] != NONE || self.children[b].is_empty() {
                continue;
            }
            self.dissolve(b);
            let children = std::mem::take(&mut self.children[b]);
            self.release(b);
            for c in children {
                if c >= self.n && self.dual[c] == 0 {
                    zero.push(c);
                }
            }
        }
        self.tree = tree;
        self.tree.clear();
    }
}

/// Final duals and blossom structure, kept so optimality can be audited.
#[derive(Debug, Clone)]
pub(crate) struct Certificate {
    pub dual: Vec<i64>,
    pub parent: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

impl Certificate {
    fn capture(s: &BlossomSolver<'_>) -> Self {
        Self {
            dual: s.dual.clone(),
            parent: s.parent.clone(),
            children: s.children.clone(),
        }
    }

    /// Check dual feasibility and complementary slackness for `mate`.
    pub fn verify(&self, g: &CostGraph, mate: &[usize]) -> Result<(), String> {
        let n = g.n;
        let chain = |v: usize| {
            let mut out = vec![v];
            let mut x = v;
            while self.parent[x] != NONE {
                x = self.parent[x];
                out.push(x);
            }
            out
        };
        for b in n..2 * n {
            if !self.children[b].is_empty() && self.dual[b] < 0 {
                return Err(format!("blossom {b} has negative dual {}", self.dual[b]));
            }
        }
        for (e, &[u, v]) in g.ends.iter().enumerate() {
            let cu = chain(u);
            let cv = chain(v);
            let mut slack = g.cost[e];
            for &x in cu.iter().chain(cv.iter()) {
                slack -= self.dual[x];
            }
            // blossoms containing both ends are not crossed by the edge
            let common = cu
                .iter()
                .rev()
                .zip(cv.iter().rev())
                .take_while(|(a, b)| a == b);
            for (&x, _) in common {
                slack += 2 * self.dual[x];
            }
            if slack < 0 {
                return Err(format!("edge {e} has negative slack {slack}"));
            }
            let matched = mate[u] == e;
            if matched != (mate[v] == e) {
                return Err(format!("edge {e} matched at one end only"));
            }
            if matched && slack != 0 {
                return Err(format!("matched edge {e} has slack {slack}"));
            }
        }
        for b in n..2 * n {
            if self.children[b].is_empty() || self.dual[b] == 0 {
                continue;
            }
            let mut inside = vec![false; n];
            let mut stack = vec![b];
            let mut size = 0;
            while let Some(x) = stack.pop() {
                if x < n {
                    inside[x] = true;
                    size += 1;
                } else {
                    stack.extend(self.children[x].iter().copied());
                }
            }
            let internal = (0..n)
                .filter(|&v| inside[v] && mate[v] != NONE && inside[g.other(mate[v], v)])
                .count()
                / 2;
            if 2 * internal + 1 != size {
                return Err(format!("blossom {b} with positive dual is not full"));
            }
        }
        Ok(())
    }
}

pub(crate) struct Solved {
    pub mate: Vec<usize>,
    pub certificate: Certificate,
}

pub(crate) const UNMATCHED: usize = NONE;
