//! Finite presentations of eventually periodic bi-infinite words and the two
//! decision procedures built on them: factor membership against a DFA, and
//! existence of a bi-infinite labelled path through a flagged node.

use std::collections::VecDeque;

use super::fa::{Dfa, Nfa, StateId, Symbol};
use crate::model::PeriodicWord;

/// Which part of the word a node of a [`LayeredWordGraph`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Phase within the left period.
    Left(usize),
    /// Offset within the middle.
    Middle(usize),
    /// Phase within the right period.
    Right(usize),
}

/// The graph of positions of `^ω left · middle · right^ω`.
///
/// Nodes are the `p_L` left phases, the `m` middle cells and the `p_R` right
/// phases, in that order; each node emits the symbol at its position and has
/// an edge to the node of the next position. The left cycle closes on itself
/// and also exits into the middle (or straight into the right cycle when the
/// middle is empty).
#[derive(Debug, Clone)]
pub struct LayeredWordGraph {
    word: PeriodicWord<Symbol>,
}

impl LayeredWordGraph {
    pub fn new(word: PeriodicWord<Symbol>) -> Self {
        Self { word }
    }

    pub fn word(&self) -> &PeriodicWord<Symbol> {
        &self.word
    }

    fn pl(&self) -> usize {
        self.word.left().len()
    }

    fn m(&self) -> usize {
        self.word.middle().len()
    }

    fn pr(&self) -> usize {
        self.word.right().len()
    }

    pub fn nodes(&self) -> usize {
        self.pl() + self.m() + self.pr()
    }

    pub fn region(&self, node: usize) -> Region {
        let (pl, m) = (self.pl(), self.m());
        if node < pl {
            Region::Left(node)
        } else if node < pl + m {
            Region::Middle(node - pl)
        } else {
            Region::Right(node - pl - m)
        }
    }

    pub fn is_left(&self, node: usize) -> bool {
        node < self.pl()
    }

    pub fn is_right(&self, node: usize) -> bool {
        node >= self.pl() + self.m()
    }

    pub fn symbol(&self, node: usize) -> Symbol {
        match self.region(node) {
            Region::Left(j) => self.word.left()[j],
            Region::Middle(j) => self.word.middle()[j],
            Region::Right(j) => self.word.right()[j],
        }
    }

    /// Node of the first position after the left tail.
    fn exit_target(&self) -> usize {
        self.pl()
    }

    pub fn successors(&self, node: usize) -> Vec<usize> {
        let (pl, m, pr) = (self.pl(), self.m(), self.pr());
        match self.region(node) {
            Region::Left(j) if j + 1 < pl => vec![node + 1],
            Region::Left(_) => {
                let mut v = vec![0, self.exit_target()];
                v.dedup();
                v
            }
            Region::Middle(_) => vec![node + 1],
            Region::Right(j) => vec![pl + m + (j + 1) % pr],
        }
    }

    pub fn predecessors(&self, node: usize) -> Vec<usize> {
        let (pl, m, pr) = (self.pl(), self.m(), self.pr());
        match self.region(node) {
            Region::Left(0) => vec![pl - 1],
            Region::Left(_) => vec![node - 1],
            Region::Middle(0) => vec![pl - 1],
            Region::Middle(_) => vec![node - 1],
            Region::Right(0) if m == 0 => vec![pl - 1, pl + pr - 1],
            Region::Right(0) => vec![pl + m - 1, pl + m + pr - 1],
            Region::Right(_) => vec![node - 1],
        }
    }

    /// A concrete position of the node, used for reporting. Left phases are
    /// placed in the last copy of the period before the anchor, right phases in
    /// the first copy after the middle.
    pub fn canonical_position(&self, node: usize) -> i64 {
        let a = self.word.anchor();
        match self.region(node) {
            Region::Left(j) => a - self.pl() as i64 + j as i64,
            Region::Middle(j) => a + j as i64,
            Region::Right(j) => self.word.middle_end() + j as i64,
        }
    }

    /// Positions for a walk `nodes[0] → nodes[1] → …` through the graph.
    ///
    /// A walk that leaves the left tail is pinned by its crossing edge; walks
    /// starting in the middle or right tail use canonical positions; walks that
    /// never leave the left tail end in the last left period.
    pub fn walk_start(&self, nodes: &[usize]) -> i64 {
        let crossing = nodes.windows(2).position(|w| self.is_left(w[0]) && !self.is_left(w[1]));
        match crossing {
            Some(c) => self.word.anchor() - 1 - c as i64,
            None if self.is_left(nodes[0]) => {
                let last = *nodes.last().expect("non-empty walk");
                self.canonical_position(last) - (nodes.len() as i64 - 1)
            }
            None => self.canonical_position(nodes[0]),
        }
    }

    /// DOT rendering with deterministic node order.
    pub fn to_dot(&self, label: impl Fn(Symbol) -> String) -> String {
        let mut out = String::from("digraph word {\n  rankdir=LR;\n");
        for v in 0..self.nodes() {
            let tag = match self.region(v) {
                Region::Left(j) => format!("L{j}"),
                Region::Middle(j) => format!("M{j}"),
                Region::Right(j) => format!("R{j}"),
            };
            out += &format!("  n{v} [label=\"{tag}: {}\"];\n", label(self.symbol(v)));
        }
        for v in 0..self.nodes() {
            for t in self.successors(v) {
                out += &format!("  n{v} -> n{t};\n");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A factor of the word accepted by a DFA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWitness {
    /// Position of the first symbol of the factor.
    pub start: i64,
    pub symbols: Vec<Symbol>,
}

impl FactorWitness {
    pub fn end(&self) -> i64 {
        self.start + self.symbols.len() as i64 - 1
    }
}

/// Decides whether some non-empty finite factor of the word presented by `g`
/// is accepted by `d`, returning a shortest one.
///
/// Breadth-first search over `(position node, DFA state)` pairs seeded at
/// every node, so a factor may start anywhere, including arbitrarily far into
/// either periodic tail.
pub fn layered_product_reach(g: &LayeredWordGraph, d: &Dfa) -> Option<FactorWitness> {
    let q = d.states();
    let id = |node: usize, state: StateId| node * q + state;
    let mut parent: Vec<Option<usize>> = vec![None; g.nodes() * q];
    let mut seen = vec![false; g.nodes() * q];
    let mut queue = VecDeque::new();
    for node in 0..g.nodes() {
        let s = d.next(d.start(), g.symbol(node));
        let v = id(node, s);
        if !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let (node, state) = (v / q, v % q);
        if d.is_accepting(state) {
            let mut nodes = vec![node];
            let mut cur = v;
            while let Some(p) = parent[cur] {
                nodes.push(p / q);
                cur = p;
            }
            nodes.reverse();
            let start = g.walk_start(&nodes);
            let symbols = nodes.iter().map(|&n| g.symbol(n)).collect();
            return Some(FactorWitness { start, symbols });
        }
        for t in g.successors(node) {
            let w = id(t, d.next(state, g.symbol(t)));
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// The product of a [`LayeredWordGraph`] with a transition graph `p` whose
/// edges are labelled by the word's symbols.
///
/// Product node `(n, q)` means "`p` is in state `q` just before reading the
/// symbol at node `n`". A bi-infinite path of `p` labelled by the word is a
/// bi-infinite walk of the product that runs through the left layers forever
/// to the left and the right layers forever to the right.
pub struct LayeredProduct<'a> {
    g: &'a LayeredWordGraph,
    p: &'a Nfa,
    reversed: Vec<Vec<Vec<StateId>>>,
    left_core: Vec<bool>,
    right_core: Vec<bool>,
    forward: Vec<bool>,
    backward: Vec<bool>,
}

impl<'a> LayeredProduct<'a> {
    pub fn new(g: &'a LayeredWordGraph, p: &'a Nfa) -> Self {
        let mut prod = Self {
            g,
            p,
            reversed: p.reversed(),
            left_core: Vec::new(),
            right_core: Vec::new(),
            forward: Vec::new(),
            backward: Vec::new(),
        };
        prod.left_core = prod.compute_left_core();
        prod.right_core = prod.compute_right_core();
        prod.forward = prod.closure(&prod.left_core, true);
        prod.backward = prod.closure(&prod.right_core, false);
        prod
    }

    pub fn nodes(&self) -> usize {
        self.g.nodes() * self.p.states()
    }

    pub fn split(&self, v: usize) -> (usize, StateId) {
        (v / self.p.states(), v % self.p.states())
    }

    fn join(&self, node: usize, state: StateId) -> usize {
        node * self.p.states() + state
    }

    pub fn successors(&self, v: usize) -> Vec<usize> {
        let (node, q) = self.split(v);
        let sym = self.g.symbol(node);
        let mut out = Vec::new();
        for t in self.g.successors(node) {
            for &q2 in self.p.successors(q, sym) {
                out.push(self.join(t, q2));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        let (node, q) = self.split(v);
        let mut out = Vec::new();
        for pn in self.g.predecessors(node) {
            for &q0 in &self.reversed[self.g.symbol(pn)][q] {
                out.push(self.join(pn, q0));
            }
        }
        out.sort_unstable();
        out
    }

    /// Predecessors that stay inside the left layers.
    fn left_predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.predecessors(v).into_iter().filter(|&u| self.g.is_left(self.split(u).0))
    }

    /// Successors that stay inside the right layers.
    fn right_successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.successors(v).into_iter().filter(|&u| self.g.is_right(self.split(u).0))
    }

    /// Greatest set of left-layer nodes each having a left-layer predecessor in
    /// the set: the nodes with an infinite backward path through the left tail.
    fn compute_left_core(&self) -> Vec<bool> {
        let mut set: Vec<bool> = (0..self.nodes()).map(|v| self.g.is_left(self.split(v).0)).collect();
        loop {
            let mut changed = false;
            for v in 0..self.nodes() {
                if set[v] && !self.left_predecessors(v).any(|u| set[u]) {
                    set[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return set;
            }
        }
    }

    fn compute_right_core(&self) -> Vec<bool> {
        let mut set: Vec<bool> = (0..self.nodes()).map(|v| self.g.is_right(self.split(v).0)).collect();
        loop {
            let mut changed = false;
            for v in 0..self.nodes() {
                if set[v] && !self.right_successors(v).any(|u| set[u]) {
                    set[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return set;
            }
        }
    }

    fn closure(&self, seeds: &[bool], forward: bool) -> Vec<bool> {
        let mut seen = seeds.to_vec();
        let mut stack: Vec<usize> = (0..self.nodes()).filter(|&v| seeds[v]).collect();
        while let Some(v) = stack.pop() {
            let next = if forward { self.successors(v) } else { self.predecessors(v) };
            for u in next {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Left-layer nodes with an infinite backward path inside the left tail.
    pub fn left_core(&self) -> &[bool] {
        &self.left_core
    }

    /// Right-layer nodes with an infinite forward path inside the right tail.
    pub fn right_core(&self) -> &[bool] {
        &self.right_core
    }

    /// True when some bi-infinite path runs through `v`.
    pub fn on_biinfinite_path(&self, v: usize) -> bool {
        self.forward[v] && self.backward[v]
    }

    /// Smallest product node lying on a bi-infinite path whose `p` state is flagged.
    pub fn find_flagged(&self, flagged: &[bool]) -> Option<usize> {
        (0..self.nodes()).find(|&v| flagged[self.split(v).1] && self.on_biinfinite_path(v))
    }

    /// An eventually periodic bi-infinite path through `v`, as the word of `p`
    /// states indexed by position (state before reading the symbol there).
    pub fn path_through(&self, v: usize) -> Option<PeriodicWord<StateId>> {
        if !self.on_biinfinite_path(v) {
            return None;
        }
        // nearest left-core node u with a path u -> v inside the forward set
        let back = self.bfs(v, |x| self.left_core[x], |x| {
            self.predecessors(x).into_iter().filter(|&u| self.forward[u]).collect()
        })?;
        let u = *back.last().expect("bfs path is non-empty");
        // left cycle: follow least left-core predecessors until a repeat
        let mut trail = vec![u];
        let cycle_start = loop {
            let cur = *trail.last().unwrap();
            let prev = self
                .left_predecessors(cur)
                .find(|&x| self.left_core[x])
                .expect("left core is closed under predecessors");
            if let Some(i) = trail.iter().position(|&x| x == prev) {
                break i;
            }
            trail.push(prev);
        };
        let z_index = cycle_start;
        let cycle_len = trail.len() - z_index;
        // chain z -> ... -> u -> ... -> v
        let mut chain: Vec<usize> = trail[..=z_index].iter().rev().copied().collect();
        chain.extend(back.iter().rev().skip(1));

        let fwd = self.bfs(v, |x| self.right_core[x], |x| {
            self.successors(x).into_iter().filter(|&u| self.backward[u]).collect()
        })?;
        chain.extend(fwd.iter().skip(1));
        let w = *chain.last().unwrap();
        let mut rtrail = vec![w];
        let rcycle_start = loop {
            let cur = *rtrail.last().unwrap();
            let next = self
                .right_successors(cur)
                .find(|&x| self.right_core[x])
                .expect("right core is closed under successors");
            if let Some(i) = rtrail.iter().position(|&x| x == next) {
                break i;
            }
            rtrail.push(next);
        };
        chain.extend(rtrail[1..=rcycle_start].iter().copied());
        let right: Vec<usize> = rtrail[rcycle_start..].to_vec();

        // left period in forward order: z then the cycle predecessors reversed
        let mut left = vec![trail[z_index]];
        left.extend(trail[z_index + 1..].iter().rev());
        debug_assert_eq!(left.len(), cycle_len);

        let g_nodes: Vec<usize> = chain.iter().map(|&x| self.split(x).0).collect();
        let start = self.g.walk_start(&g_nodes);
        let state = |x: &usize| self.split(*x).1;
        let middle: Vec<StateId> = chain[..chain.len() - 1].iter().map(state).collect();
        let word = PeriodicWord::new(
            left.iter().map(state).collect(),
            middle,
            right.iter().map(state).collect(),
            start,
        )
        .expect("cycles are non-empty");
        Some(word)
    }

    /// Shortest path from `from` to a node satisfying `goal`, listed from
    /// `from` outward.
    fn bfs(&self, from: usize, goal: impl Fn(usize) -> bool, next: impl Fn(usize) -> Vec<usize>) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.nodes()];
        let mut queue = VecDeque::from([from]);
        parent[from] = from;
        while let Some(x) = queue.pop_front() {
            if goal(x) {
                let mut path = vec![x];
                let mut cur = x;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for y in next(x) {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

/// Is there a bi-infinite path of `p` labelled by the word of `g` that visits
/// a flagged state? Returns one such path, eventually periodic.
pub fn biinfinite_flagged_path(g: &LayeredWordGraph, p: &Nfa, flagged: &[bool]) -> Option<PeriodicWord<StateId>> {
    let product = LayeredProduct::new(g, p);
    let v = product.find_flagged(flagged)?;
    product.path_through(v)
}
