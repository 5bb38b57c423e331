//! The DeBruijn graph `G_R` of a rule set and its product graph `P_R`.
//!
//! Nodes of `G_R` are the words of length `2r`, encoded base `s` with the
//! leftmost letter most significant. For every node `aw`, letter `b` and rule
//! `f` there is an edge `aw → wb` labelled `(f, f(awb))`. A walk spells a word
//! `x` and its labels spell `(ψ, h_ψ(x))`, so paths are exactly preimage
//! computations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::automata::{Nfa, StateId, Symbol};
use crate::error::{Error, Result};
use crate::model::{index_word, Letter, RuleId, RuleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub rule: RuleId,
    pub letter: Letter,
}

#[derive(Debug, Clone)]
pub struct DeBruijnGraph {
    rules: Arc<RuleSet>,
    nodes: usize,
    edges: Vec<Edge>,
}

fn check_radius(rules: &RuleSet) -> Result<()> {
    if rules.radius() == 0 {
        return Err(Error::Unsupported(
            "graph construction needs radius at least 1; pad the rule set first".into(),
        ));
    }
    Ok(())
}

/// Node count `s^{2r}`, refusing sizes that cannot be materialised.
fn node_count(rules: &RuleSet) -> Result<usize> {
    rules
        .alphabet()
        .word_count(2 * rules.radius())
        .filter(|&n| n <= 1 << 24)
        .map(|n| n as usize)
        .ok_or(Error::CapExceeded { what: "DeBruijn node count", cap: 1 << 24 })
}

/// Builds `G_R`; edges are sorted by `(source, target, rule, letter)`.
pub fn build_debruijn(rules: Arc<RuleSet>) -> Result<DeBruijnGraph> {
    check_radius(&rules)?;
    let nodes = node_count(&rules)?;
    let s = rules.alphabet().size();
    let mut edges = Vec::with_capacity(nodes * s * rules.len());
    for source in 0..nodes {
        for b in 0..s {
            let window = source * s + b;
            let target = window % nodes;
            for f in rules.ids() {
                edges.push(Edge { source, target, rule: f, letter: rules.rule(f).eval_index(window) });
            }
        }
    }
    edges.sort_unstable();
    Ok(DeBruijnGraph { rules, nodes, edges })
}

impl DeBruijnGraph {
    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Word of length `2r` at a node.
    pub fn node_word(&self, node: usize) -> Vec<Letter> {
        index_word(self.rules.alphabet(), 2 * self.rules.radius(), node)
    }

    /// Symbol of the label `(f, a)` in the automaton view.
    pub fn label_symbol(&self, rule: RuleId, letter: Letter) -> Symbol {
        rule * self.rules.alphabet().size() + letter as usize
    }

    /// The graph as an automaton over `R × A` with every state initial and
    /// accepting; it accepts `(ψ, u)` iff `h_ψ^{-1}(u)` is non-empty.
    pub fn to_nfa(&self) -> Nfa {
        let mut nfa = Nfa::new(self.nodes, self.rules.len() * self.rules.alphabet().size());
        for e in &self.edges {
            nfa.add_transition(e.source, self.label_symbol(e.rule, e.letter), e.target);
        }
        for q in 0..self.nodes {
            nfa.set_initial(q);
            nfa.set_accepting(q, true);
        }
        nfa
    }

    /// DOT with parallel edges collapsed and their `rule/letter` labels joined.
    pub fn to_dot(&self) -> String {
        let names: Vec<String> = (0..self.nodes).map(|v| word_name(&self.node_word(v))).collect();
        let labels = self.edges.iter().map(|e| {
            ((e.source, e.target), format!("{}/{}", self.rules.name(e.rule), e.letter))
        });
        collapsed_dot("debruijn", &names, labels)
    }

    /// `source,target,rule,letter` with nodes written as words.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,target,rule,letter\n");
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                word_name(&self.node_word(e.source)),
                word_name(&self.node_word(e.target)),
                self.rules.name(e.rule),
                e.letter
            );
        }
        out
    }
}

/// Letters written as digits, dot-separated once the alphabet exceeds ten.
pub fn word_name(w: &[Letter]) -> String {
    if w.iter().all(|&a| a < 10) {
        w.iter().map(|a| a.to_string()).collect()
    } else {
        w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn collapsed_dot(name: &str, nodes: &[String], labels: impl Iterator<Item = ((usize, usize), String)>) -> String {
    let mut grouped: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (pair, label) in labels {
        grouped.entry(pair).or_default().push(label);
    }
    let mut out = format!("digraph {name} {{\n");
    for (v, n) in nodes.iter().enumerate() {
        let _ = writeln!(out, "  n{v} [label=\"{n}\"];");
    }
    for ((u, v), labels) in grouped {
        let _ = writeln!(out, "  n{u} -> n{v} [label=\"{}\"];", labels.join(", "));
    }
    out.push_str("}\n");
    out
}

/// `P_R`: pairs of DeBruijn nodes moving in lockstep under equal labels.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    base: DeBruijnGraph,
    edges: Vec<(usize, usize, RuleId, Letter)>,
}

pub fn build_product(rules: Arc<RuleSet>) -> Result<ProductGraph> {
    let base = build_debruijn(rules)?;
    let n = base.nodes;
    if n.checked_mul(n).is_none_or(|m| m > 1 << 24) {
        return Err(Error::CapExceeded { what: "product node count", cap: 1 << 24 });
    }
    // group base edges by source, then pair outgoing edges with equal labels
    let mut by_source: Vec<Vec<Edge>> = vec![Vec::new(); n];
    for e in &base.edges {
        by_source[e.source].push(*e);
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for u2 in 0..n {
            for e in &by_source[u] {
                for e2 in &by_source[u2] {
                    if e.rule == e2.rule && e.letter == e2.letter {
                        edges.push((u * n + u2, e.target * n + e2.target, e.rule, e.letter));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(ProductGraph { base, edges })
}

impl ProductGraph {
    pub fn base(&self) -> &DeBruijnGraph {
        &self.base
    }

    pub fn nodes(&self) -> usize {
        self.base.nodes * self.base.nodes
    }

    pub fn pair(&self, node: usize) -> (usize, usize) {
        (node / self.base.nodes, node % self.base.nodes)
    }

    pub fn is_diagonal(&self, node: usize) -> bool {
        let (u, v) = self.pair(node);
        u == v
    }

    /// Edges `(source, target, rule, letter)`, sorted.
    pub fn edges(&self) -> &[(usize, usize, RuleId, Letter)] {
        &self.edges
    }

    /// `P̃_R`: the output letter is dropped, leaving rule labels only.
    pub fn projected_nfa(&self) -> Nfa {
        let mut nfa = Nfa::new(self.nodes(), self.base.rules.len());
        for &(u, v, f, _) in &self.edges {
            nfa.add_transition(u, f, v);
        }
        for q in 0..self.nodes() {
            nfa.set_initial(q);
            nfa.set_accepting(q, true);
        }
        nfa
    }

    pub fn off_diagonal(&self) -> Vec<bool> {
        (0..self.nodes()).map(|q| !self.is_diagonal(q)).collect()
    }

    /// Letter at offset `r` of each component word; on a bi-infinite path this
    /// is the cell the node sits at.
    pub fn center_letters(&self, node: StateId) -> (Letter, Letter) {
        let (u, v) = self.pair(node);
        let r = self.base.rules.radius();
        (self.base.node_word(u)[r], self.base.node_word(v)[r])
    }

    pub fn to_dot(&self) -> String {
        let names: Vec<String> = (0..self.nodes())
            .map(|q| {
                let (u, v) = self.pair(q);
                format!("({},{})", word_name(&self.base.node_word(u)), word_name(&self.base.node_word(v)))
            })
            .collect();
        let labels = self
            .edges
            .iter()
            .map(|&(u, v, f, a)| ((u, v), format!("{}/{}", self.base.rules.name(f), a)));
        collapsed_dot("product", &names, labels)
    }
}
