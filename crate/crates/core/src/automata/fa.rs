use crate::error::{invalid, Result};

pub type StateId = usize;
/// Symbols are opaque indices `0..symbols`.
pub type Symbol = usize;

/// Nondeterministic automaton without ε-moves and with a set of initial states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    symbols: usize,
    // [state][symbol] -> sorted, deduplicated targets
    transitions: Vec<Vec<Vec<StateId>>>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(states: usize, symbols: usize) -> Self {
        Self {
            symbols,
            transitions: vec![vec![Vec::new(); symbols]; states],
            initial: Vec::new(),
            accepting: vec![false; states],
        }
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn add_transition(&mut self, from: StateId, symbol: Symbol, to: StateId) {
        assert!(from < self.states() && to < self.states() && symbol < self.symbols);
        let targets = &mut self.transitions[from][symbol];
        if let Err(pos) = targets.binary_search(&to) {
            targets.insert(pos, to);
        }
    }

    pub fn set_initial(&mut self, state: StateId) {
        assert!(state < self.states());
        if let Err(pos) = self.initial.binary_search(&state) {
            self.initial.insert(pos, state);
        }
    }

    pub fn set_accepting(&mut self, state: StateId, accepting: bool) {
        self.accepting[state] = accepting;
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn successors(&self, state: StateId, symbol: Symbol) -> &[StateId] {
        &self.transitions[state][symbol]
    }

    /// All transitions `(from, symbol, to)` in lexicographic order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(q, row)| {
            row.iter().enumerate().flat_map(move |(a, ts)| ts.iter().map(move |&t| (q, a, t)))
        })
    }

    /// Set of states reached from `from` after reading `symbol`.
    pub fn step_set(&self, from: &[StateId], symbol: Symbol) -> Vec<StateId> {
        let mut out: Vec<StateId> =
            from.iter().flat_map(|&q| self.transitions[q][symbol].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut current = self.initial.clone();
        for &a in word {
            current = self.step_set(&current, a);
        }
        current.iter().any(|&q| self.accepting[q])
    }

    /// DOT rendering; initial states are drawn bold, accepting ones doubled.
    pub fn to_dot(&self, label: impl Fn(Symbol) -> String) -> String {
        let mut out = String::from("digraph nfa {\n");
        for q in 0..self.states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let style = if self.initial.binary_search(&q).is_ok() { ", style=bold" } else { "" };
            out += &format!("  q{q} [shape={shape}{style}];\n");
        }
        for (q, a, t) in self.transitions() {
            out += &format!("  q{q} -> q{t} [label=\"{}\"];\n", label(a));
        }
        out.push_str("}\n");
        out
    }

    /// `rev[symbol][q]` lists the states with a `symbol`-transition into `q`.
    pub(crate) fn reversed(&self) -> Vec<Vec<Vec<StateId>>> {
        let mut rev = vec![vec![Vec::new(); self.states()]; self.symbols];
        for (q, a, t) in self.transitions() {
            rev[a][t].push(q);
        }
        rev
    }
}

/// Complete deterministic automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    symbols: usize,
    delta: Vec<StateId>,
    start: StateId,
    accepting: Vec<bool>,
}

impl Dfa {
    /// `delta[q * symbols + a]` is the successor of `q` on `a`.
    pub fn from_parts(symbols: usize, delta: Vec<StateId>, start: StateId, accepting: Vec<bool>) -> Result<Self> {
        let states = accepting.len();
        if states == 0 || symbols == 0 {
            return Err(invalid("a DFA needs at least one state and one symbol"));
        }
        if delta.len() != states * symbols {
            return Err(invalid(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                states * symbols
            )));
        }
        if start >= states || delta.iter().any(|&t| t >= states) {
            return Err(invalid("transition target out of range"));
        }
        Ok(Self { symbols, delta, start, accepting })
    }

    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn next(&self, state: StateId, symbol: Symbol) -> StateId {
        self.delta[state * self.symbols + symbol]
    }

    pub fn run_from(&self, state: StateId, word: &[Symbol]) -> StateId {
        word.iter().fold(state, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.accepting[self.run_from(self.start, word)]
    }

    /// True when no accepting state is reachable from the start.
    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.states()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            if self.accepting[q] {
                return false;
            }
            for a in 0..self.symbols {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        true
    }

    /// DOT rendering with one arrow per transition, dead state included.
    pub fn to_dot(&self, label: impl Fn(Symbol) -> String) -> String {
        let mut out = String::from("digraph dfa {\n  start [shape=point];\n");
        for q in 0..self.states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            out += &format!("  q{q} [shape={shape}];\n");
        }
        out += &format!("  start -> q{};\n", self.start);
        for q in 0..self.states() {
            for a in 0..self.symbols {
                out += &format!("  q{q} -> q{} [label=\"{}\"];\n", self.next(q, a), label(a));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.states(), self.symbols);
        for q in 0..self.states() {
            for a in 0..self.symbols {
                n.add_transition(q, a, self.next(q, a));
            }
            n.set_accepting(q, self.accepting[q]);
        }
        n.set_initial(self.start);
        n
    }
}
