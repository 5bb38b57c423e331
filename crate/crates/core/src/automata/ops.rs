//! Determinization, minimization, complement, relabeling and factor scanning.

use std::collections::{HashMap, VecDeque};

use super::fa::{Dfa, Nfa, StateId, Symbol};
use crate::error::{Error, Result};

/// Subset construction. States are reachable subsets; the empty subset is the
/// dead state. The result is minimized.
pub fn determinize(nfa: &Nfa) -> Dfa {
    determinize_capped(nfa, usize::MAX).expect("uncapped subset construction")
}

/// [`determinize`] that gives up once more than `cap` subsets have been built.
pub fn determinize_capped(nfa: &Nfa, cap: usize) -> Result<Dfa> {
    Ok(minimize(&subset_construction(nfa, cap)?.0))
}

/// Raw subset construction, returning the DFA and the subset behind each state.
pub fn subset_construction(nfa: &Nfa, cap: usize) -> Result<(Dfa, Vec<Vec<StateId>>)> {
    let k = nfa.symbols();
    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let mut delta: Vec<StateId> = Vec::new();
    let mut queue = VecDeque::new();

    let start = nfa.initial().to_vec();
    index.insert(start.clone(), 0);
    subsets.push(start);
    queue.push_back(0);
    while let Some(id) = queue.pop_front() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let next = nfa.step_set(&subsets[id], a);
            let target = match index.get(&next) {
                Some(&t) => t,
                None => {
                    let t = subsets.len();
                    if t >= cap {
                        return Err(Error::CapExceeded { what: "subset construction", cap });
                    }
                    index.insert(next.clone(), t);
                    subsets.push(next);
                    queue.push_back(t);
                    t
                }
            };
            row.push(target);
        }
        // states are numbered in BFS order, so rows arrive in order
        debug_assert_eq!(delta.len(), id * k);
        delta.extend(row);
    }
    let accepting = subsets.iter().map(|s| s.iter().any(|&q| nfa.is_accepting(q))).collect();
    let dfa = Dfa::from_parts(k, delta, 0, accepting)?;
    Ok((dfa, subsets))
}

/// Hopcroft partition refinement on the reachable part of `dfa`.
///
/// States of the result are numbered in breadth-first order from the start
/// state, so equal languages give identical automata.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let k = dfa.symbols();
    let reachable = reachable_states(dfa);
    let mut local = vec![usize::MAX; dfa.states()];
    for (i, &q) in reachable.iter().enumerate() {
        local[q] = i;
    }
    let n = reachable.len();
    let next = |q: usize, a: Symbol| local[dfa.next(reachable[q], a)];

    // inverse transitions over the reachable part
    let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
    for q in 0..n {
        for (a, inv) in inverse.iter_mut().enumerate() {
            inv[next(q, a)].push(q);
        }
    }

    let mut block_of = vec![0usize; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let (acc, rej): (Vec<usize>, Vec<usize>) = (0..n).partition(|&q| dfa.is_accepting(reachable[q]));
    for b in [acc, rej] {
        if !b.is_empty() {
            for &q in &b {
                block_of[q] = blocks.len();
            }
            blocks.push(b);
        }
    }
    let mut in_work = vec![true; blocks.len()];
    let mut work: Vec<usize> = (0..blocks.len()).collect();

    while let Some(splitter) = work.pop() {
        in_work[splitter] = false;
        let members = blocks[splitter].clone();
        for inv in &inverse {
            let mut hit: HashMap<usize, Vec<usize>> = HashMap::new();
            for &t in &members {
                for &q in &inv[t] {
                    hit.entry(block_of[q]).or_default().push(q);
                }
            }
            let mut touched: Vec<usize> = hit.keys().copied().collect();
            touched.sort_unstable();
            for b in touched {
                let mut x = hit.remove(&b).unwrap_or_default();
                x.sort_unstable();
                x.dedup();
                if x.len() == blocks[b].len() {
                    continue;
                }
                let rest: Vec<usize> = blocks[b].iter().copied().filter(|q| x.binary_search(q).is_err()).collect();
                let new_id = blocks.len();
                for &q in &x {
                    block_of[q] = new_id;
                }
                blocks[b] = rest;
                blocks.push(x);
                in_work.push(false);
                if in_work[b] {
                    in_work[new_id] = true;
                    work.push(new_id);
                } else {
                    let smaller = if blocks[b].len() <= blocks[new_id].len() { b } else { new_id };
                    in_work[smaller] = true;
                    work.push(smaller);
                }
            }
        }
    }

    // renumber blocks by BFS from the start block
    let start_block = block_of[local[dfa.start()]];
    let mut order = vec![usize::MAX; blocks.len()];
    let mut queue = VecDeque::from([start_block]);
    order[start_block] = 0;
    let mut count = 1;
    let mut delta = Vec::new();
    let mut accepting = Vec::new();
    let mut sequence = Vec::new();
    while let Some(b) = queue.pop_front() {
        sequence.push(b);
        let rep = blocks[b][0];
        for a in 0..k {
            let t = block_of[next(rep, a)];
            if order[t] == usize::MAX {
                order[t] = count;
                count += 1;
                queue.push_back(t);
            }
        }
    }
    for &b in &sequence {
        let rep = blocks[b][0];
        accepting.push(dfa.is_accepting(reachable[rep]));
        for a in 0..k {
            delta.push(order[block_of[next(rep, a)]]);
        }
    }
    Dfa::from_parts(k, delta, 0, accepting).expect("minimized automaton is well formed")
}

fn reachable_states(dfa: &Dfa) -> Vec<StateId> {
    let mut seen = vec![false; dfa.states()];
    let mut out = vec![dfa.start()];
    seen[dfa.start()] = true;
    let mut i = 0;
    while i < out.len() {
        let q = out[i];
        for a in 0..dfa.symbols() {
            let t = dfa.next(q, a);
            if !seen[t] {
                seen[t] = true;
                out.push(t);
            }
        }
        i += 1;
    }
    out
}

/// Same automaton with the accepting set flipped.
pub fn complement(dfa: &Dfa) -> Dfa {
    let delta = (0..dfa.states()).flat_map(|q| (0..dfa.symbols()).map(move |a| (q, a))).map(|(q, a)| dfa.next(q, a));
    let accepting = dfa.accepting().iter().map(|&f| !f).collect();
    Dfa::from_parts(dfa.symbols(), delta.collect(), dfa.start(), accepting).expect("same shape")
}

/// Relabels every transition through `map`, giving an automaton over
/// `0..symbols` that recognizes the letter-wise image of the language.
pub fn project(nfa: &Nfa, symbols: usize, map: impl Fn(Symbol) -> Symbol) -> Nfa {
    let mut out = Nfa::new(nfa.states(), symbols);
    for (q, a, t) in nfa.transitions() {
        out.add_transition(q, map(a), t);
    }
    for &q in nfa.initial() {
        out.set_initial(q);
    }
    for q in 0..nfa.states() {
        out.set_accepting(q, nfa.is_accepting(q));
    }
    out
}

/// DFA for `Σ* · L(d) · Σ*`: accepts exactly the words having a factor in
/// `L(d)`. Its accepting states are absorbing.
pub fn factor_scanner(d: &Dfa) -> Dfa {
    let k = d.symbols();
    let n = d.states();
    let (pre, post) = (n, n + 1);
    let mut nfa = Nfa::new(n + 2, k);
    for a in 0..k {
        nfa.add_transition(pre, a, pre);
        nfa.add_transition(pre, a, d.next(d.start(), a));
        nfa.add_transition(post, a, post);
        for q in 0..n {
            nfa.add_transition(q, a, d.next(q, a));
        }
    }
    for q in 0..n {
        if d.is_accepting(q) {
            for a in 0..k {
                nfa.add_transition(q, a, post);
            }
        }
        nfa.set_accepting(q, d.is_accepting(q));
    }
    nfa.set_accepting(post, true);
    nfa.set_initial(pre);
    if d.is_accepting(d.start()) {
        nfa.set_initial(post);
    }
    determinize(&nfa)
}
