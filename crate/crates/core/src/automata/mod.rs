//! Asynchronous `n`-variable finite state automata and EDT0L systems.
//!
//! An `n`-fsa reads `n` tapes; each edge writes at most one letter on one tape.
//! Letters are interned per automaton as indices into its alphabet.

pub mod edt0l;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::semilinear::LinearSet;

pub use edt0l::{edt0l_enumerate, edt0l_from_nfsa, edt0l_union, EDT0LSystem, Endomorphism, TerminalMode};

pub type Symbol = u32;
pub type Word = Vec<Symbol>;

/// An `n`-tuple of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordTuple(pub Vec<Word>);

impl WordTuple {
    pub fn empty(arity: usize) -> Self {
        WordTuple(vec![Vec::new(); arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total_len(&self) -> usize {
        self.0.iter().map(Vec::len).sum()
    }

    /// The concatenation `w_1 w_2 ⋯ w_n`.
    pub fn concat(&self) -> Word {
        self.0.concat()
    }
}

/// An edge writing `label = Some((tape, letter))` or nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Option<(usize, Symbol)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawNFsa", into = "RawNFsa")]
pub struct NFsa {
    arity: usize,
    alphabet: Vec<String>,
    states: usize,
    start: usize,
    accept: BTreeSet<usize>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    from: usize,
    to: usize,
    label: RawLabel,
}

/// One entry per tape, `"~"` (or `null`) for ε; a bare entry for one tape.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Tapes(Vec<Option<String>>),
    Single(Option<String>),
}

const EPSILON: &str = "~";

#[derive(Serialize, Deserialize)]
struct RawNFsa {
    arity: usize,
    alphabet: Vec<String>,
    states: usize,
    start: usize,
    accept: Vec<usize>,
    edges: Vec<RawEdge>,
}

impl TryFrom<RawNFsa> for NFsa {
    type Error = Error;

    fn try_from(raw: RawNFsa) -> Result<Self> {
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in raw.edges {
            let entries = match e.label {
                RawLabel::Tapes(v) => v,
                RawLabel::Single(x) => vec![x],
            };
            check_dim(raw.arity, entries.len()).map_err(|_| {
                Error::InvalidAutomaton(format!("edge {}→{} label has {} entries", e.from, e.to, entries.len()))
            })?;
            let mut label = None;
            for (tape, entry) in entries.iter().enumerate() {
                if let Some(letter) = entry.as_ref().filter(|x| *x != EPSILON) {
                    if label.is_some() {
                        return Err(Error::InvalidAutomaton(format!(
                            "edge {}→{} has more than one non-ε entry",
                            e.from, e.to
                        )));
                    }
                    let idx = raw
                        .alphabet
                        .iter()
                        .position(|a| a == letter)
                        .ok_or_else(|| Error::AlphabetMismatch(letter.clone()))?;
                    label = Some((tape, idx as Symbol));
                }
            }
            edges.push(Edge { from: e.from, to: e.to, label });
        }
        NFsa::new(raw.arity, raw.alphabet, raw.states, raw.start, raw.accept, edges)
    }
}

impl From<NFsa> for RawNFsa {
    fn from(a: NFsa) -> Self {
        let edges = a
            .edges
            .iter()
            .map(|e| {
                let mut label = vec![Some(EPSILON.to_string()); a.arity];
                if let Some((tape, x)) = e.label {
                    label[tape] = Some(a.alphabet[x as usize].clone());
                }
                RawEdge { from: e.from, to: e.to, label: RawLabel::Tapes(label) }
            })
            .collect();
        RawNFsa {
            arity: a.arity,
            alphabet: a.alphabet,
            states: a.states,
            start: a.start,
            accept: a.accept.into_iter().collect(),
            edges,
        }
    }
}

impl NFsa {
    pub fn new(
        arity: usize,
        alphabet: Vec<String>,
        states: usize,
        start: usize,
        accept: impl IntoIterator<Item = usize>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let accept: BTreeSet<usize> = accept.into_iter().collect();
        if start >= states || accept.iter().any(|&s| s >= states) {
            return Err(Error::InvalidAutomaton("start or accept state out of range".into()));
        }
        let distinct: HashSet<&String> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() {
            return Err(Error::InvalidAutomaton("alphabet has repeated letters".into()));
        }
        if distinct.iter().any(|a| a.is_empty() || a.as_str() == EPSILON) {
            return Err(Error::InvalidAutomaton(format!("letters must be nonempty and differ from {EPSILON}")));
        }
        for e in &edges {
            if e.from >= states || e.to >= states {
                return Err(Error::InvalidAutomaton(format!("edge {}→{} out of range", e.from, e.to)));
            }
            if let Some((tape, x)) = e.label {
                if tape >= arity || x as usize >= alphabet.len() {
                    return Err(Error::InvalidAutomaton(format!("edge {}→{} has a bad label", e.from, e.to)));
                }
            }
        }
        Ok(NFsa { arity, alphabet, states, start, accept, edges })
    }

    /// The automaton accepting nothing.
    pub fn empty(arity: usize, alphabet: Vec<String>) -> Self {
        NFsa { arity, alphabet, states: 1, start: 0, accept: BTreeSet::new(), edges: Vec::new() }
    }

    /// The automaton accepting exactly one tuple.
    pub fn singleton(alphabet: Vec<String>, t: &WordTuple) -> Result<Self> {
        let mut b = Builder::new(t.arity(), alphabet);
        let end = b.path_tuple(0, t);
        b.accept.insert(end);
        b.finish()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accept_states(&self) -> &BTreeSet<usize> {
        &self.accept
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn symbol(&self, letter: &str) -> Result<Symbol> {
        self.alphabet
            .iter()
            .position(|a| a == letter)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::AlphabetMismatch(letter.into()))
    }

    /// Splits a word into letters: whitespace-separated if it contains
    /// whitespace, otherwise by greedy longest match against the alphabet.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_word(&self.alphabet, s)
    }

    pub fn render_word(&self, w: &[Symbol]) -> String {
        render_word(&self.alphabet, w)
    }

    pub fn render_tuple(&self, t: &WordTuple) -> String {
        let parts: Vec<String> =
            t.0.iter().map(|w| if w.is_empty() { "~".into() } else { self.render_word(w) }).collect();
        format!("({})", parts.join(","))
    }

    fn out_edges(&self) -> Vec<Vec<Edge>> {
        let mut out = vec![Vec::new(); self.states];
        for e in &self.edges {
            out[e.from].push(*e);
        }
        out
    }

    /// Whether some path from the start to an accept state spells `t`.
    pub fn accepts(&self, t: &WordTuple) -> Result<bool> {
        check_dim(self.arity, t.arity()).map_err(|_| Error::ArityMismatch { expected: self.arity, found: t.arity() })?;
        let out = self.out_edges();
        let mut seen = HashSet::new();
        let mut stack = vec![(self.start, vec![0usize; self.arity])];
        seen.insert(stack[0].clone());
        while let Some((q, pos)) = stack.pop() {
            if self.accept.contains(&q) && (0..self.arity).all(|i| pos[i] == t.0[i].len()) {
                return Ok(true);
            }
            for e in &out[q] {
                let mut next = pos.clone();
                if let Some((tape, x)) = e.label {
                    if t.0[tape].get(pos[tape]) != Some(&x) {
                        continue;
                    }
                    next[tape] += 1;
                }
                if seen.insert((e.to, next.clone())) {
                    stack.push((e.to, next));
                }
            }
        }
        Ok(false)
    }

    /// All accepted tuples with at most `maxlen` letters in total.
    pub fn enumerate(&self, maxlen: usize) -> BTreeSet<WordTuple> {
        let out = self.out_edges();
        let mut result = BTreeSet::new();
        let start = (self.start, WordTuple::empty(self.arity));
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        let mut stack = vec![start];
        while let Some((q, t)) = stack.pop() {
            if self.accept.contains(&q) {
                result.insert(t.clone());
            }
            let len = t.total_len();
            for e in &out[q] {
                let mut next = t.clone();
                if let Some((tape, x)) = e.label {
                    if len == maxlen {
                        continue;
                    }
                    next.0[tape].push(x);
                }
                let item = (e.to, next);
                if !seen.contains(&item) {
                    seen.insert(item.clone());
                    stack.push(item);
                }
            }
        }
        result
    }

    /// Pads to `arity` tapes; the new tapes stay empty.
    pub fn padded(&self, arity: usize) -> NFsa {
        assert!(arity >= self.arity);
        NFsa { arity, ..self.clone() }
    }

    /// Moves every tape onto tape 0. The result accepts all interleavings
    /// of the accepted tuples read along a path.
    pub fn flattened(&self) -> NFsa {
        let edges = self.edges.iter().map(|e| Edge { label: e.label.map(|(_, x)| (0, x)), ..*e }).collect();
        NFsa { arity: 1, edges, ..self.clone() }
    }

    /// Re-expresses `self` over `alphabet ⊇ self.alphabet`.
    fn with_alphabet(&self, alphabet: &[String]) -> NFsa {
        let map: Vec<Symbol> =
            self.alphabet.iter().map(|a| alphabet.iter().position(|b| b == a).expect("superset") as Symbol).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { label: e.label.map(|(t, x)| (t, map[x as usize])), ..*e })
            .collect();
        NFsa { alphabet: alphabet.to_vec(), edges, ..self.clone() }
    }

    /// Union with tapes padded to the larger arity, via a fresh start state
    /// and a fresh accept state joined by ε-edges.
    pub fn union(&self, other: &NFsa) -> NFsa {
        let arity = self.arity.max(other.arity);
        let alphabet = merge_alphabets(&self.alphabet, &other.alphabet);
        let (a, b) = (self.with_alphabet(&alphabet).padded(arity), other.with_alphabet(&alphabet).padded(arity));
        let off_a = 1;
        let off_b = 1 + a.states;
        let fin = off_b + b.states;
        let mut edges = vec![
            Edge { from: 0, to: a.start + off_a, label: None },
            Edge { from: 0, to: b.start + off_b, label: None },
        ];
        for (m, off) in [(&a, off_a), (&b, off_b)] {
            edges.extend(m.edges.iter().map(|e| Edge { from: e.from + off, to: e.to + off, label: e.label }));
            edges.extend(m.accept.iter().map(|&s| Edge { from: s + off, to: fin, label: None }));
        }
        NFsa { arity, alphabet, states: fin + 1, start: 0, accept: [fin].into(), edges }
    }

    /// Tape-wise concatenation `L(self) · L(other)`.
    pub fn concat(&self, other: &NFsa) -> Result<NFsa> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let alphabet = merge_alphabets(&self.alphabet, &other.alphabet);
        let (a, b) = (self.with_alphabet(&alphabet), other.with_alphabet(&alphabet));
        let off = a.states;
        let mut edges = a.edges.clone();
        edges.extend(b.edges.iter().map(|e| Edge { from: e.from + off, to: e.to + off, label: e.label }));
        edges.extend(a.accept.iter().map(|&s| Edge { from: s, to: b.start + off, label: None }));
        Ok(NFsa {
            arity: a.arity,
            alphabet,
            states: a.states + b.states,
            start: a.start,
            accept: b.accept.iter().map(|s| s + off).collect(),
            edges,
        })
    }

    /// Applies the letter substitution `f` (keyed by letter name) tape-wise.
    /// Letters without an entry are kept.
    pub fn substitute(&self, f: &BTreeMap<String, Vec<String>>) -> NFsa {
        let mut alphabet = self.alphabet.clone();
        for w in f.values() {
            for x in w {
                if !alphabet.contains(x) {
                    alphabet.push(x.clone());
                }
            }
        }
        let sym = |x: &String| alphabet.iter().position(|a| a == x).unwrap() as Symbol;
        let mut b = Builder { arity: self.arity, alphabet: alphabet.clone(), states: self.states, edges: Vec::new(), accept: self.accept.clone() };
        for e in &self.edges {
            match e.label {
                None => b.edges.push(*e),
                Some((tape, x)) => {
                    let name = &self.alphabet[x as usize];
                    let image: Word = match f.get(name) {
                        Some(w) => w.iter().map(sym).collect(),
                        None => vec![sym(name)],
                    };
                    b.path_to(e.from, e.to, image.iter().map(|&y| Some((tape, y))).collect());
                }
            }
        }
        NFsa { arity: self.arity, alphabet: b.alphabet, states: b.states, start: self.start, accept: b.accept, edges: b.edges }
    }

    /// Appends a single letter on `tape` to every accepted tuple.
    pub fn append_letter(&self, tape: usize, letter: &str) -> Result<NFsa> {
        let mut alphabet = self.alphabet.clone();
        if !alphabet.iter().any(|a| a == letter) {
            alphabet.push(letter.into());
        }
        let mut t = WordTuple::empty(self.arity);
        t.0[tape].push(alphabet.iter().position(|a| a == letter).unwrap() as Symbol);
        self.concat(&NFsa::singleton(alphabet, &t)?)
    }

    /// Graphviz rendering with nodes `q<i>` and labels `(w1,…,wn)`, `~` for ε.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nfsa {\n  rankdir=LR;\n  __start [shape=point];\n");
        for q in 0..self.states {
            let shape = if self.accept.contains(&q) { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(s, "  __start -> q{};", self.start);
        for e in &self.edges {
            let mut parts = vec!["~".to_string(); self.arity];
            if let Some((tape, x)) = e.label {
                parts[tape] = self.alphabet[x as usize].clone();
            }
            let _ = writeln!(s, "  q{} -> q{} [label=\"({})\"];", e.from, e.to, parts.join(","));
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn merge_alphabets(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for x in b {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

pub(crate) fn parse_word(alphabet: &[String], s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() || s == "~" || s == "ε" {
        return Ok(Vec::new());
    }
    let find = |tok: &str| {
        alphabet.iter().position(|a| a == tok).map(|i| i as Symbol).ok_or_else(|| Error::AlphabetMismatch(tok.into()))
    };
    if s.contains(char::is_whitespace) {
        return s.split_whitespace().map(find).collect();
    }
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let best = alphabet
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_empty() && rest.starts_with(a.as_str()))
            .max_by_key(|(_, a)| a.len())
            .ok_or_else(|| Error::AlphabetMismatch(rest.chars().next().unwrap().to_string()))?;
        out.push(best.0 as Symbol);
        rest = &rest[best.1.len()..];
    }
    Ok(out)
}

pub(crate) fn render_word(alphabet: &[String], w: &[Symbol]) -> String {
    w.iter().map(|&x| alphabet[x as usize].as_str()).collect()
}

/// Incremental construction of automata with auxiliary path states.
struct Builder {
    arity: usize,
    alphabet: Vec<String>,
    states: usize,
    edges: Vec<Edge>,
    accept: BTreeSet<usize>,
}

impl Builder {
    fn new(arity: usize, alphabet: Vec<String>) -> Self {
        Builder { arity, alphabet, states: 1, edges: Vec::new(), accept: BTreeSet::new() }
    }

    fn fresh(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    /// A path from `from` to `to` with the given labels; ε if empty.
    fn path_to(&mut self, from: usize, to: usize, labels: Vec<Option<(usize, Symbol)>>) {
        if labels.is_empty() {
            self.edges.push(Edge { from, to, label: None });
            return;
        }
        let mut cur = from;
        let n = labels.len();
        for (i, label) in labels.into_iter().enumerate() {
            let next = if i + 1 == n { to } else { self.fresh() };
            self.edges.push(Edge { from: cur, to: next, label });
            cur = next;
        }
    }

    /// A path from `from` to a fresh state spelling `t`; returns the end.
    fn path_tuple(&mut self, from: usize, t: &WordTuple) -> usize {
        let labels: Vec<_> =
            t.0.iter().enumerate().flat_map(|(tape, w)| w.iter().map(move |&x| Some((tape, x)))).collect();
        if labels.is_empty() {
            return from;
        }
        let end = self.fresh();
        self.path_to(from, end, labels);
        end
    }

    fn finish(self) -> Result<NFsa> {
        NFsa::new(self.arity, self.alphabet, self.states, 0, self.accept, self.edges)
    }
}

/// `|z_i|` copies of the sign-appropriate letter on each tape `i`.
fn spell_vector(z: &crate::lattice::IntVec, letters: &[(Symbol, Symbol)]) -> WordTuple {
    WordTuple(
        (0..z.dim())
            .map(|i| {
                let n = z[i].abs().to_usize().expect("exponent fits in usize");
                let x = if z[i].is_negative() { letters[i].1 } else { letters[i].0 };
                vec![x; n]
            })
            .collect(),
    )
}

/// The `k`-fsa accepting the normal forms `(s_1^{|z_1|}, …, s_k^{|z_k|})` of a
/// monotone linear set: a path spelling the offset into a hub state carrying
/// one loop per period. `letters[i] = (a_i, A_i)` name the positive and
/// negative generator of coordinate `i`.
pub fn nfk_from_monotone(x: &LinearSet, letters: &[(String, String)]) -> Result<NFsa> {
    check_dim(x.dim(), letters.len())?;
    if !x.is_monotone() {
        return Err(Error::Precondition(format!("linear set {x} is not monotone")));
    }
    let mut alphabet = Vec::new();
    for (a, inv) in letters {
        alphabet.push(a.clone());
        alphabet.push(inv.clone());
    }
    let syms: Vec<(Symbol, Symbol)> = (0..letters.len()).map(|i| (2 * i as Symbol, 2 * i as Symbol + 1)).collect();
    let mut b = Builder::new(x.dim(), alphabet);
    let hub = b.path_tuple(0, &spell_vector(&x.offset, &syms));
    for d in &x.periods {
        let t = spell_vector(d, &syms);
        let labels: Vec<_> =
            t.0.iter().enumerate().flat_map(|(tape, w)| w.iter().map(move |&s| Some((tape, s)))).collect();
        b.path_to(hub, hub, labels);
    }
    b.accept.insert(hub);
    b.finish()
}

/// The `(m_π + |π|)`-fsa accepting `ψ_π(φ_π^{-1}(⋃ components))`.
///
/// Tape layout: block `j = 0..=l` holds the `r` tapes `x_1..x_r`, and block
/// `j < l` is followed by one tape carrying the pattern letter `y_{j+1}`.
/// Each component contributes a path spelling its offset into a hub with one
/// loop per period, and a final path spelling the pattern letters.
pub fn pattern_automaton(pi: &[String], components: &[LinearSet], xgens: &[String]) -> Result<NFsa> {
    let r = xgens.len();
    let l = pi.len();
    let m = l * r + r;
    let arity = m + l;
    let mut alphabet: Vec<String> = xgens.to_vec();
    alphabet = merge_alphabets(&alphabet, pi);
    let sym = |a: &String, alphabet: &[String]| alphabet.iter().position(|b| b == a).unwrap() as Symbol;
    let x_tape = |i: usize| (i / r) * (r + 1) + i % r;
    let y_labels: Vec<Option<(usize, Symbol)>> =
        pi.iter().enumerate().map(|(j, y)| Some((j * (r + 1) + r, sym(y, &alphabet)))).collect();
    let vector_labels = |v: &crate::lattice::IntVec| -> Result<Vec<Option<(usize, Symbol)>>> {
        let mut labels = Vec::new();
        for i in 0..m {
            if v[i].is_negative() {
                return Err(Error::Precondition("pattern components must lie in N^m".into()));
            }
            let n = v[i].to_usize().expect("exponent fits in usize");
            labels.extend(std::iter::repeat_n(Some((x_tape(i), i as Symbol % r as Symbol)), n));
        }
        Ok(labels)
    };
    let mut b = Builder::new(arity, alphabet.clone());
    let accept = b.fresh();
    b.accept.insert(accept);
    for c in components {
        check_dim(m, c.dim())?;
        let hub = b.fresh();
        b.path_to(0, hub, vector_labels(&c.offset)?);
        for p in &c.periods {
            b.path_to(hub, hub, vector_labels(p)?);
        }
        b.path_to(hub, accept, y_labels.clone());
    }
    b.finish()
}

/// Tuple-to-word map `θ`: concatenate the coordinates.
pub fn theta(tuples: &BTreeSet<WordTuple>) -> BTreeSet<Word> {
    tuples.iter().map(WordTuple::concat).collect()
}

pub fn nfsa_accepts(a: &NFsa, t: &WordTuple) -> Result<bool> {
    a.accepts(t)
}

pub fn nfsa_enumerate(a: &NFsa, maxlen: usize) -> BTreeSet<WordTuple> {
    a.enumerate(maxlen)
}

/// Arguments of [`nfsa_combine`].
pub enum Combine<'a> {
    Union(&'a NFsa, &'a NFsa),
    Concat(&'a NFsa, &'a NFsa),
    Substitute(&'a NFsa, &'a BTreeMap<String, Vec<String>>),
}

pub fn nfsa_combine(op: Combine<'_>) -> Result<NFsa> {
    match op {
        Combine::Union(a, b) => Ok(a.union(b)),
        Combine::Concat(a, b) => a.concat(b),
        Combine::Substitute(a, f) => Ok(a.substitute(f)),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lattice::IntVec;

    pub(crate) fn strs(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    /// Pairs `(u, v)` over `{a, b}` with the same number of `a`: state 0 reads
    /// `b` on either tape; an `a` on tape 1 must be matched by one on tape 2.
    pub(crate) fn same_number_of_a() -> NFsa {
        let (a, b) = (0, 1);
        NFsa::new(
            2,
            strs(&["a", "b"]),
            2,
            0,
            [0],
            vec![
                Edge { from: 0, to: 0, label: Some((0, b)) },
                Edge { from: 0, to: 0, label: Some((1, b)) },
                Edge { from: 0, to: 1, label: Some((0, a)) },
                Edge { from: 1, to: 0, label: Some((1, a)) },
            ],
        )
        .unwrap()
    }

    fn tuple(a: &NFsa, ws: &[&str]) -> WordTuple {
        WordTuple(ws.iter().map(|w| a.parse_word(w).unwrap()).collect())
    }

    fn rendered(a: &NFsa, ts: &BTreeSet<WordTuple>) -> BTreeSet<String> {
        ts.iter().map(|t| a.render_tuple(t)).collect()
    }

    #[test]
    fn accepts_examples() {
        let a = same_number_of_a();
        assert!(a.accepts(&tuple(&a, &["ab", "ba"])).unwrap());
        assert!(!a.accepts(&tuple(&a, &["a", "bb"])).unwrap());
        assert!(a.accepts(&tuple(&a, &["", ""])).unwrap());
        assert!(matches!(a.accepts(&tuple(&a, &["a"])), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn accepts_matches_definition() {
        let a = same_number_of_a();
        for t in a.enumerate(6) {
            let count = |w: &Word| w.iter().filter(|&&x| x == 0).count();
            assert_eq!(count(&t.0[0]), count(&t.0[1]));
        }
        // every pair of length ≤ 3 over {a,b}² with equal a-count is accepted
        let words: Vec<Word> = (0..=3usize)
            .flat_map(|n| (0..1u32 << n).map(move |bits| (0..n).map(|i| bits >> i & 1).collect::<Word>()))
            .collect();
        for u in &words {
            for v in &words {
                let t = WordTuple(vec![u.clone(), v.clone()]);
                let same = u.iter().filter(|&&x| x == 0).count() == v.iter().filter(|&&x| x == 0).count();
                assert_eq!(a.accepts(&t).unwrap(), same);
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let a = same_number_of_a();
        let got = rendered(&a, &a.enumerate(2));
        let expect: BTreeSet<String> =
            ["(~,~)", "(b,~)", "(~,b)", "(bb,~)", "(~,bb)", "(b,b)", "(a,a)"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, expect);
        assert!(NFsa::empty(2, strs(&["a"])).enumerate(5).is_empty());
        let eps = NFsa::new(3, strs(&["a"]), 1, 0, [0], vec![]).unwrap();
        assert_eq!(eps.enumerate(4), [WordTuple::empty(3)].into());
    }

    #[test]
    fn epsilon_cycles_terminate() {
        let a = NFsa::new(
            1,
            strs(&["a"]),
            2,
            0,
            [1],
            vec![
                Edge { from: 0, to: 1, label: None },
                Edge { from: 1, to: 0, label: None },
                Edge { from: 1, to: 1, label: Some((0, 0)) },
            ],
        )
        .unwrap();
        assert_eq!(a.enumerate(3).len(), 4);
    }

    #[test]
    fn combine_examples() {
        let a = same_number_of_a();
        let u = a.union(&NFsa::empty(2, strs(&["c"])));
        assert_eq!(u.enumerate(4), a.enumerate(4));

        let one = |x: &str| NFsa::singleton(strs(&[x]), &WordTuple(vec![vec![0]])).unwrap();
        let ab = nfsa_combine(Combine::Concat(&one("a"), &one("b"))).unwrap();
        assert_eq!(rendered(&ab, &ab.enumerate(5)), ["(ab)".to_string()].into());

        let star = NFsa::new(1, strs(&["a"]), 1, 0, [0], vec![Edge { from: 0, to: 0, label: Some((0, 0)) }]).unwrap();
        let f: BTreeMap<String, Vec<String>> = [("a".to_string(), strs(&["a", "a"]))].into();
        let sub = nfsa_combine(Combine::Substitute(&star, &f)).unwrap();
        let got: Vec<usize> = sub.enumerate(8).iter().map(WordTuple::total_len).collect();
        assert_eq!(got, vec![0, 2, 4, 6, 8]);

        assert!(matches!(a.concat(&star), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn union_pads_arity() {
        let one = NFsa::singleton(strs(&["x"]), &WordTuple(vec![vec![0]])).unwrap();
        let u = same_number_of_a().union(&one);
        assert_eq!(u.arity(), 2);
        let x = u.symbol("x").unwrap();
        assert!(u.accepts(&WordTuple(vec![vec![x], vec![]])).unwrap());
    }

    #[test]
    fn monotone_examples() {
        let letters = vec![("a1".to_string(), "A1".to_string()), ("a2".to_string(), "A2".to_string())];
        let diag = LinearSet::new(IntVec::from_i64s(&[0, 0]), vec![IntVec::from_i64s(&[1, 1])]).unwrap();
        let a = nfk_from_monotone(&diag, &letters).unwrap();
        let got = rendered(&a, &a.enumerate(8));
        let expect: BTreeSet<String> = (0..=4)
            .map(|n| {
                if n == 0 {
                    "(~,~)".to_string()
                } else {
                    format!("({},{})", "a1".repeat(n), "a2".repeat(n))
                }
            })
            .collect();
        assert_eq!(got, expect);

        let zero = nfk_from_monotone(&LinearSet::point(IntVec::zeros(2)), &letters).unwrap();
        assert_eq!(zero.enumerate(6), [WordTuple::empty(2)].into());

        let half = LinearSet::new(IntVec::from_i64s(&[1]), vec![IntVec::from_i64s(&[1])]).unwrap();
        let a = nfk_from_monotone(&half, &letters[..1]).unwrap();
        let lens: Vec<usize> = a.enumerate(5).iter().map(WordTuple::total_len).collect();
        assert_eq!(lens, vec![1, 2, 3, 4, 5]);

        let neg = LinearSet::new(IntVec::from_i64s(&[-1, 2]), vec![IntVec::from_i64s(&[-1, 0])]).unwrap();
        let a = nfk_from_monotone(&neg, &letters).unwrap();
        assert!(a.accepts(&WordTuple(vec![a.parse_word("A1A1").unwrap(), a.parse_word("a2a2").unwrap()])).unwrap());

        let mixed = LinearSet::new(IntVec::from_i64s(&[1]), vec![IntVec::from_i64s(&[-1])]).unwrap();
        assert!(nfk_from_monotone(&mixed, &letters[..1]).is_err());
    }

    #[test]
    fn pattern_examples() {
        let c = LinearSet::new(IntVec::from_i64s(&[0, 0]), vec![IntVec::from_i64s(&[1, 1])]).unwrap();
        let a = pattern_automaton(&strs(&["y"]), &[c], &strs(&["x"])).unwrap();
        assert_eq!(a.arity(), 3);
        let got = rendered(&a, &a.enumerate(7));
        let expect: BTreeSet<String> = ["(~,y,~)", "(x,y,x)", "(xx,y,xx)", "(xxx,y,xxx)"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, expect);

        let p = LinearSet::point(IntVec::from_i64s(&[2, 0, 1, 1]));
        let a = pattern_automaton(&strs(&["t"]), &[p], &strs(&["x1", "x2"])).unwrap();
        assert_eq!(rendered(&a, &a.enumerate(10)), ["(x1x1,~,t,x1,x2)".to_string()].into());

        let e1 = LinearSet::new(IntVec::from_i64s(&[0, 0]), vec![IntVec::from_i64s(&[1, 0])]).unwrap();
        let a = pattern_automaton(&[], &[e1], &strs(&["x1", "x2"])).unwrap();
        let got = rendered(&a, &a.enumerate(2));
        assert_eq!(got, ["(~,~)", "(x1,~)", "(x1x1,~)"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn json_and_dot() {
        let a = same_number_of_a();
        let s = serde_json::to_string(&a).unwrap();
        let back: NFsa = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let dot = a.to_dot();
        assert!(dot.contains("q0 -> q1 [label=\"(a,~)\"];"));
        assert!(dot.contains("q0 [shape=doublecircle];"));
        let bad = r#"{"arity":2,"alphabet":["a"],"states":1,"start":0,"accept":[0],
            "edges":[{"from":0,"to":0,"label":["a","a"]}]}"#;
        assert!(serde_json::from_str::<NFsa>(bad).is_err());
    }

    #[test]
    fn parse_word_handles_multichar_letters() {
        let alpha = strs(&["a1", "A1", "a", "t"]);
        assert_eq!(parse_word(&alpha, "a1A1t").unwrap(), vec![0, 1, 3]);
        assert_eq!(parse_word(&alpha, "a a1").unwrap(), vec![2, 0]);
        assert!(parse_word(&alpha, "b").is_err());
        assert_eq!(parse_word(&alpha, "~").unwrap(), Vec::<Symbol>::new());
    }
}
