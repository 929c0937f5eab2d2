//! EDT0L systems: a start word over an extended alphabet rewritten by a
//! regular language of endomorphisms (the rational control).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{merge_alphabets, parse_word, render_word, Edge, NFsa, Symbol, Word};
use crate::error::{Error, Result};

/// A letter-to-word substitution on the extended alphabet, applied to every
/// letter of a word simultaneously.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    pub images: Vec<Word>,
}

impl Endomorphism {
    pub fn identity(n: usize) -> Self {
        Endomorphism { images: (0..n as Symbol).map(|x| vec![x]).collect() }
    }

    pub fn apply(&self, w: &[Symbol]) -> Word {
        w.iter().flat_map(|&x| self.images[x as usize].iter().copied()).collect()
    }
}

/// How the end-of-tape markers are erased when compiling an `n`-fsa.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalMode {
    /// `⊥_i ↦ ε` for all `i`.
    Forget,
    /// `⊥_i ↦ #` for `i < n` and `⊥_n ↦ ε`.
    Hash,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct EDT0LSystem {
    alphabet: Vec<String>,
    terminal: Vec<bool>,
    start: Word,
    tables: Vec<Endomorphism>,
    /// A 1-fsa whose letter `i` stands for `tables[i]`.
    control: NFsa,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    alphabet: Vec<String>,
    terminals: Vec<String>,
    start: Vec<String>,
    /// Letters missing from a table are fixed.
    tables: Vec<BTreeMap<String, Vec<String>>>,
    control: NFsa,
}

fn table_name(i: usize) -> String {
    format!("h{i}")
}

impl TryFrom<RawSystem> for EDT0LSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        let find = |x: &String| {
            raw.alphabet.iter().position(|a| a == x).map(|i| i as Symbol).ok_or_else(|| Error::AlphabetMismatch(x.clone()))
        };
        let mut terminal = vec![false; raw.alphabet.len()];
        for t in &raw.terminals {
            terminal[find(t)? as usize] = true;
        }
        let start = raw.start.iter().map(find).collect::<Result<Word>>()?;
        let mut tables = Vec::new();
        for t in &raw.tables {
            let mut e = Endomorphism::identity(raw.alphabet.len());
            for (k, v) in t {
                e.images[find(k)? as usize] = v.iter().map(find).collect::<Result<Word>>()?;
            }
            tables.push(e);
        }
        EDT0LSystem::new(raw.alphabet, terminal, start, tables, raw.control)
    }
}

impl From<EDT0LSystem> for RawSystem {
    fn from(h: EDT0LSystem) -> Self {
        let name = |x: &Symbol| h.alphabet[*x as usize].clone();
        let tables = h
            .tables
            .iter()
            .map(|e| {
                e.images
                    .iter()
                    .enumerate()
                    .filter(|(x, w)| w.as_slice() != [*x as Symbol])
                    .map(|(x, w)| (h.alphabet[x].clone(), w.iter().map(name).collect()))
                    .collect()
            })
            .collect();
        RawSystem {
            terminals: h.alphabet.iter().zip(&h.terminal).filter(|(_, &t)| t).map(|(a, _)| a.clone()).collect(),
            start: h.start.iter().map(name).collect(),
            tables,
            alphabet: h.alphabet,
            control: h.control,
        }
    }
}

impl EDT0LSystem {
    pub fn new(
        alphabet: Vec<String>,
        terminal: Vec<bool>,
        start: Word,
        tables: Vec<Endomorphism>,
        control: NFsa,
    ) -> Result<Self> {
        let n = alphabet.len();
        if terminal.len() != n {
            return Err(Error::InvalidAutomaton("terminal flags do not cover the alphabet".into()));
        }
        let in_range = |w: &Word| w.iter().all(|&x| (x as usize) < n);
        if !in_range(&start) {
            return Err(Error::InvalidAutomaton("start word uses unknown letters".into()));
        }
        for t in &tables {
            if t.images.len() != n || !t.images.iter().all(in_range) {
                return Err(Error::InvalidAutomaton("endomorphism table does not cover the alphabet".into()));
            }
        }
        if control.arity() != 1 {
            return Err(Error::InvalidAutomaton("control must be a 1-fsa".into()));
        }
        for e in control.edges() {
            if let Some((_, x)) = e.label {
                let name = &control.alphabet()[x as usize];
                if !(0..tables.len()).any(|i| table_name(i) == *name) {
                    return Err(Error::InvalidAutomaton(format!("control letter {name} names no table")));
                }
            }
        }
        Ok(EDT0LSystem { alphabet, terminal, start, tables, control })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn terminals(&self) -> Vec<String> {
        self.alphabet.iter().zip(&self.terminal).filter(|(_, &t)| t).map(|(a, _)| a.clone()).collect()
    }

    pub fn start(&self) -> &Word {
        &self.start
    }

    pub fn tables(&self) -> &[Endomorphism] {
        &self.tables
    }

    pub fn control(&self) -> &NFsa {
        &self.control
    }

    pub fn render_word(&self, w: &[Symbol]) -> String {
        render_word(&self.alphabet, w)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_word(&self.alphabet, s)
    }

    /// Table index of each control letter.
    fn control_tables(&self) -> Vec<usize> {
        self.control
            .alphabet()
            .iter()
            .map(|name| (0..self.tables.len()).find(|&i| table_name(i) == *name).unwrap_or(usize::MAX))
            .collect()
    }

    /// Whether every table maps each terminal to a word containing a terminal,
    /// so the number of terminals never decreases along a derivation.
    fn terminals_monotone(&self) -> bool {
        self.tables.iter().all(|t| {
            (0..self.alphabet.len())
                .filter(|&x| self.terminal[x])
                .all(|x| t.images[x].iter().any(|&y| self.terminal[y as usize]))
        })
    }

    fn fixes_terminals(&self) -> bool {
        self.tables.iter().all(|t| (0..self.alphabet.len()).filter(|&x| self.terminal[x]).all(|x| t.images[x] == [x as Symbol]))
    }

    /// Words of the language of length at most `maxlen`.
    pub fn enumerate(&self, maxlen: usize) -> Result<BTreeSet<Word>> {
        const MAX_NONTERMINALS: usize = 4096;
        if !self.terminals_monotone() {
            return Err(Error::Precondition("a table erases terminals; bounded enumeration is unsound".into()));
        }
        let map = self.control_tables();
        let mut out: Vec<Vec<Edge>> = vec![Vec::new(); self.control.num_states()];
        for e in self.control.edges() {
            out[e.from].push(*e);
        }
        let terminal_count = |w: &Word| w.iter().filter(|&&x| self.terminal[x as usize]).count();
        let mut result = BTreeSet::new();
        let mut seen = HashSet::new();
        let start = (self.control.start(), self.start.clone());
        if terminal_count(&start.1) > maxlen {
            return Ok(result);
        }
        seen.insert(start.clone());
        let mut stack = vec![start];
        while let Some((q, w)) = stack.pop() {
            if self.control.accept_states().contains(&q) && w.len() <= maxlen && terminal_count(&w) == w.len() {
                result.insert(w.clone());
            }
            for e in &out[q] {
                let next = match e.label {
                    None => w.clone(),
                    Some((_, x)) => self.tables[map[x as usize]].apply(&w),
                };
                let t = terminal_count(&next);
                if t > maxlen {
                    continue;
                }
                if next.len() - t > MAX_NONTERMINALS {
                    return Err(Error::Precondition("nonterminal count grows without bound".into()));
                }
                let item = (e.to, next);
                if !seen.contains(&item) {
                    seen.insert(item.clone());
                    stack.push(item);
                }
            }
        }
        Ok(result)
    }

    /// Re-expresses words over the terminal names, for comparison across
    /// systems and automata.
    pub fn rendered(&self, words: &BTreeSet<Word>) -> BTreeSet<String> {
        words.iter().map(|w| self.render_word(w)).collect()
    }
}

/// Compiles an `n`-fsa into an EDT0L system for `θ(L)` (forget mode) or
/// `{w_1 # w_2 # ⋯ # w_n}` (hash mode).
///
/// Start word `⊥_1⋯⊥_n`; an edge writing `x` on tape `i` becomes the table
/// `⊥_i ↦ x⊥_i`; a final edge from each accept state erases the markers.
pub fn edt0l_from_nfsa(a: &NFsa, mode: TerminalMode) -> Result<EDT0LSystem> {
    let n = a.arity();
    let mut alphabet = a.alphabet().to_vec();
    let markers: Vec<String> = (1..=n).map(|i| format!("⊥{i}")).collect();
    let hash = "#".to_string();
    for m in markers.iter().chain(std::iter::once(&hash)) {
        if alphabet.contains(m) {
            return Err(Error::AlphabetMismatch(format!("reserved letter {m} already in the alphabet")));
        }
    }
    let sigma = alphabet.len();
    alphabet.extend(markers);
    let mut terminal = vec![true; sigma];
    terminal.extend(std::iter::repeat_n(false, n));
    if mode == TerminalMode::Hash {
        alphabet.push(hash);
        terminal.push(true);
    }
    let marker = |i: usize| (sigma + i) as Symbol;
    let size = alphabet.len();

    let mut tables = vec![Endomorphism::identity(size)];
    let mut index: HashMap<(usize, Symbol), usize> = HashMap::new();
    let mut control_edges = Vec::new();
    for e in a.edges() {
        let t = e.label.map(|key @ (tape, x)| *index.entry(key).or_insert_with(|| {
                let mut phi = Endomorphism::identity(size);
                phi.images[marker(tape) as usize] = vec![x, marker(tape)];
                tables.push(phi);
                tables.len() - 1
            }));
        control_edges.push(Edge { from: e.from, to: e.to, label: t.map(|i| (0, i as Symbol)) });
    }
    let mut bar = Endomorphism::identity(size);
    for i in 0..n {
        bar.images[marker(i) as usize] = match mode {
            TerminalMode::Hash if i + 1 < n => vec![(size - 1) as Symbol],
            _ => Vec::new(),
        };
    }
    tables.push(bar);
    let bar_idx = (tables.len() - 1) as Symbol;
    let fin = a.num_states();
    control_edges.extend(a.accept_states().iter().map(|&s| Edge { from: s, to: fin, label: Some((0, bar_idx)) }));
    let control_alphabet = (0..tables.len()).map(table_name).collect();
    let control = NFsa::new(1, control_alphabet, fin + 1, a.start(), [fin], control_edges)?;
    let start = (0..n).map(marker).collect();
    EDT0LSystem::new(alphabet, terminal, start, tables, control)
}

/// Union of EDT0L systems over a common terminal alphabet: a fresh start
/// letter rewritten to one of the original start words, followed by that
/// system's control. Nonterminals are renamed apart.
pub fn edt0l_union(systems: &[EDT0LSystem]) -> Result<EDT0LSystem> {
    let mut terminals: Vec<String> = Vec::new();
    for h in systems {
        if !h.fixes_terminals() {
            return Err(Error::Precondition("union requires tables that fix terminals".into()));
        }
        terminals = merge_alphabets(&terminals, &h.terminals());
    }
    let mut alphabet = terminals.clone();
    let start_letter = alphabet.len() as Symbol;
    alphabet.push("S".into());
    // symbol maps per system
    let mut maps = Vec::new();
    for (i, h) in systems.iter().enumerate() {
        let mut map = Vec::with_capacity(h.alphabet.len());
        for (x, name) in h.alphabet.iter().enumerate() {
            if h.terminal[x] {
                map.push(terminals.iter().position(|t| t == name).unwrap() as Symbol);
            } else {
                map.push(alphabet.len() as Symbol);
                alphabet.push(format!("{name}@{i}"));
            }
        }
        maps.push(map);
    }
    let size = alphabet.len();
    let mut terminal = vec![true; terminals.len()];
    terminal.resize(size, false);

    let mut tables = Vec::new();
    let mut edges = Vec::new();
    let mut accept = Vec::new();
    let mut offset = 1;
    for (h, map) in systems.iter().zip(&maps) {
        let mut intro = Endomorphism::identity(size);
        intro.images[start_letter as usize] = h.start.iter().map(|&x| map[x as usize]).collect();
        tables.push(intro);
        edges.push(Edge { from: 0, to: h.control.start() + offset, label: Some((0, (tables.len() - 1) as Symbol)) });

        let base = tables.len();
        for t in &h.tables {
            let mut e = Endomorphism::identity(size);
            for (x, img) in t.images.iter().enumerate() {
                e.images[map[x] as usize] = img.iter().map(|&y| map[y as usize]).collect();
            }
            tables.push(e);
        }
        let cmap = h.control_tables();
        for e in h.control.edges() {
            let label = e.label.map(|(_, x)| (0, (base + cmap[x as usize]) as Symbol));
            edges.push(Edge { from: e.from + offset, to: e.to + offset, label });
        }
        accept.extend(h.control.accept_states().iter().map(|s| s + offset));
        offset += h.control.num_states();
    }
    let control = NFsa::new(1, (0..tables.len()).map(table_name).collect(), offset, 0, accept, edges)?;
    EDT0LSystem::new(alphabet, terminal, vec![start_letter], tables, control)
}

pub fn edt0l_enumerate(h: &EDT0LSystem, maxlen: usize) -> Result<BTreeSet<Word>> {
    h.enumerate(maxlen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::tests::{same_number_of_a, strs};
    use crate::automata::{theta, WordTuple};

    fn theta_rendered(a: &NFsa, maxlen: usize) -> BTreeSet<String> {
        theta(&a.enumerate(maxlen)).iter().map(|w| a.render_word(w)).filter(|w| w.len() <= maxlen).collect()
    }

    #[test]
    fn forget_mode_matches_theta() {
        let a = same_number_of_a();
        let h = edt0l_from_nfsa(&a, TerminalMode::Forget).unwrap();
        let words = h.rendered(&h.enumerate(6).unwrap());
        for w in ["", "bb", "aa", "abba"] {
            assert!(words.contains(w), "{w}");
        }
        assert_eq!(words, theta_rendered(&a, 6));
        let short = h.rendered(&h.enumerate(2).unwrap());
        assert_eq!(short, ["", "b", "bb", "aa"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn trivial_systems() {
        let eps = NFsa::new(2, strs(&["a"]), 1, 0, [0], vec![]).unwrap();
        let h = edt0l_from_nfsa(&eps, TerminalMode::Forget).unwrap();
        assert_eq!(h.rendered(&h.enumerate(5).unwrap()), [String::new()].into());

        let alphabet = strs(&["a", "b"]);
        let control = NFsa::new(1, vec![table_name(0)], 2, 0, [1], vec![Edge { from: 0, to: 1, label: Some((0, 0)) }]).unwrap();
        let h = EDT0LSystem::new(alphabet.clone(), vec![true, true], vec![0, 1], vec![Endomorphism::identity(2)], control)
            .unwrap();
        assert_eq!(h.rendered(&h.enumerate(4).unwrap()), ["ab".to_string()].into());

        let dead = NFsa::empty(1, vec![table_name(0)]);
        let h = EDT0LSystem::new(alphabet, vec![true, true], vec![0], vec![Endomorphism::identity(2)], dead).unwrap();
        assert!(h.enumerate(4).unwrap().is_empty());
    }

    #[test]
    fn hash_mode() {
        let alphabet = strs(&["a", "b"]);
        let single = NFsa::singleton(alphabet, &WordTuple(vec![vec![0], vec![1]])).unwrap();
        let h = edt0l_from_nfsa(&single, TerminalMode::Hash).unwrap();
        assert_eq!(h.rendered(&h.enumerate(5).unwrap()), ["a#b".to_string()].into());
    }

    #[test]
    fn union_of_systems() {
        let a = same_number_of_a();
        let b = NFsa::singleton(strs(&["c"]), &WordTuple(vec![vec![0]])).unwrap();
        let ha = edt0l_from_nfsa(&a, TerminalMode::Forget).unwrap();
        let hb = edt0l_from_nfsa(&b, TerminalMode::Forget).unwrap();
        let u = edt0l_union(&[ha.clone(), hb.clone()]).unwrap();
        let mut expect = ha.rendered(&ha.enumerate(5).unwrap());
        expect.extend(hb.rendered(&hb.enumerate(5).unwrap()));
        assert_eq!(u.rendered(&u.enumerate(5).unwrap()), expect);
        assert!(edt0l_union(&[]).unwrap().enumerate(3).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let h = edt0l_from_nfsa(&same_number_of_a(), TerminalMode::Forget).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        let back: EDT0LSystem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn erasing_terminals_is_rejected() {
        let control = NFsa::new(1, vec![table_name(0)], 1, 0, [0], vec![Edge { from: 0, to: 0, label: Some((0, 0)) }]).unwrap();
        let erase = Endomorphism { images: vec![vec![]] };
        let h = EDT0LSystem::new(strs(&["a"]), vec![true], vec![0], vec![erase], control).unwrap();
        assert!(h.enumerate(3).is_err());
    }
}
