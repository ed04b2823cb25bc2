//! Degree-bounded Bergman completion in the free algebra, normal forms, and
//! normal-word counting.
//!
//! Internally every word is relabelled so that the configured generator
//! order becomes the natural one; callers only ever see original letters.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::time::Duration;

use crate::freealg::{GenOrder, Letter, Poly, Word, WordText};
use crate::scalars::{FieldElem, FieldRef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("step budget of {0} reductions exhausted")]
    BudgetExceeded(u64),
    #[error("generator order covers {order} letters but input uses letter {letter}")]
    OrderTooShort { order: usize, letter: usize },
    #[error("zero generator at position {0}")]
    ZeroGenerator(usize),
    #[error("trace does not replay to a nonzero constant")]
    CorruptTrace,
}

#[derive(Debug, Clone)]
pub struct GbConfig {
    pub degree_bound: usize,
    pub order: Option<GenOrder>,
    pub step_limit: u64,
}

impl GbConfig {
    pub fn new(degree_bound: usize) -> Self {
        GbConfig {
            degree_bound,
            order: None,
            step_limit: 200_000_000,
        }
    }
}

/// `max(16, 2 * max relation degree + 4)`.
pub fn default_degree_bound(gens: &[Poly]) -> usize {
    let m = gens.iter().map(Poly::max_len).max().unwrap_or(0);
    (2 * m + 4).max(16)
}

/// `lead -> tail`; the tail is strictly smaller than the lead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRule {
    pub lead: Word,
    pub tail: Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    Input(usize),
    Rule(usize),
}

/// One summand `coeff * left * source * right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub coeff: FieldElem,
    pub left: Word,
    pub source: Source,
    pub right: Word,
}

/// `scale * sum(steps)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<Step>,
    pub scale: FieldElem,
}

/// Replayable proof that the ideal contains a nonzero constant. Rule `k` is
/// defined by `rules[k]`; words use the relabelled alphabet of `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub order: GenOrder,
    pub rules: Vec<Derivation>,
    pub last: Derivation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Complete,
    Truncated(usize),
    ContainsOne(Trace),
}

#[derive(Debug, Clone)]
pub struct ReductionSystem {
    order: GenOrder,
    rules: Vec<ReductionRule>,
    trie: Trie,
    status: Status,
    stats: BTreeMap<usize, usize>,
    field: FieldRef,
    steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    Finite { dim: u64, counts: Vec<u64> },
    Infinite { counts: Vec<u64> },
    Inconclusive { degree_bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbReport {
    pub verdict: Verdict,
    pub rules: usize,
    pub degree_bound: usize,
    pub elapsed: Option<Duration>,
}

#[derive(Debug, Clone, Default)]
struct Trie {
    next: Vec<BTreeMap<Letter, u32>>,
    rule: Vec<Option<usize>>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            next: vec![BTreeMap::new()],
            rule: vec![None],
        }
    }

    fn insert(&mut self, w: &[Letter], id: usize) {
        let mut s = 0usize;
        for &l in w {
            s = match self.next[s].get(&l) {
                Some(&t) => t as usize,
                None => {
                    self.next.push(BTreeMap::new());
                    self.rule.push(None);
                    let t = self.next.len() - 1;
                    self.next[s].insert(l, t as u32);
                    t
                }
            };
        }
        self.rule[s] = Some(id);
    }

    fn remove(&mut self, w: &[Letter]) {
        let mut s = 0usize;
        for &l in w {
            s = self.next[s][&l] as usize;
        }
        self.rule[s] = None;
    }

    /// Leftmost occurrence of any stored word: `(position, rule id)`.
    fn find(&self, w: &[Letter]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            let mut s = 0usize;
            for &l in &w[start..] {
                match self.next[s].get(&l) {
                    Some(&t) => s = t as usize,
                    None => break,
                }
                if let Some(id) = self.rule[s] {
                    return Some((start, id));
                }
            }
        }
        None
    }
}

struct RuleRec {
    lead: Word,
    tail: Poly,
    alive: bool,
    deriv: Option<Derivation>,
}

enum Item {
    Input(usize),
    Revive(usize),
    Overlap { a: usize, b: usize, k: usize },
}

struct Engine<'a> {
    field: FieldRef,
    inputs: &'a [Poly],
    recs: Vec<RuleRec>,
    trie: Trie,
    queue: BTreeMap<(usize, u64), Item>,
    seq: u64,
    steps: u64,
    limit: u64,
    tracing: bool,
    truncated: bool,
}

fn lead_poly(r: &RuleRec, field: &FieldRef) -> Poly {
    let mut p = -&r.tail;
    p.add_term(r.lead.clone(), FieldElem::one(field));
    p
}

impl Engine<'_> {
    fn push(&mut self, deg: usize, item: Item) {
        self.queue.insert((deg, self.seq), item);
        self.seq += 1;
    }

    /// Full reduction; appends `-c * u * rule * v` steps when tracing.
    fn reduce(&mut self, p: Poly, trace: &mut Vec<Step>) -> Result<Poly, GroebnerError> {
        let mut work = p.into_terms();
        let mut done: BTreeMap<Word, FieldElem> = BTreeMap::new();
        while let Some((w, c)) = work.pop_last() {
            match self.trie.find(w.letters()) {
                None => {
                    done.insert(w, c);
                }
                Some((pos, id)) => {
                    self.steps += 1;
                    if self.steps > self.limit {
                        return Err(GroebnerError::BudgetExceeded(self.limit));
                    }
                    let rec = &self.recs[id];
                    let u = &w.letters()[..pos];
                    let v = &w.letters()[pos + rec.lead.len()..];
                    for (tw, tc) in rec.tail.terms() {
                        let mut nw = Vec::with_capacity(u.len() + tw.len() + v.len());
                        nw.extend_from_slice(u);
                        nw.extend_from_slice(tw.letters());
                        nw.extend_from_slice(v);
                        let add = &c * tc;
                        add_into(&mut work, Word(nw), add);
                    }
                    if self.tracing {
                        trace.push(Step {
                            coeff: -&c,
                            left: Word(u.to_vec()),
                            source: Source::Rule(id),
                            right: Word(v.to_vec()),
                        });
                    }
                }
            }
        }
        Ok(Poly::from_terms(&self.field, done))
    }

    fn add_rule(&mut self, p: Poly, steps: Vec<Step>) -> usize {
        let (lead, lc) = {
            let (w, c) = p.leading().expect("nonzero");
            (w.clone(), c.clone())
        };
        let scale = lc.inv().expect("nonzero leading coefficient");
        let monic = p.scale(&scale);
        let mut tail = -&monic;
        tail.add_term(lead.clone(), FieldElem::one(&self.field));
        let id = self.recs.len();
        // retire rules whose lead contains the new one
        for old in 0..self.recs.len() {
            if self.recs[old].alive && self.recs[old].lead.find(lead.letters()).is_some() {
                self.recs[old].alive = false;
                self.trie.remove(self.recs[old].lead.letters());
                let d = self.recs[old].lead.len();
                self.push(d, Item::Revive(old));
            }
        }
        self.recs.push(RuleRec {
            lead: lead.clone(),
            tail,
            alive: true,
            deriv: self.tracing.then(|| Derivation { steps, scale }),
        });
        self.trie.insert(lead.letters(), id);
        for other in 0..=id {
            if !self.recs[other].alive {
                continue;
            }
            self.overlaps(id, other);
            if other != id {
                self.overlaps(other, id);
            }
        }
        id
    }

    /// Queues every `k` with suffix_k(lead a) = prefix_k(lead b), `k` proper.
    fn overlaps(&mut self, a: usize, b: usize) {
        let la = self.recs[a].lead.len();
        let lb = self.recs[b].lead.len();
        for k in 1..la.min(lb) {
            if self.recs[a].lead.letters()[la - k..] == self.recs[b].lead.letters()[..k] {
                self.push(la + lb - k, Item::Overlap { a, b, k });
            }
        }
    }

    fn s_poly(&self, a: usize, b: usize, k: usize, trace: &mut Vec<Step>) -> Option<Poly> {
        let (ra, rb) = (&self.recs[a], &self.recs[b]);
        if !ra.alive || !rb.alive {
            return None;
        }
        let w = &rb.lead.letters()[k..];
        let u = &ra.lead.letters()[..ra.lead.len() - k];
        let one = FieldElem::one(&self.field);
        let mut p = Poly::zero(&self.field);
        p.add_scaled_product(&one, &[], &lead_poly(ra, &self.field), w);
        p.add_scaled_product(&-&one, u, &lead_poly(rb, &self.field), &[]);
        if self.tracing {
            trace.push(Step {
                coeff: one.clone(),
                left: Word::empty(),
                source: Source::Rule(a),
                right: Word(w.to_vec()),
            });
            trace.push(Step {
                coeff: -&one,
                left: Word(u.to_vec()),
                source: Source::Rule(b),
                right: Word::empty(),
            });
        }
        Some(p)
    }

    fn run(&mut self, bound: usize) -> Result<Option<Derivation>, GroebnerError> {
        while let Some(((deg, _), item)) = self.queue.pop_first() {
            let mut trace = Vec::new();
            let one = FieldElem::one(&self.field);
            let p = match item {
                Item::Input(i) => {
                    if self.tracing {
                        trace.push(unit_step(&one, Source::Input(i)));
                    }
                    self.inputs[i].clone()
                }
                Item::Revive(r) => {
                    if self.tracing {
                        trace.push(unit_step(&one, Source::Rule(r)));
                    }
                    lead_poly(&self.recs[r], &self.field)
                }
                Item::Overlap { a, b, k } => match self.s_poly(a, b, k, &mut trace) {
                    Some(p) => p,
                    None => continue,
                },
            };
            let r = self.reduce(p, &mut trace)?;
            if r.is_zero() {
                continue;
            }
            if let Some(c) = r.as_constant() {
                let scale = c.inv().expect("nonzero constant");
                return Ok(Some(Derivation {
                    steps: trace,
                    scale,
                }));
            }
            if deg > bound || r.max_len() > bound {
                self.truncated = true;
                continue;
            }
            self.add_rule(r, trace);
        }
        Ok(None)
    }
}

fn unit_step(one: &FieldElem, source: Source) -> Step {
    Step {
        coeff: one.clone(),
        left: Word::empty(),
        source,
        right: Word::empty(),
    }
}

fn add_into(map: &mut BTreeMap<Word, FieldElem>, w: Word, c: FieldElem) {
    use alloc::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = &*e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Completion with bound `degree_bound` under the natural generator order.
pub fn complete(gens: &[Poly], degree_bound: usize) -> Result<ReductionSystem, GroebnerError> {
    complete_with(gens, &GbConfig::new(degree_bound))
}

pub fn complete_with(gens: &[Poly], cfg: &GbConfig) -> Result<ReductionSystem, GroebnerError> {
    let sys = run_completion(gens, cfg, false)?;
    if let Status::ContainsOne(_) = sys.status {
        // replay deterministically, this time keeping derivations
        return run_completion(gens, cfg, true);
    }
    Ok(sys)
}

fn max_letter(gens: &[Poly]) -> usize {
    gens.iter()
        .flat_map(|p| p.terms().flat_map(|(w, _)| w.letters().iter().copied()))
        .map(|l| l as usize + 1)
        .max()
        .unwrap_or(0)
}

fn run_completion(
    gens: &[Poly],
    cfg: &GbConfig,
    tracing: bool,
) -> Result<ReductionSystem, GroebnerError> {
    let field = match gens.first() {
        Some(p) => p.field().clone(),
        None => crate::scalars::make_field(1),
    };
    let n = max_letter(gens);
    let order = match &cfg.order {
        Some(o) if o.len() >= n => o.clone(),
        Some(o) => {
            return Err(GroebnerError::OrderTooShort {
                order: o.len(),
                letter: n,
            })
        }
        None => GenOrder::natural(n),
    };
    let mut inputs = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(GroebnerError::ZeroGenerator(i));
        }
        inputs.push(g.map_words(|w| order.encode(w)));
    }
    let mut eng = Engine {
        field: field.clone(),
        inputs: &inputs,
        recs: Vec::new(),
        trie: Trie::new(),
        queue: BTreeMap::new(),
        seq: 0,
        steps: 0,
        limit: cfg.step_limit,
        tracing,
        truncated: false,
    };
    for (i, g) in inputs.iter().enumerate() {
        eng.push(g.max_len(), Item::Input(i));
    }
    let found = eng.run(cfg.degree_bound)?;
    let status = match found {
        // without tracing the derivations are empty; the caller reruns
        Some(last) => Status::ContainsOne(Trace {
            order: order.clone(),
            rules: eng
                .recs
                .iter()
                .map(|r| {
                    r.deriv.clone().unwrap_or_else(|| Derivation {
                        steps: Vec::new(),
                        scale: FieldElem::one(&field),
                    })
                })
                .collect(),
            last,
        }),
        None if eng.truncated => Status::Truncated(cfg.degree_bound),
        None => Status::Complete,
    };
    // interreduce tails of the surviving rules
    let alive: Vec<usize> = (0..eng.recs.len()).filter(|&i| eng.recs[i].alive).collect();
    let mut rules = Vec::with_capacity(alive.len());
    let mut scratch = Vec::new();
    let saved = core::mem::replace(&mut eng.tracing, false);
    for &i in &alive {
        let tail = eng.recs[i].tail.clone();
        let tail = eng.reduce(tail, &mut scratch)?;
        rules.push(ReductionRule {
            lead: eng.recs[i].lead.clone(),
            tail,
        });
    }
    eng.tracing = saved;
    rules.sort_by(|a, b| a.lead.cmp(&b.lead));
    let mut trie = Trie::new();
    let mut stats = BTreeMap::new();
    for (k, r) in rules.iter().enumerate() {
        trie.insert(r.lead.letters(), k);
        *stats.entry(r.lead.len()).or_insert(0) += 1;
    }
    Ok(ReductionSystem {
        order,
        rules,
        trie,
        status,
        stats,
        field,
        steps: eng.steps,
    })
}

impl ReductionSystem {
    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    pub fn order(&self) -> &GenOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Number of alphabet letters the system was built over.
    pub fn letters(&self) -> usize {
        self.order.len()
    }

    /// Rules in original letters, sorted by lead under the configured order.
    pub fn rules(&self) -> Vec<ReductionRule> {
        self.rules
            .iter()
            .map(|r| ReductionRule {
                lead: self.order.decode(&r.lead),
                tail: r.tail.map_words(|w| self.order.decode(w)),
            })
            .collect()
    }

    /// Rule count by lead length.
    pub fn stats(&self) -> &BTreeMap<usize, usize> {
        &self.stats
    }

    pub fn reduction_steps(&self) -> u64 {
        self.steps
    }

    fn reduce_encoded(&self, p: Poly) -> Poly {
        let mut work = p.into_terms();
        let mut done: BTreeMap<Word, FieldElem> = BTreeMap::new();
        while let Some((w, c)) = work.pop_last() {
            match self.trie.find(w.letters()) {
                None => {
                    done.insert(w, c);
                }
                Some((pos, id)) => {
                    let r = &self.rules[id];
                    let u = &w.letters()[..pos];
                    let v = &w.letters()[pos + r.lead.len()..];
                    for (tw, tc) in r.tail.terms() {
                        let mut nw = u.to_vec();
                        nw.extend_from_slice(tw.letters());
                        nw.extend_from_slice(v);
                        add_into(&mut work, Word(nw), &c * tc);
                    }
                }
            }
        }
        Poly::from_terms(&self.field, done)
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        let enc = p.map_words(|w| self.order.encode(w));
        self.reduce_encoded(enc).map_words(|w| self.order.decode(w))
    }

    pub fn is_zero_algebra(&self) -> Option<&Trace> {
        match &self.status {
            Status::ContainsOne(t) => Some(t),
            _ => None,
        }
    }

    /// Reduces every overlap of the final rules; returns the first
    /// `(a, b, k)` that fails to vanish.
    pub fn recheck_overlaps(&self) -> Result<(), (usize, usize, usize)> {
        let one = FieldElem::one(&self.field);
        for a in 0..self.rules.len() {
            for b in 0..self.rules.len() {
                let (ra, rb) = (&self.rules[a], &self.rules[b]);
                let (la, lb) = (ra.lead.len(), rb.lead.len());
                if a != b && (ra.lead.find(rb.lead.letters()).is_some()) {
                    return Err((a, b, 0));
                }
                for k in 1..la.min(lb) {
                    if ra.lead.letters()[la - k..] != rb.lead.letters()[..k] {
                        continue;
                    }
                    let mut p = Poly::zero(&self.field);
                    p.add_scaled_product(&one, &[], &ra.tail, &rb.lead.letters()[k..]);
                    p.add_scaled_product(&-&one, &ra.lead.letters()[..la - k], &rb.tail, &[]);
                    if !self.reduce_encoded(p).is_zero() {
                        return Err((a, b, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// `LEAD -> tail` per line; letters `>= theta` print as group-likes.
    pub fn dump(&self, theta: usize) -> String {
        let mut out = String::new();
        for r in self.rules() {
            let _ = writeln!(out, "{} -> {}", WordText(&r.lead, theta), r.tail.text(theta));
        }
        out
    }
}

/// Replays a zero-algebra trace against the original generators.
pub fn trace_replay(trace: &Trace, gens: &[Poly]) -> Result<Poly, GroebnerError> {
    let field = match gens.first() {
        Some(p) => p.field().clone(),
        None => return Err(GroebnerError::CorruptTrace),
    };
    let inputs: Vec<Poly> = gens.iter().map(|g| g.map_words(|w| trace.order.encode(w))).collect();
    let mut rules: Vec<Poly> = Vec::with_capacity(trace.rules.len());
    let eval = |d: &Derivation, rules: &[Poly]| -> Result<Poly, GroebnerError> {
        let mut acc = Poly::zero(&field);
        for s in &d.steps {
            let src = match s.source {
                Source::Input(i) => inputs.get(i),
                Source::Rule(r) => rules.get(r),
            }
            .ok_or(GroebnerError::CorruptTrace)?;
            acc.add_scaled_product(&s.coeff, s.left.letters(), src, s.right.letters());
        }
        Ok(acc.scale(&d.scale))
    };
    for d in &trace.rules {
        let p = eval(d, &rules)?;
        rules.push(p);
    }
    let last = eval(&trace.last, &rules)?;
    match last.as_constant() {
        Some(c) if !c.is_zero() => Ok(last),
        _ => Err(GroebnerError::CorruptTrace),
    }
}

/// Aho-Corasick automaton over the rule leads, restricted to states that
/// spell normal words.
struct Automaton {
    goto: Vec<Vec<u32>>,
    dead: Vec<bool>,
}

const NONE: u32 = u32::MAX;

impl Automaton {
    fn build(leads: &[&[Letter]], letters: usize) -> Self {
        let mut goto: Vec<Vec<u32>> = vec![vec![NONE; letters]];
        let mut dead = vec![false];
        for w in leads {
            let mut s = 0usize;
            for &l in *w {
                let t = goto[s][l as usize];
                s = if t == NONE {
                    goto.push(vec![NONE; letters]);
                    dead.push(false);
                    let t = goto.len() - 1;
                    goto[s][l as usize] = t as u32;
                    t
                } else {
                    t as usize
                };
            }
            dead[s] = true;
        }
        // breadth-first failure links, completing goto into a DFA
        let mut fail = vec![0u32; goto.len()];
        let mut queue = alloc::collections::VecDeque::new();
        for l in 0..letters {
            let t = goto[0][l];
            if t == NONE {
                goto[0][l] = 0;
            } else {
                fail[t as usize] = 0;
                queue.push_back(t as usize);
            }
        }
        while let Some(s) = queue.pop_front() {
            let f = fail[s] as usize;
            if dead[f] {
                dead[s] = true;
            }
            for l in 0..letters {
                let t = goto[s][l];
                if t == NONE {
                    goto[s][l] = goto[f][l];
                } else {
                    fail[t as usize] = goto[f][l];
                    queue.push_back(t as usize);
                }
            }
        }
        Automaton { goto, dead }
    }

    fn has_live_cycle(&self) -> bool {
        // iterative three-colour DFS from the root over live states
        let n = self.goto.len();
        let mut colour = vec![0u8; n];
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        colour[0] = 1;
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            if *next == self.goto[s].len() {
                colour[s] = 2;
                stack.pop();
                continue;
            }
            let t = self.goto[s][*next] as usize;
            *next += 1;
            if self.dead[t] {
                continue;
            }
            match colour[t] {
                0 => {
                    colour[t] = 1;
                    stack.push((t, 0));
                }
                1 => return true,
                _ => {}
            }
        }
        false
    }

    /// Live words of each length `0..=up_to`.
    fn counts(&self, up_to: usize) -> Vec<u64> {
        let n = self.goto.len();
        let mut cur = vec![0u64; n];
        cur[0] = 1;
        let mut out = Vec::with_capacity(up_to + 1);
        for d in 0..=up_to {
            out.push(cur.iter().sum());
            if d == up_to {
                break;
            }
            let mut nxt = vec![0u64; n];
            for s in 0..n {
                if cur[s] == 0 {
                    continue;
                }
                for &t in &self.goto[s] {
                    if !self.dead[t as usize] {
                        nxt[t as usize] += cur[s];
                    }
                }
            }
            cur = nxt;
        }
        out
    }
}

/// Normal-word statistics of a reduction system.
pub fn dimension(s: &ReductionSystem, degree_bound: usize) -> GbReport {
    let verdict = match &s.status {
        Status::ContainsOne(_) => Verdict::Zero,
        Status::Truncated(_) => Verdict::Inconclusive { degree_bound },
        Status::Complete => {
            let leads: Vec<&[Letter]> = s.rules.iter().map(|r| r.lead.letters()).collect();
            let aut = Automaton::build(&leads, s.letters());
            if aut.has_live_cycle() {
                Verdict::Infinite {
                    counts: aut.counts(degree_bound),
                }
            } else {
                // an acyclic automaton on n states has no live word longer than n
                let mut counts = aut.counts(aut.goto.len());
                while counts.len() > 1 && counts.last() == Some(&0) {
                    counts.pop();
                }
                Verdict::Finite {
                    dim: counts.iter().sum(),
                    counts,
                }
            }
        }
    };
    GbReport {
        verdict,
        rules: s.len(),
        degree_bound,
        elapsed: None,
    }
}
