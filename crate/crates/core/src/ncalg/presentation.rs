use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use crate::paramfield::RationalFunction;

use super::word::{Sym, Terms, Word};
use super::NcError;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug)]
pub struct Symbol {
    pub name: String,
    pub star: Sym,
    /// Weight in the degree-first word order.
    pub weight: u32,
    pub grade: Option<i32>,
}

/// Rewrite rule `lhs -> rhs`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub name: String,
    pub lhs: Word,
    pub rhs: Terms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Run {
    Exactly(usize),
    AtLeast(usize),
}

/// Infinite family of rules whose left-hand sides are concatenations of
/// single-symbol runs, e.g. `a a*^j b^k b*`.
///
/// Adjacent runs must use distinct symbols so that greedy run matching is exact.
#[derive(Clone, Debug)]
pub struct RuleFamily {
    pub name: String,
    pub runs: Vec<(Sym, Run)>,
    /// Right-hand side as a function of the matched run lengths.
    pub rhs: fn(&[usize]) -> Terms,
    /// Largest open run length instantiated by construction-time checks and
    /// by [`super::check_confluence`].
    pub check_bound: usize,
}

impl RuleFamily {
    fn match_prefix(&self, w: &[Sym]) -> Option<(usize, Vec<usize>)> {
        let mut pos = 0;
        let mut lens = Vec::with_capacity(self.runs.len());
        for &(sym, run) in &self.runs {
            let mut n = 0;
            while pos + n < w.len() && w[pos + n] == sym {
                n += 1;
            }
            let ok = match run {
                Run::Exactly(m) => {
                    if n < m {
                        return None;
                    }
                    n = m;
                    true
                }
                Run::AtLeast(m) => n >= m,
            };
            if !ok {
                return None;
            }
            lens.push(n);
            pos += n;
        }
        Some((pos, lens))
    }

    fn lhs_for(&self, lens: &[usize]) -> Word {
        let mut v = Vec::new();
        for (&(sym, _), &n) in self.runs.iter().zip(lens) {
            v.extend(std::iter::repeat_n(sym, n));
        }
        Word(v)
    }

    /// Concrete rules for every open run length up to `check_bound`.
    pub fn instances(&self) -> Vec<Rule> {
        let mut choices: Vec<Vec<usize>> = vec![vec![]];
        for &(_, run) in &self.runs {
            let range: Vec<usize> = match run {
                Run::Exactly(m) => vec![m],
                Run::AtLeast(m) => (m..=self.check_bound.max(m)).collect(),
            };
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    range.iter().map(move |&n| {
                        let mut c = c.clone();
                        c.push(n);
                        c
                    })
                })
                .collect();
        }
        choices
            .into_iter()
            .map(|lens| Rule {
                name: format!("{}{:?}", self.name, lens),
                lhs: self.lhs_for(&lens),
                rhs: (self.rhs)(&lens),
            })
            .collect()
    }
}

/// A finitely presented *-algebra with a terminating rewrite system.
pub struct Presentation {
    id: u64,
    name: String,
    symbols: Vec<Symbol>,
    rules: Vec<Rule>,
    rules_by_first: Vec<Vec<usize>>,
    families: Vec<RuleFamily>,
    relations: Vec<(String, Terms)>,
    cache: RwLock<HashMap<Word, Arc<Terms>>>,
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation")
            .field("name", &self.name)
            .field("symbols", &self.symbols.len())
            .field("rules", &self.rules.len())
            .finish()
    }
}

impl Presentation {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn families(&self) -> &[RuleFamily] {
        &self.families
    }

    /// Defining relations `r = 0` as supplied to the builder.
    pub fn relations(&self) -> &[(String, Terms)] {
        &self.relations
    }

    pub fn symbol_name(&self, s: Sym) -> &str {
        &self.symbols[s as usize].name
    }

    pub fn symbol_by_name(&self, name: &str) -> Option<Sym> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as Sym)
    }

    pub fn star_symbol(&self, s: Sym) -> Sym {
        self.symbols[s as usize].star
    }

    pub fn is_graded(&self) -> bool {
        self.symbols.iter().all(|s| s.grade.is_some())
    }

    pub fn word_weight(&self, w: &Word) -> u64 {
        w.0.iter()
            .map(|&s| self.symbols[s as usize].weight as u64)
            .sum()
    }

    pub fn word_grade(&self, w: &Word) -> Option<i64> {
        w.0.iter()
            .map(|&s| self.symbols[s as usize].grade.map(i64::from))
            .sum()
    }

    /// The rewriting order: total weight, then lexicographic by alphabet index.
    pub fn cmp_words(&self, a: &Word, b: &Word) -> Ordering {
        self.word_weight(a)
            .cmp(&self.word_weight(b))
            .then_with(|| a.0.cmp(&b.0))
    }

    pub fn star_word(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&s| self.star_symbol(s)).collect())
    }

    pub fn star_terms(&self, t: &Terms) -> Terms {
        Terms::from_pairs(t.iter().map(|(w, c)| (self.star_word(w), c.clone())))
    }

    /// Every rule checked during construction and confluence checking.
    pub fn all_check_rules(&self) -> Vec<Rule> {
        let mut out = self.rules.clone();
        for f in &self.families {
            out.extend(f.instances());
        }
        out
    }

    pub fn word_text(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|&s| self.symbol_name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn terms_text(&self, t: &Terms) -> String {
        if t.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in t.iter().enumerate() {
            let (neg, mag) = match c.as_constant() {
                Some(r) if r < num_traits::Zero::zero() => (true, -c),
                _ => (false, c.clone()),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = mag.to_string();
            let coef = if mag.numer().num_terms() > 1 && !coef.starts_with('(') {
                format!("({coef})")
            } else {
                coef
            };
            if w.is_empty() {
                out.push_str(&coef);
            } else if mag.is_one() {
                out.push_str(&self.word_text(w));
            } else {
                out.push_str(&coef);
                out.push('*');
                out.push_str(&self.word_text(w));
            }
        }
        out
    }

    fn prefix_match(&self, w: &Word) -> Option<(usize, Terms)> {
        let first = *w.0.first()?;
        for &ri in &self.rules_by_first[first as usize] {
            let r = &self.rules[ri];
            if w.0.starts_with(&r.lhs.0) {
                return Some((r.lhs.len(), r.rhs.clone()));
            }
        }
        for f in &self.families {
            if f.runs[0].0 != first {
                continue;
            }
            if let Some((len, lens)) = f.match_prefix(&w.0) {
                return Some((len, (f.rhs)(&lens)));
            }
        }
        None
    }

    fn cached(&self, w: &Word) -> Option<Arc<Terms>> {
        self.cache.read().expect("cache lock").get(w).cloned()
    }

    fn store(&self, w: Word, t: Arc<Terms>) {
        self.cache.write().expect("cache lock").insert(w, t);
    }

    /// Normal form of a single word (memoized).
    pub fn normal_word(&self, w: &Word) -> Arc<Terms> {
        if w.is_empty() {
            return Arc::new(Terms::one());
        }
        if let Some(t) = self.cached(w) {
            return t;
        }
        let tail = self.normal_word(&Word(w.0[1..].to_vec()));
        let x = w.0[0];
        let mut out = Terms::zero();
        for (u, c) in tail.iter() {
            let t = self.front(x, u);
            out.add_scaled(&t, c);
        }
        let out = Arc::new(out);
        self.store(w.clone(), out.clone());
        out
    }

    /// Normal form of `x u` for a normal word `u`; any redex starts at position 0.
    fn front(&self, x: Sym, u: &Word) -> Arc<Terms> {
        let mut v = Vec::with_capacity(u.len() + 1);
        v.push(x);
        v.extend_from_slice(&u.0);
        let w = Word(v);
        if let Some(t) = self.cached(&w) {
            return t;
        }
        let out = match self.prefix_match(&w) {
            None => Terms::word(w.clone()),
            Some((len, rhs)) => {
                let suffix = Word(w.0[len..].to_vec());
                let mut out = Terms::zero();
                for (r, c) in rhs.iter() {
                    let t = self.normal_word(&r.concat(&suffix));
                    out.add_scaled(&t, c);
                }
                out
            }
        };
        let out = Arc::new(out);
        self.store(w, out.clone());
        out
    }

    pub fn normal_form(&self, t: &Terms) -> Terms {
        let mut out = Terms::zero();
        for (w, c) in t.iter() {
            out.add_scaled(&self.normal_word(w), c);
        }
        out
    }

    /// Normal form of the product of two elements.
    pub fn mul_nf(&self, x: &Terms, y: &Terms) -> Terms {
        let mut out = Terms::zero();
        for (w1, c1) in x.iter() {
            for (w2, c2) in y.iter() {
                let t = self.normal_word(&w1.concat(w2));
                out.add_scaled(&t, &(c1 * c2));
            }
        }
        out
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        (0..w.len()).all(|i| self.prefix_match(&Word(w.0[i..].to_vec())).is_none())
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

/// Incremental constructor for [`Presentation`]; validation happens in [`Self::build`].
pub struct PresentationBuilder {
    name: String,
    symbols: Vec<Symbol>,
    rules: Vec<Rule>,
    families: Vec<RuleFamily>,
    relations: Vec<(String, Terms)>,
}

impl PresentationBuilder {
    pub fn new(name: &str) -> Self {
        PresentationBuilder {
            name: name.to_string(),
            symbols: Vec::new(),
            rules: Vec::new(),
            families: Vec::new(),
            relations: Vec::new(),
        }
    }

    /// Adds a self-adjoint symbol.
    pub fn symbol(&mut self, name: &str, weight: u32, grade: Option<i32>) -> Sym {
        let id = self.symbols.len() as Sym;
        self.symbols.push(Symbol {
            name: name.to_string(),
            star: id,
            weight,
            grade,
        });
        id
    }

    /// Adds `name` and `name*` as a star pair; the grade of `name*` is the negative.
    pub fn star_pair(&mut self, name: &str, weight: u32, grade: Option<i32>) -> (Sym, Sym) {
        let x = self.symbol(name, weight, grade);
        let y = self.symbol(&format!("{name}*"), weight, grade.map(|g| -g));
        self.symbols[x as usize].star = y;
        self.symbols[y as usize].star = x;
        (x, y)
    }

    pub fn rule(&mut self, name: &str, lhs: &[Sym], rhs: Terms) -> &mut Self {
        self.rules.push(Rule {
            name: name.to_string(),
            lhs: Word(lhs.to_vec()),
            rhs,
        });
        self
    }

    pub fn family(&mut self, f: RuleFamily) -> &mut Self {
        self.families.push(f);
        self
    }

    pub fn relation(&mut self, name: &str, r: Terms) -> &mut Self {
        self.relations.push((name.to_string(), r));
        self
    }

    pub fn build(self) -> Result<Presentation, NcError> {
        let n = self.symbols.len();
        for (i, s) in self.symbols.iter().enumerate() {
            if (s.star as usize) >= n || self.symbols[s.star as usize].star as usize != i {
                return Err(NcError::InvalidStar(s.name.clone()));
            }
        }
        let mut rules_by_first = vec![Vec::new(); n];
        for (i, r) in self.rules.iter().enumerate() {
            match r.lhs.0.first() {
                Some(&s) if (s as usize) < n => rules_by_first[s as usize].push(i),
                _ => return Err(NcError::TerminationViolation(r.name.clone())),
            }
        }
        let pres = Presentation {
            id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            name: self.name,
            symbols: self.symbols,
            rules: self.rules,
            rules_by_first,
            families: self.families,
            relations: self.relations,
            cache: RwLock::new(HashMap::new()),
        };
        let check_rules = pres.all_check_rules();
        for r in &check_rules {
            for (w, _) in r.rhs.iter() {
                if w.0.iter().any(|&s| s as usize >= n)
                    || pres.cmp_words(w, &r.lhs) != Ordering::Less
                {
                    return Err(NcError::TerminationViolation(r.name.clone()));
                }
            }
        }
        if pres.is_graded() {
            for r in &check_rules {
                let g = pres.word_grade(&r.lhs);
                if r.rhs.iter().any(|(w, _)| pres.word_grade(w) != g) {
                    return Err(NcError::GradingViolation(r.name.clone()));
                }
            }
        }
        // Every rule, every relation and their stars must vanish in the quotient.
        let minus_one = RationalFunction::from_int(-1);
        let mut to_check: Vec<(String, Terms)> = pres.relations.clone();
        for r in &check_rules {
            let mut t = Terms::word(r.lhs.clone());
            t.add_scaled(&r.rhs, &minus_one);
            to_check.push((r.name.clone(), t));
        }
        for (name, t) in to_check {
            let nf = pres.normal_form(&t);
            if !nf.is_zero() {
                return Err(NcError::RelationNotDerivable {
                    name,
                    residual: pres.terms_text(&nf),
                });
            }
            let nf = pres.normal_form(&pres.star_terms(&t));
            if !nf.is_zero() {
                return Err(NcError::RelationNotDerivable {
                    name: format!("star({name})"),
                    residual: pres.terms_text(&nf),
                });
            }
        }
        Ok(pres)
    }
}
