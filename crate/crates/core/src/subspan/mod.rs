//! Rewriting coinvariant elements in base-subalgebra monomials by exact elimination.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::connection::Family;
use crate::ncalg::{
    heegaard_presentation, podles_presentation, s2pq_presentation, NCPolynomial, Presentation, Sym,
    Terms, Word,
};
use crate::paramfield::RationalFunction as RF;
use crate::quantumhopf::{podles_generators, SValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspanError {
    #[error("element does not lie in the span; residual {residual}")]
    NotInSpan { residual: String },
    #[error("element belongs to a different presentation than the span")]
    PresentationMismatch,
}

/// Finite list of base monomials with their normal-formed ambient images.
#[derive(Clone, Debug)]
pub struct SpanningSet {
    pub family: Family,
    pub s: Option<SValue>,
    base: Arc<Presentation>,
    ambient: Arc<Presentation>,
    monomials: Vec<Word>,
    images: Vec<Terms>,
}

/// `x = Σ c_m · image(m)` over base monomials `m`.
#[derive(Clone, Debug)]
pub struct BaseExpression {
    base: Arc<Presentation>,
    terms: Terms,
}

fn generator_images(
    family: Family,
    s: &SValue,
) -> (Arc<Presentation>, Arc<Presentation>, Vec<Terms>) {
    match family {
        Family::Heegaard => {
            let h = heegaard_presentation();
            let img = |t: &str| {
                NCPolynomial::parse(&h, t)
                    .expect("built-in image parses")
                    .normal_form()
                    .into_terms()
            };
            (
                s2pq_presentation(),
                h.clone(),
                vec![img("b b*"), img("a b"), img("b* a*")],
            )
        }
        Family::Podles => {
            let [k, l, ls] = podles_generators(s);
            let amb = k.presentation().clone();
            (
                podles_presentation(),
                amb,
                vec![k.into_terms(), l.into_terms(), ls.into_terms()],
            )
        }
    }
}

impl SpanningSet {
    fn assemble(family: Family, s: &SValue, words: Vec<Word>) -> SpanningSet {
        let (base, ambient, gens) = generator_images(family, s);
        let mut cache: BTreeMap<Word, Terms> = BTreeMap::new();
        cache.insert(Word::unit(), Terms::one());
        let mut images = Vec::with_capacity(words.len());
        for w in &words {
            images.push(image_of(&ambient, &gens, &mut cache, w));
        }
        SpanningSet {
            family,
            s: (family == Family::Podles).then(|| s.clone()),
            base,
            ambient,
            monomials: words,
            images,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn ambient(&self) -> &Arc<Presentation> {
        &self.ambient
    }

    pub fn monomials(&self) -> &[Word] {
        &self.monomials
    }

    pub fn images(&self) -> &[Terms] {
        &self.images
    }

    pub fn monomial_texts(&self) -> Vec<String> {
        self.monomials
            .iter()
            .map(|w| self.base.word_text(w))
            .collect()
    }

    /// Ambient image of an arbitrary base element.
    pub fn image(&self, t: &Terms) -> Terms {
        let (_, _, gens) =
            generator_images(self.family, self.s.as_ref().unwrap_or(&SValue::Symbolic));
        let mut cache = BTreeMap::new();
        cache.insert(Word::unit(), Terms::one());
        let mut acc = Terms::zero();
        for (w, c) in t.iter() {
            acc.add_scaled(&image_of(&self.ambient, &gens, &mut cache, w), c);
        }
        acc
    }
}

fn image_of(
    ambient: &Presentation,
    gens: &[Terms],
    cache: &mut BTreeMap<Word, Terms>,
    w: &Word,
) -> Terms {
    if let Some(t) = cache.get(w) {
        return t.clone();
    }
    let (head, last) = w.0.split_at(w.len() - 1);
    let prefix = image_of(ambient, gens, cache, &Word::from(head));
    let t = ambient.mul_nf(&prefix, &gens[last[0] as usize]);
    cache.insert(w.clone(), t.clone());
    t
}

/// Ordered monomials whose normal-formed ambient image has degree at most `degree_bound`.
///
/// Podleś: `K^i L^j`, `K^i L*^j`. Mirror sphere: `f0^i f1^j f1*^k`, since
/// `f1 f1*` does not rewrite in the mirror sphere presentation and its image
/// `a a* + b b* - 1` has degree 2.
pub fn build_span(family: Family, degree_bound: usize, s: &SValue) -> SpanningSet {
    let (g0, g, gs): (Sym, Sym, Sym) = (0, 1, 2);
    let mut words = Vec::new();
    for n in 0..=degree_bound {
        for i in (0..=n).rev() {
            let rest = n - i;
            let head = Word::power(g0, i);
            match family {
                Family::Podles => {
                    words.push(head.concat(&Word::power(g, rest)));
                    if rest > 0 {
                        words.push(head.concat(&Word::power(gs, rest)));
                    }
                }
                Family::Heegaard => {
                    for j in (0..=rest).rev() {
                        let w = head
                            .concat(&Word::power(g, j))
                            .concat(&Word::power(gs, rest - j));
                        words.push(w);
                    }
                }
            }
        }
    }
    let mut span = SpanningSet::assemble(family, s, words);
    let keep: Vec<bool> = span
        .images
        .iter()
        .map(|t| t.max_len() <= degree_bound)
        .collect();
    let mut k = keep.iter();
    span.monomials.retain(|_| *k.next().unwrap());
    let mut k = keep.iter();
    span.images.retain(|_| *k.next().unwrap());
    span
}

/// Every word in the three base generators of length at most `length_bound`.
pub fn word_fallback_span(family: Family, length_bound: usize, s: &SValue) -> SpanningSet {
    let mut words = vec![Word::unit()];
    let mut layer = vec![Word::unit()];
    for _ in 0..length_bound {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for w in &layer {
            for g in 0..3 {
                next.push(w.concat(&Word::letter(g)));
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    SpanningSet::assemble(family, s, words)
}

struct Pivot {
    word: Word,
    vector: Terms,
    combo: BTreeMap<usize, RF>,
}

fn leading(t: &Terms) -> Option<(&Word, &RF)> {
    t.0.iter().next_back()
}

/// Clears every pivot word from `v`, recording `v_out = v - Σ c_p pivot_p` in `combo`.
fn reduce(
    mut v: Terms,
    mut combo: BTreeMap<usize, RF>,
    pivots: &[Pivot],
) -> (Terms, BTreeMap<usize, RF>) {
    loop {
        let hit = pivots.iter().find(|p| v.0.contains_key(&p.word));
        let Some(p) = hit else { break };
        let c = v.coeff(&p.word);
        v.add_scaled(&p.vector, &-&c);
        for (i, k) in &p.combo {
            let e = combo.entry(*i).or_insert_with(RF::zero);
            *e = &*e - &(&c * k);
        }
    }
    combo.retain(|_, c| !c.is_zero());
    (v, combo)
}

/// Solves `x = Σ c_i image_i` exactly; pivots are taken in monomial order.
pub fn express(x: &NCPolynomial, span: &SpanningSet) -> Result<BaseExpression, SubspanError> {
    if x.presentation().id() != span.ambient.id() {
        return Err(SubspanError::PresentationMismatch);
    }
    let mut pivots: Vec<Pivot> = Vec::new();
    for (i, img) in span.images.iter().enumerate() {
        let combo: BTreeMap<usize, RF> = [(i, RF::one())].into_iter().collect();
        let (v, combo) = reduce(img.clone(), combo, &pivots);
        let Some((w, c)) = leading(&v) else { continue };
        let inv = c.recip().expect("leading coefficient is nonzero");
        let word = w.clone();
        let vector = v.scale(&inv);
        let combo = combo.into_iter().map(|(k, c)| (k, &c * &inv)).collect();
        pivots.push(Pivot {
            word,
            vector,
            combo,
        });
    }
    let target = span.ambient.normal_form(x.terms());
    let (residual, combo) = reduce(target, BTreeMap::new(), &pivots);
    if !residual.is_zero() {
        return Err(SubspanError::NotInSpan {
            residual: span.ambient.terms_text(&residual),
        });
    }
    let terms = Terms::from_pairs(
        combo
            .into_iter()
            .map(|(i, c)| (span.monomials[i].clone(), -&c)),
    );
    Ok(BaseExpression {
        base: span.base.clone(),
        terms,
    })
}

/// Tries the ordered span at the ambient degree of `x`, then two larger bounds,
/// then the word span.
pub fn express_escalating(
    x: &NCPolynomial,
    family: Family,
    s: &SValue,
) -> Result<(BaseExpression, SpanningSet), SubspanError> {
    let start = x.terms().max_len();
    let start = start + start % 2;
    for bound in [start, start + 2, start + 4] {
        let span = build_span(family, bound, s);
        match express(x, &span) {
            Ok(e) => return Ok((e, span)),
            Err(SubspanError::NotInSpan { residual }) => {
                log::debug!("no expression at bound {bound}; residual {residual}");
            }
            Err(e) => return Err(e),
        }
    }
    let span = word_fallback_span(family, (start + 4) / 2, s);
    log::warn!("ordered monomials did not span; using word span");
    express(x, &span).map(|e| (e, span))
}

impl BaseExpression {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn to_polynomial(&self) -> NCPolynomial {
        NCPolynomial::new(&self.base, self.terms.clone())
    }

    pub fn to_ambient(&self, span: &SpanningSet) -> NCPolynomial {
        NCPolynomial::new(&span.ambient, span.image(&self.terms))
    }

    /// Monomial text → coefficient text.
    pub fn to_text(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(w, c)| (self.base.word_text(w), c.to_string()))
            .collect()
    }
}

impl PartialEq for BaseExpression {
    fn eq(&self, other: &Self) -> bool {
        self.base.id() == other.base.id() && self.terms == other.terms
    }
}

impl Serialize for BaseExpression {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.to_text().serialize(ser)
    }
}
