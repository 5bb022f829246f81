use serde::Serialize;

use super::presentation::{Presentation, Rule};
use super::word::{Terms, Word};

/// An ambiguity whose two one-step reductions have different normal forms.
#[derive(Clone, Debug, Serialize)]
pub struct Overlap {
    pub word: String,
    pub first_rule: String,
    pub second_rule: String,
    pub difference: String,
}

fn rewrite_at(w: &Word, at: usize, r: &Rule) -> Terms {
    let prefix = Word(w.0[..at].to_vec());
    let suffix = Word(w.0[at + r.lhs.len()..].to_vec());
    Terms::from_pairs(
        r.rhs
            .iter()
            .map(|(m, c)| (prefix.concat(m).concat(&suffix), c.clone())),
    )
}

fn find_sub(hay: &[u8], needle: &[u8]) -> Vec<usize> {
    if needle.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - needle.len())
        .filter(|&i| &hay[i..i + needle.len()] == needle)
        .collect()
}

/// Enumerates inclusion and prefix/suffix ambiguities between all rule
/// left-hand sides (rule families instantiated up to their check bound) and
/// returns those that do not resolve.
pub fn check_confluence(pres: &Presentation) -> Vec<Overlap> {
    let rules = pres.all_check_rules();
    let mut bad = Vec::new();
    let mut test = |w: Word, r1: &Rule, at1: usize, r2: &Rule, at2: usize| {
        let x = pres.normal_form(&rewrite_at(&w, at1, r1));
        let y = pres.normal_form(&rewrite_at(&w, at2, r2));
        let d = x.sub(&y);
        if !d.is_zero() {
            bad.push(Overlap {
                word: pres.word_text(&w),
                first_rule: r1.name.clone(),
                second_rule: r2.name.clone(),
                difference: pres.terms_text(&d),
            });
        }
    };
    for (i, r1) in rules.iter().enumerate() {
        for (j, r2) in rules.iter().enumerate() {
            let (l1, l2) = (&r1.lhs.0, &r2.lhs.0);
            if i != j {
                for at in find_sub(l1, l2) {
                    test(r1.lhs.clone(), r1, 0, r2, at);
                }
            }
            for k in 1..l1.len().min(l2.len()) {
                if l1[l1.len() - k..] == l2[..k] {
                    let mut v = l1.clone();
                    v.extend_from_slice(&l2[k..]);
                    test(Word(v), r1, 0, r2, l1.len() - k);
                }
            }
        }
    }
    bad
}
