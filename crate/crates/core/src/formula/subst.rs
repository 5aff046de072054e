use std::collections::BTreeMap;

use super::Formula;

/// A total map from atoms to formulas. Atoms without an explicit image go to
/// `~T`, which keeps images of finite Kreisel-Putnam rank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, atom: impl Into<String>, image: Formula) -> Option<Formula> {
        self.map.insert(atom.into(), image)
    }

    pub fn default_image() -> Formula {
        Formula::neg(Formula::Top)
    }

    pub fn get(&self, atom: &str) -> Option<&Formula> {
        self.map.get(atom)
    }

    /// Image of `atom`, falling back to the default.
    pub fn image(&self, atom: &str) -> Formula {
        match self.map.get(atom) {
            Some(f) => f.clone(),
            None => {
                log::warn!("atom `{atom}` has no image under the substitution; using ~T");
                Self::default_image()
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Formula)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        match f {
            Formula::Atom(name) => self.image(name),
            Formula::Bot => Formula::Bot,
            Formula::Top => Formula::Top,
            Formula::Neg(a) => Formula::neg(self.apply(a)),
            Formula::And(a, b) => Formula::and(self.apply(a), self.apply(b)),
            Formula::Or(a, b) => Formula::or(self.apply(a), self.apply(b)),
            Formula::Imp(a, b) => Formula::imp(self.apply(a), self.apply(b)),
        }
    }

    /// `self ∘ inner`: first apply `inner`, then `self`. Defined on the
    /// atoms mapped by either side.
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (atom, image) in &inner.map {
            out.insert(atom.clone(), self.apply(image));
        }
        // atoms unmapped by `inner` go to ~T, whose image under `self` is ~T
        for atom in self.map.keys() {
            if !inner.map.contains_key(atom) {
                out.insert(atom.clone(), Self::default_image());
            }
        }
        out
    }
}

impl FromIterator<(String, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Formula)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

pub fn apply_subst(s: &Substitution, f: &Formula) -> Formula {
    s.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn homomorphic_with_default() {
        let s: Substitution = [("p".to_string(), p("~~a"))].into_iter().collect();
        assert_eq!(s.apply(&p("p & q")), p("~~a & ~T"));
        assert_eq!(Substitution::new().apply(&p("~p")), p("~~T"));
        let s: Substitution = [("p".to_string(), p("q"))].into_iter().collect();
        assert_eq!(s.apply(&p("p -> p")), p("q -> q"));
    }

    #[test]
    fn constants_are_fixed() {
        let s: Substitution = [("p".to_string(), p("q"))].into_iter().collect();
        assert_eq!(s.apply(&p("F | T")), p("F | T"));
    }
}
