//! Formulas of intuitionistic propositional logic.
//!
//! The AST keeps `Neg` as a primitive constructor: the Kreisel-Putnam rank
//! looks at the outermost `~`, so `~a` and `a -> F` must stay distinguishable.
//! `F` and `T` are primitive constants.
//!
//! Surface syntax (ASCII), tightest first: `~`, `&`, `|`, `->`. All three
//! binary connectives associate to the right, so right-folded conjunctions
//! and disjunctions print without parentheses.

mod parse;
mod subst;

use std::fmt;

use indexmap::IndexSet;

pub use parse::{parse, ParseError};
pub use subst::{apply_subst, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Bot,
    Top,
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `(a -> b) & (b -> a)`; the grammar has no biconditional.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Atom names in order of first occurrence (left to right).
    pub fn atoms(&self) -> Vec<String> {
        let mut seen = IndexSet::new();
        self.collect_atoms(&mut seen);
        seen.into_iter().collect()
    }

    fn collect_atoms(&self, seen: &mut IndexSet<String>) {
        match self {
            Formula::Atom(name) => {
                if !seen.contains(name) {
                    seen.insert(name.clone());
                }
            }
            Formula::Bot | Formula::Top => {}
            Formula::Neg(a) => a.collect_atoms(seen),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(seen);
                b.collect_atoms(seen);
            }
        }
    }

    /// Distinct subformulas, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = IndexSet::new();
        self.collect_subformulas(&mut out);
        out.into_iter().collect()
    }

    fn collect_subformulas(&self, out: &mut IndexSet<Formula>) {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => {}
            Formula::Neg(a) => a.collect_subformulas(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
        if !out.contains(self) {
            out.insert(self.clone());
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => 1,
            Formula::Neg(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => 0,
            Formula::Neg(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Neg(..) => 4,
            Formula::Atom(_) | Formula::Bot | Formula::Top => 5,
        }
    }
}

/// Right-folded disjunction. The empty disjunction is `~T`, which keeps the
/// Kreisel-Putnam rank of every constructed formula finite.
pub fn big_or(fs: impl IntoIterator<Item = Formula>) -> Formula {
    fold_right(fs, Formula::or).unwrap_or_else(|| Formula::neg(Formula::Top))
}

/// Right-folded conjunction; the empty conjunction is `~F`.
pub fn big_and(fs: impl IntoIterator<Item = Formula>) -> Formula {
    fold_right(fs, Formula::and).unwrap_or_else(|| Formula::neg(Formula::Bot))
}

fn fold_right(
    fs: impl IntoIterator<Item = Formula>,
    join: fn(Formula, Formula) -> Formula,
) -> Option<Formula> {
    let mut items: Vec<Formula> = fs.into_iter().collect();
    let mut acc = items.pop()?;
    while let Some(f) = items.pop() {
        acc = join(f, acc);
    }
    Some(acc)
}

/// Minimal-parenthesis rendering; `parse(&render(f)) == Ok(f)`.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(out: &mut fmt::Formatter<'_>, f: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(out, "({f})")
            } else {
                write!(out, "{f}")
            }
        }
        fn binary(
            out: &mut fmt::Formatter<'_>,
            prec: u8,
            op: &str,
            a: &Formula,
            b: &Formula,
        ) -> fmt::Result {
            // right-associative: only the left operand needs parens at equal precedence
            child(out, a, a.precedence() <= prec)?;
            write!(out, " {op} ")?;
            child(out, b, b.precedence() < prec)
        }
        match self {
            Formula::Atom(name) => out.write_str(name),
            Formula::Bot => out.write_str("F"),
            Formula::Top => out.write_str("T"),
            Formula::Neg(a) => {
                out.write_str("~")?;
                child(out, a, a.precedence() < 4)
            }
            Formula::And(a, b) => binary(out, 3, "&", a, b),
            Formula::Or(a, b) => binary(out, 2, "|", a, b),
            Formula::Imp(a, b) => binary(out, 1, "->", a, b),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn a(name: &str) -> Formula {
        Formula::atom(name)
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&Formula::neg(a("p"))), "~p");
        let f = Formula::imp(
            Formula::neg(a("p")),
            Formula::or(Formula::neg(a("q")), Formula::neg(a("r"))),
        );
        assert_eq!(render(&f), "~p -> ~q | ~r");
        assert_eq!(render(&Formula::Bot), "F");
    }

    #[test]
    fn render_parenthesizes_left_nesting() {
        let f = Formula::or(Formula::or(a("a"), a("b")), a("c"));
        assert_eq!(render(&f), "(a | b) | c");
        let g = Formula::imp(Formula::imp(a("a"), a("b")), a("c"));
        assert_eq!(render(&g), "(a -> b) -> c");
        let h = Formula::neg(Formula::and(a("a"), a("b")));
        assert_eq!(render(&h), "~(a & b)");
        assert_eq!(render(&Formula::neg(Formula::neg(a("a")))), "~~a");
    }

    #[test]
    fn big_or_and_big_and() {
        assert_eq!(big_or(vec![a("a"), a("b"), a("c")]), p("a | (b | c)"));
        assert_eq!(render(&big_or(vec![a("a"), a("b"), a("c")])), "a | b | c");
        assert_eq!(big_or(vec![]), Formula::neg(Formula::Top));
        assert_eq!(big_and(vec![]), Formula::neg(Formula::Bot));
        assert_eq!(big_and(vec![a("x")]), a("x"));
    }

    #[test]
    fn atoms_in_first_occurrence_order() {
        assert_eq!(p("p & (q -> p)").atoms(), vec!["p", "q"]);
        assert!(p("F").atoms().is_empty());
        assert_eq!(p("~~(r | p)").atoms(), vec!["r", "p"]);
    }

    #[test]
    fn subformulas_children_first() {
        let subs = p("~p -> p").subformulas();
        assert_eq!(subs, vec![p("p"), p("~p"), p("~p -> p")]);
    }
}
