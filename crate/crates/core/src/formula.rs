//! Selection formulas: equality atoms over attribute names and domain
//! constants, closed under negation, conjunction, and disjunction.
//!
//! Formulas exist in two forms. [`FormulaSyntax`] is the purely syntactic
//! tree produced by the parser, where a bare token could still be either an
//! attribute reference or a constant. Resolving it against a scheme yields a
//! [`Formula`], where every atom is scoped and domain-checked.
//!
//! Disambiguation rule: a bare token naming a scheme attribute is an
//! attribute reference; anything else is a constant. A constant that happens
//! to spell an attribute name must be quoted with single quotes.

use std::fmt;

use crate::error::{Error, Result};
use crate::lex::{Lexer, Tok};
use crate::model::{Scheme, Symbol, Tuple};

/// A term as written: `Bare` tokens are attribute-or-constant, `Quoted`
/// tokens are always constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Bare(String),
    Quoted(String),
}

/// Unresolved formula tree, exactly as parsed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum FormulaSyntax {
    True,
    False,
    Eq(Term, Term),
    Not(Box<FormulaSyntax>),
    And(Box<FormulaSyntax>, Box<FormulaSyntax>),
    Or(Box<FormulaSyntax>, Box<FormulaSyntax>),
}

/// A scoped equality atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    /// attribute = constant, with the constant checked against the
    /// attribute's domain.
    AttrConst { attr: Symbol, value: Symbol },
    /// attribute = attribute, restricted to identical domains.
    AttrAttr { left: Symbol, right: Symbol },
}

/// A formula resolved against a scheme.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

enum Resolved {
    Attr(Symbol),
    Const(Symbol),
}

fn resolve_term(term: &Term, scheme: &Scheme) -> Resolved {
    match term {
        Term::Quoted(s) => Resolved::Const(Symbol::from(s.as_str())),
        Term::Bare(s) => {
            if scheme.has_attribute(s) {
                Resolved::Attr(Symbol::from(s.as_str()))
            } else {
                Resolved::Const(Symbol::from(s.as_str()))
            }
        }
    }
}

impl FormulaSyntax {
    /// Scopes the tree against a scheme, classifying terms and checking
    /// domains.
    pub fn resolve(&self, scheme: &Scheme) -> Result<Formula> {
        match self {
            FormulaSyntax::True => Ok(Formula::True),
            FormulaSyntax::False => Ok(Formula::False),
            FormulaSyntax::Not(inner) => Ok(Formula::Not(Box::new(inner.resolve(scheme)?))),
            FormulaSyntax::And(l, r) => Ok(Formula::And(
                Box::new(l.resolve(scheme)?),
                Box::new(r.resolve(scheme)?),
            )),
            FormulaSyntax::Or(l, r) => Ok(Formula::Or(
                Box::new(l.resolve(scheme)?),
                Box::new(r.resolve(scheme)?),
            )),
            FormulaSyntax::Eq(l, r) => {
                let atom = match (resolve_term(l, scheme), resolve_term(r, scheme)) {
                    (Resolved::Attr(a), Resolved::Attr(b)) => {
                        if scheme.domain(a.as_str()) != scheme.domain(b.as_str()) {
                            return Err(Error::Scope(format!(
                                "attributes '{a}' and '{b}' have different domains; \
                                 equality across unrelated domains is rejected"
                            )));
                        }
                        Atom::AttrAttr { left: a, right: b }
                    }
                    (Resolved::Attr(a), Resolved::Const(v))
                    | (Resolved::Const(v), Resolved::Attr(a)) => {
                        let dom = scheme.domain(a.as_str()).expect("attribute resolved");
                        if !dom.contains(v.as_str()) {
                            return Err(Error::Scope(format!(
                                "constant '{v}' is not in the domain of attribute '{a}'"
                            )));
                        }
                        Atom::AttrConst { attr: a, value: v }
                    }
                    (Resolved::Const(a), Resolved::Const(b)) => {
                        return Err(Error::Scope(format!(
                            "neither side of '{a}={b}' names an attribute of scheme '{}'",
                            scheme.name()
                        )));
                    }
                };
                Ok(Formula::Atom(atom))
            }
        }
    }
}

impl Formula {
    /// Standard two-valued evaluation on a single tuple.
    pub fn eval(&self, t: &Tuple) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Not(f) => !f.eval(t),
            Formula::And(l, r) => l.eval(t) && r.eval(t),
            Formula::Or(l, r) => l.eval(t) || r.eval(t),
            Formula::Atom(Atom::AttrConst { attr, value }) => {
                t.get(attr.as_str()).map(|v| v == value).unwrap_or(false)
            }
            Formula::Atom(Atom::AttrAttr { left, right }) => {
                match (t.get(left.as_str()), t.get(right.as_str())) {
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                }
            }
        }
    }

    /// Verifies the formula fits the given scheme (attributes present,
    /// constants in domain). Used by selection operators that receive an
    /// already-resolved formula.
    pub fn check_scheme(&self, scheme: &Scheme) -> Result<()> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Not(f) => f.check_scheme(scheme),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.check_scheme(scheme)?;
                r.check_scheme(scheme)
            }
            Formula::Atom(Atom::AttrConst { attr, value }) => match scheme.domain(attr.as_str()) {
                Some(dom) if dom.contains(value.as_str()) => Ok(()),
                Some(_) => Err(Error::Formula(format!(
                    "constant '{value}' is outside the domain of '{attr}' in scheme '{}'",
                    scheme.name()
                ))),
                None => Err(Error::Formula(format!(
                    "attribute '{attr}' is not in scheme '{}'",
                    scheme.name()
                ))),
            },
            Formula::Atom(Atom::AttrAttr { left, right }) => {
                match (scheme.domain(left.as_str()), scheme.domain(right.as_str())) {
                    (Some(a), Some(b)) if a == b => Ok(()),
                    (Some(_), Some(_)) => Err(Error::Formula(format!(
                        "attributes '{left}' and '{right}' have different domains in scheme '{}'",
                        scheme.name()
                    ))),
                    _ => Err(Error::Formula(format!(
                        "attribute pair '{left}', '{right}' is not in scheme '{}'",
                        scheme.name()
                    ))),
                }
            }
        }
    }
}

// Precedence levels for printing: Or < And < Not < atoms.
fn prec(f: &FormulaSyntax) -> u8 {
    match f {
        FormulaSyntax::Or(..) => 0,
        FormulaSyntax::And(..) => 1,
        FormulaSyntax::Not(..) => 2,
        _ => 3,
    }
}

fn fmt_term(t: &Term) -> String {
    match t {
        Term::Bare(s) => s.clone(),
        Term::Quoted(s) => format!("'{s}'"),
    }
}

fn fmt_prec(f: &FormulaSyntax, min: u8, out: &mut String) {
    let wrap = prec(f) < min;
    if wrap {
        out.push('(');
    }
    match f {
        FormulaSyntax::True => out.push_str("true"),
        FormulaSyntax::False => out.push_str("false"),
        FormulaSyntax::Eq(l, r) => {
            out.push_str(&fmt_term(l));
            out.push('=');
            out.push_str(&fmt_term(r));
        }
        FormulaSyntax::Not(inner) => {
            out.push('!');
            fmt_prec(inner, 2, out);
        }
        FormulaSyntax::And(l, r) => {
            fmt_prec(l, 1, out);
            out.push_str(" & ");
            fmt_prec(r, 2, out);
        }
        FormulaSyntax::Or(l, r) => {
            fmt_prec(l, 0, out);
            out.push_str(" | ");
            fmt_prec(r, 1, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for FormulaSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        fmt_prec(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Parses a formula in isolation (not embedded in a query).
pub fn parse_formula_syntax(text: &str) -> Result<FormulaSyntax> {
    let mut lx = Lexer::new(text)?;
    let f = parse_or(&mut lx)?;
    lx.expect_end()?;
    Ok(f)
}

/// Parses and resolves a formula against a scheme.
pub fn parse_formula(text: &str, scheme: &Scheme) -> Result<Formula> {
    parse_formula_syntax(text)?.resolve(scheme)
}

pub(crate) fn parse_or(lx: &mut Lexer) -> Result<FormulaSyntax> {
    let mut left = parse_and(lx)?;
    while matches!(lx.peek().map(|t| &t.tok), Some(Tok::Pipe)) {
        lx.next();
        let right = parse_and(lx)?;
        left = FormulaSyntax::Or(Box::new(left), Box::new(right));
    }
    Ok(left)
}

fn parse_and(lx: &mut Lexer) -> Result<FormulaSyntax> {
    let mut left = parse_unary(lx)?;
    while matches!(lx.peek().map(|t| &t.tok), Some(Tok::Amp)) {
        lx.next();
        let right = parse_unary(lx)?;
        left = FormulaSyntax::And(Box::new(left), Box::new(right));
    }
    Ok(left)
}

fn parse_unary(lx: &mut Lexer) -> Result<FormulaSyntax> {
    if matches!(lx.peek().map(|t| &t.tok), Some(Tok::Bang)) {
        lx.next();
        return Ok(FormulaSyntax::Not(Box::new(parse_unary(lx)?)));
    }
    parse_atom(lx)
}

fn parse_atom(lx: &mut Lexer) -> Result<FormulaSyntax> {
    match lx.peek().map(|t| t.tok.clone()) {
        Some(Tok::LParen) => {
            lx.next();
            let inner = parse_or(lx)?;
            lx.expect(&Tok::RParen, "')'")?;
            Ok(inner)
        }
        Some(Tok::Ident(name)) => {
            // `true`/`false` are formula keywords unless used as the left
            // side of an equality atom.
            let next_is_eq = matches!(lx.peek2().map(|t| &t.tok), Some(Tok::Eq));
            if !next_is_eq && (name == "true" || name == "false") {
                lx.next();
                return Ok(if name == "true" {
                    FormulaSyntax::True
                } else {
                    FormulaSyntax::False
                });
            }
            let left = parse_term(lx)?;
            lx.expect(&Tok::Eq, "'='")?;
            let right = parse_term(lx)?;
            Ok(FormulaSyntax::Eq(left, right))
        }
        Some(Tok::Quoted(_)) => {
            let left = parse_term(lx)?;
            lx.expect(&Tok::Eq, "'='")?;
            let right = parse_term(lx)?;
            Ok(FormulaSyntax::Eq(left, right))
        }
        _ => Err(lx.expected(&["'('", "'!'", "'true'", "'false'", "identifier", "quoted value"])),
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Term> {
    match lx.peek().map(|t| t.tok.clone()) {
        Some(Tok::Ident(s)) => {
            lx.next();
            Ok(Term::Bare(s))
        }
        Some(Tok::Quoted(s)) => {
            lx.next();
            Ok(Term::Quoted(s))
        }
        _ => Err(lx.expected(&["identifier", "quoted value"])),
    }
}
