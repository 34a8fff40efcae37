//! The textual algebra expression language.
//!
//! Grammar (whitespace-insensitive, identifiers case-sensitive):
//!
//! ```text
//! expr := NAME
//!       | select[formula](expr)
//!       | project[A,B,...](expr)
//!       | union(expr,expr)
//!       | intersect(expr,expr)
//!       | join(expr,expr)
//!       | not(expr)
//! ```
//!
//! The operator names are reserved words and cannot name relations.
//! `not(expr)` is the component-swapping complement of the stored facts: it
//! negates explicit data only and performs no closed-world inference.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{parse_or, FormulaSyntax};
use crate::gdp::{
    g_complement, g_intersect, g_join, g_norm, g_project, g_reduce, g_select, g_union,
};
use crate::lex::{Lexer, Tok};
use crate::model::{Database, GenDisjParaRelation, SchemeRef, Symbol};

use std::collections::BTreeSet;

const KEYWORDS: [&str; 6] = ["select", "project", "union", "intersect", "join", "not"];

/// Abstract syntax of a query. Selection formulas stay syntactic until the
/// operand scheme is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryExpr {
    RelRef(String),
    Select(FormulaSyntax, Box<QueryExpr>),
    Project(Vec<String>, Box<QueryExpr>),
    Union(Box<QueryExpr>, Box<QueryExpr>),
    Intersect(Box<QueryExpr>, Box<QueryExpr>),
    Join(Box<QueryExpr>, Box<QueryExpr>),
    Complement(Box<QueryExpr>),
}

impl fmt::Display for QueryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryExpr::RelRef(name) => f.write_str(name),
            QueryExpr::Select(formula, e) => write!(f, "select[{formula}]({e})"),
            QueryExpr::Project(attrs, e) => write!(f, "project[{}]({e})", attrs.join(",")),
            QueryExpr::Union(a, b) => write!(f, "union({a},{b})"),
            QueryExpr::Intersect(a, b) => write!(f, "intersect({a},{b})"),
            QueryExpr::Join(a, b) => write!(f, "join({a},{b})"),
            QueryExpr::Complement(e) => write!(f, "not({e})"),
        }
    }
}

/// Parses a query expression.
pub fn parse_query(text: &str) -> Result<QueryExpr> {
    let mut lx = Lexer::new(text)?;
    let e = parse_expr(&mut lx)?;
    lx.expect_end()?;
    Ok(e)
}

fn parse_expr(lx: &mut Lexer) -> Result<QueryExpr> {
    let name = match lx.peek().map(|t| t.tok.clone()) {
        Some(Tok::Ident(name)) => {
            lx.next();
            name
        }
        _ => {
            return Err(lx.expected(&["relation name", "'select'", "'project'", "'union'", "'intersect'", "'join'", "'not'"]));
        }
    };
    match name.as_str() {
        "select" => {
            lx.expect(&Tok::LBracket, "'['")?;
            let formula = parse_or(lx)?;
            lx.expect(&Tok::RBracket, "']'")?;
            lx.expect(&Tok::LParen, "'('")?;
            let e = parse_expr(lx)?;
            lx.expect(&Tok::RParen, "')'")?;
            Ok(QueryExpr::Select(formula, Box::new(e)))
        }
        "project" => {
            lx.expect(&Tok::LBracket, "'['")?;
            let mut attrs = vec![parse_attr_name(lx)?];
            while matches!(lx.peek().map(|t| &t.tok), Some(Tok::Comma)) {
                lx.next();
                attrs.push(parse_attr_name(lx)?);
            }
            lx.expect(&Tok::RBracket, "']'")?;
            lx.expect(&Tok::LParen, "'('")?;
            let e = parse_expr(lx)?;
            lx.expect(&Tok::RParen, "')'")?;
            Ok(QueryExpr::Project(attrs, Box::new(e)))
        }
        "union" | "intersect" | "join" => {
            lx.expect(&Tok::LParen, "'('")?;
            let a = parse_expr(lx)?;
            lx.expect(&Tok::Comma, "','")?;
            let b = parse_expr(lx)?;
            lx.expect(&Tok::RParen, "')'")?;
            Ok(match name.as_str() {
                "union" => QueryExpr::Union(Box::new(a), Box::new(b)),
                "intersect" => QueryExpr::Intersect(Box::new(a), Box::new(b)),
                _ => QueryExpr::Join(Box::new(a), Box::new(b)),
            })
        }
        "not" => {
            lx.expect(&Tok::LParen, "'('")?;
            let e = parse_expr(lx)?;
            lx.expect(&Tok::RParen, "')'")?;
            Ok(QueryExpr::Complement(Box::new(e)))
        }
        _ => Ok(QueryExpr::RelRef(name)),
    }
}

fn parse_attr_name(lx: &mut Lexer) -> Result<String> {
    match lx.peek().map(|t| t.tok.clone()) {
        Some(Tok::Ident(s)) => {
            lx.next();
            Ok(s)
        }
        _ => Err(lx.expected(&["attribute name"])),
    }
}

fn project_target(base: &SchemeRef, attrs: &[String]) -> Result<SchemeRef> {
    let mut keep: BTreeSet<Symbol> = BTreeSet::new();
    for a in attrs {
        if !base.has_attribute(a) {
            return Err(Error::Scope(format!(
                "attribute '{a}' is not in scheme '{}'",
                base.name()
            )));
        }
        keep.insert(Symbol::from(a.as_str()));
    }
    base.project(&keep, format!("{}_proj", base.name()))
}

/// Scheme of the expression's value, without evaluating it. Also scopes
/// selection formulas and projection lists.
pub fn infer_scheme(expr: &QueryExpr, db: &Database) -> Result<SchemeRef> {
    match expr {
        QueryExpr::RelRef(name) => match db.relation(name) {
            Some(rel) => Ok(rel.scheme.clone()),
            None => Err(Error::UnknownRelation(name.clone())),
        },
        QueryExpr::Select(formula, e) => {
            let scheme = infer_scheme(e, db)?;
            formula.resolve(&scheme)?;
            Ok(scheme)
        }
        QueryExpr::Project(attrs, e) => project_target(&infer_scheme(e, db)?, attrs),
        QueryExpr::Union(a, b) | QueryExpr::Intersect(a, b) => {
            let sa = infer_scheme(a, db)?;
            let sb = infer_scheme(b, db)?;
            if !sa.same_attributes(&sb) {
                return Err(Error::SchemeMismatch(format!(
                    "operands on schemes '{}' and '{}' do not share attributes",
                    sa.name(),
                    sb.name()
                )));
            }
            Ok(sa)
        }
        QueryExpr::Join(a, b) => {
            let sa = infer_scheme(a, db)?;
            let sb = infer_scheme(b, db)?;
            sa.join(&sb, format!("{}_{}", sa.name(), sb.name()))
        }
        QueryExpr::Complement(e) => infer_scheme(e, db),
    }
}

/// Bottom-up evaluation against a database. Relation references yield the
/// stored relation normalized and reduced; all operators work on that form.
pub fn eval_query(expr: &QueryExpr, db: &Database, cap: usize) -> Result<GenDisjParaRelation> {
    match expr {
        QueryExpr::RelRef(name) => match db.relation(name) {
            Some(rel) => Ok(g_reduce(&g_norm(rel))),
            None => Err(Error::UnknownRelation(name.clone())),
        },
        QueryExpr::Select(formula, e) => {
            let operand = eval_query(e, db, cap)?;
            let f = formula.resolve(&operand.scheme)?;
            g_select(&operand, &f, cap)
        }
        QueryExpr::Project(attrs, e) => {
            let operand = eval_query(e, db, cap)?;
            let target = project_target(&operand.scheme, attrs)?;
            g_project(&operand, &target, cap)
        }
        QueryExpr::Union(a, b) => {
            let left = eval_query(a, db, cap)?;
            let right = eval_query(b, db, cap)?;
            g_union(&left, &right, cap)
        }
        QueryExpr::Intersect(a, b) => {
            let left = eval_query(a, db, cap)?;
            let right = eval_query(b, db, cap)?;
            g_intersect(&left, &right, cap)
        }
        QueryExpr::Join(a, b) => {
            let left = eval_query(a, db, cap)?;
            let right = eval_query(b, db, cap)?;
            g_join(&left, &right, cap)
        }
        QueryExpr::Complement(e) => Ok(g_complement(&eval_query(e, db, cap)?)),
    }
}

/// True when the name cannot be used as a relation reference.
pub fn is_reserved_word(name: &str) -> bool {
    KEYWORDS.contains(&name)
}
