//! The persistent text format and its canonical renderers.
//!
//! ```text
//! # comment to end of line
//! scheme NAME { ATTR: v1 v2 ...; ... }
//! relation NAME : SCHEME { + (v,...) | (v,...); - (v,...); ... }
//! ```
//!
//! One `+`/`-` statement holds one tuple set; disjuncts are separated by
//! `|`; tuple values are listed in the scheme's attribute order. Loaded
//! relations are validated against their scheme but stored verbatim —
//! inconsistencies stay visible until normalization is requested.
//!
//! The writer emits a canonical form: schemes then relations, each
//! alphabetical; domain values, tuple sets, and tuples in canonical order.
//! Writing is byte-stable, and a canonical file round-trips byte-identically.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{
    Database, DisjParaRelation, GenDisjParaRelation, ParaRelation, Scheme, SchemeRef, Tuple,
    TupleSet,
};

// ---------------------------------------------------------------------------
// lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum DbTok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Plus,
    Minus,
    Pipe,
}

impl DbTok {
    fn describe(&self) -> String {
        match self {
            DbTok::Ident(s) => format!("'{s}'"),
            DbTok::LBrace => "'{'".into(),
            DbTok::RBrace => "'}'".into(),
            DbTok::LParen => "'('".into(),
            DbTok::RParen => "')'".into(),
            DbTok::Colon => "':'".into(),
            DbTok::Semi => "';'".into(),
            DbTok::Comma => "','".into(),
            DbTok::Plus => "'+'".into(),
            DbTok::Minus => "'-'".into(),
            DbTok::Pipe => "'|'".into(),
        }
    }
}

struct DbToken {
    tok: DbTok,
    line: usize,
    col: usize,
}

struct DbLexer {
    tokens: Vec<DbToken>,
    pos: usize,
    end: (usize, usize),
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl DbLexer {
    fn new(text: &str) -> Result<DbLexer> {
        let mut tokens = Vec::new();
        let mut line = 1usize;
        let mut col = 1usize;
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (tl, tc) = (line, col);
            if c == '\n' {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            if c.is_whitespace() {
                chars.next();
                col += 1;
                continue;
            }
            if c == '#' {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            let simple = match c {
                '{' => Some(DbTok::LBrace),
                '}' => Some(DbTok::RBrace),
                '(' => Some(DbTok::LParen),
                ')' => Some(DbTok::RParen),
                ':' => Some(DbTok::Colon),
                ';' => Some(DbTok::Semi),
                ',' => Some(DbTok::Comma),
                '+' => Some(DbTok::Plus),
                '-' => Some(DbTok::Minus),
                '|' => Some(DbTok::Pipe),
                _ => None,
            };
            if let Some(tok) = simple {
                chars.next();
                col += 1;
                tokens.push(DbToken { tok, line: tl, col: tc });
                continue;
            }
            if is_word_char(c) {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if is_word_char(c) {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(DbToken { tok: DbTok::Ident(word), line: tl, col: tc });
                continue;
            }
            return Err(Error::Parse {
                line: tl,
                col: tc,
                msg: format!("unexpected character '{c}'"),
            });
        }
        Ok(DbLexer { tokens, pos: 0, end: (line, col) })
    }

    fn peek(&self) -> Option<&DbToken> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&DbToken> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expected(&self, what: &str) -> Error {
        let (line, col, found) = match self.peek() {
            Some(t) => (t.line, t.col, t.tok.describe()),
            None => (self.end.0, self.end.1, "end of input".into()),
        };
        Error::Parse { line, col, msg: format!("expected {what}; found {found}") }
    }

    fn expect(&mut self, want: &DbTok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.tok == *want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.expected(what)),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(DbToken { tok: DbTok::Ident(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.expected(what)),
        }
    }
}

// ---------------------------------------------------------------------------
// parsing

/// Parses the textual database format.
pub fn parse_db(text: &str) -> Result<Database> {
    let mut lx = DbLexer::new(text)?;
    let mut db = Database::new();
    while let Some(t) = lx.peek() {
        match &t.tok {
            DbTok::Ident(word) if word == "scheme" => {
                lx.next();
                let scheme = parse_scheme_decl(&mut lx)?;
                db.add_scheme(scheme)?;
            }
            DbTok::Ident(word) if word == "relation" => {
                lx.next();
                let (name, relation) = parse_relation_decl(&mut lx, &db)?;
                db.add_relation(name, relation)?;
            }
            _ => return Err(lx.expected("'scheme' or 'relation'")),
        }
    }
    Ok(db)
}

fn parse_scheme_decl(lx: &mut DbLexer) -> Result<SchemeRef> {
    let name = lx.ident("scheme name")?;
    lx.expect(&DbTok::LBrace, "'{'")?;
    let mut attrs: Vec<(String, Vec<String>)> = Vec::new();
    loop {
        match lx.peek() {
            Some(DbToken { tok: DbTok::RBrace, .. }) => {
                lx.next();
                break;
            }
            Some(DbToken { tok: DbTok::Ident(_), .. }) => {
                let attr = lx.ident("attribute name")?;
                lx.expect(&DbTok::Colon, "':'")?;
                let mut values = Vec::new();
                loop {
                    match lx.peek() {
                        Some(DbToken { tok: DbTok::Ident(_), .. }) => {
                            values.push(lx.ident("domain value")?);
                        }
                        Some(DbToken { tok: DbTok::Semi, .. }) => {
                            lx.next();
                            break;
                        }
                        _ => return Err(lx.expected("domain value or ';'")),
                    }
                }
                if values.is_empty() {
                    return Err(Error::Validation(format!(
                        "attribute '{attr}' of scheme '{name}' declares no values"
                    )));
                }
                attrs.push((attr, values));
            }
            _ => return Err(lx.expected("attribute name or '}'")),
        }
    }
    Scheme::new(name, attrs)
}

fn parse_relation_decl(lx: &mut DbLexer, db: &Database) -> Result<(String, GenDisjParaRelation)> {
    let name = lx.ident("relation name")?;
    lx.expect(&DbTok::Colon, "':'")?;
    let scheme_name = lx.ident("scheme name")?;
    let scheme = db
        .scheme(&scheme_name)
        .ok_or_else(|| {
            Error::Validation(format!(
                "relation '{name}' references undeclared scheme '{scheme_name}'"
            ))
        })?
        .clone();
    lx.expect(&DbTok::LBrace, "'{'")?;
    let (positive, negative) = parse_statements(lx, &scheme)?;
    let relation = GenDisjParaRelation::new(scheme, positive, negative)?;
    Ok((name, relation))
}

fn parse_statements(
    lx: &mut DbLexer,
    scheme: &SchemeRef,
) -> Result<(Vec<TupleSet>, Vec<TupleSet>)> {
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    loop {
        let is_positive = match lx.peek() {
            Some(DbToken { tok: DbTok::RBrace, .. }) => {
                lx.next();
                break;
            }
            Some(DbToken { tok: DbTok::Plus, .. }) => {
                lx.next();
                true
            }
            Some(DbToken { tok: DbTok::Minus, .. }) => {
                lx.next();
                false
            }
            _ => return Err(lx.expected("'+', '-' or '}'")),
        };
        let mut tuples: Vec<Tuple> = Vec::new();
        loop {
            match lx.peek() {
                Some(DbToken { tok: DbTok::LParen, .. }) => {
                    tuples.push(parse_tuple(lx, scheme)?);
                    match lx.peek() {
                        Some(DbToken { tok: DbTok::Pipe, .. }) => {
                            lx.next();
                        }
                        Some(DbToken { tok: DbTok::Semi, .. }) => {
                            lx.next();
                            break;
                        }
                        _ => return Err(lx.expected("'|' or ';'")),
                    }
                }
                Some(DbToken { tok: DbTok::Semi, .. }) => {
                    // `+ ;` — syntactically fine, semantically an empty
                    // disjunction
                    lx.next();
                    break;
                }
                _ => return Err(lx.expected("'(' or ';'")),
            }
        }
        let set = TupleSet::new(tuples)?;
        if is_positive {
            positive.push(set);
        } else {
            negative.push(set);
        }
    }
    Ok((positive, negative))
}

fn parse_tuple(lx: &mut DbLexer, scheme: &SchemeRef) -> Result<Tuple> {
    lx.expect(&DbTok::LParen, "'('")?;
    let mut values: Vec<String> = Vec::new();
    match lx.peek() {
        Some(DbToken { tok: DbTok::RParen, .. }) => {
            lx.next();
        }
        _ => loop {
            values.push(lx.ident("value")?);
            match lx.peek() {
                Some(DbToken { tok: DbTok::Comma, .. }) => {
                    lx.next();
                }
                Some(DbToken { tok: DbTok::RParen, .. }) => {
                    lx.next();
                    break;
                }
                _ => return Err(lx.expected("',' or ')'")),
            }
        },
    }
    Tuple::from_values(scheme, values)
}

/// Parses bare `+`/`-` statements against a known scheme, as emitted by the
/// text renderer.
pub fn parse_relation_body(text: &str, scheme: &SchemeRef) -> Result<GenDisjParaRelation> {
    let body = format!("{{{text}}}");
    let mut lx = DbLexer::new(&body)?;
    lx.expect(&DbTok::LBrace, "'{'")?;
    let (positive, negative) = parse_statements(&mut lx, scheme)?;
    GenDisjParaRelation::new(scheme.clone(), positive, negative)
}

/// Loads and validates a database file.
pub fn load_db(path: impl AsRef<Path>) -> Result<Database> {
    let text = std::fs::read_to_string(path)?;
    parse_db(&text)
}

// ---------------------------------------------------------------------------
// rendering

/// One tuple in scheme attribute order: `(v1,v2)`.
pub fn render_tuple(t: &Tuple, scheme: &Scheme) -> String {
    let values: Vec<&str> = t.values_in_order(scheme).map(|v| v.as_str()).collect();
    format!("({})", values.join(","))
}

fn render_tuple_set(ts: &TupleSet, scheme: &Scheme) -> String {
    ts.iter()
        .map(|t| render_tuple(t, scheme))
        .collect::<Vec<_>>()
        .join(" | ")
}

/// The `+`/`-` statements of a generalized relation, one per line, in
/// canonical order.
pub fn render_relation_body(r: &GenDisjParaRelation) -> String {
    let mut out = String::new();
    for ts in &r.positive {
        let _ = writeln!(out, "+ {};", render_tuple_set(ts, &r.scheme));
    }
    for ts in &r.negative {
        let _ = writeln!(out, "- {};", render_tuple_set(ts, &r.scheme));
    }
    out
}

/// Statements of a disjunctive paraconsistent relation; negatives are
/// definite tuples, one statement each.
pub fn render_dp_body(r: &DisjParaRelation) -> String {
    let mut out = String::new();
    for ts in &r.positive {
        let _ = writeln!(out, "+ {};", render_tuple_set(ts, &r.scheme));
    }
    for t in &r.negative {
        let _ = writeln!(out, "- {};", render_tuple(t, &r.scheme));
    }
    out
}

/// Statements of a fully definite paraconsistent relation.
pub fn render_para_body(r: &ParaRelation) -> String {
    let mut out = String::new();
    for t in &r.positive {
        let _ = writeln!(out, "+ {};", render_tuple(t, &r.scheme));
    }
    for t in &r.negative {
        let _ = writeln!(out, "- {};", render_tuple(t, &r.scheme));
    }
    out
}

/// Canonical text of the whole database.
pub fn render_db(db: &Database) -> String {
    let mut out = String::new();
    let mut first = true;
    for (name, scheme) in db.schemes() {
        if !first {
            out.push('\n');
        }
        first = false;
        let _ = writeln!(out, "scheme {name} {{");
        for attr in scheme.attributes() {
            let values: Vec<&str> = attr.domain.iter().map(|v| v.as_str()).collect();
            let _ = writeln!(out, "  {}: {};", attr.name, values.join(" "));
        }
        let _ = writeln!(out, "}}");
    }
    for (name, relation) in db.relations() {
        if !first {
            out.push('\n');
        }
        first = false;
        let _ = writeln!(out, "relation {name} : {} {{", relation.scheme.name());
        for line in render_relation_body(relation).lines() {
            let _ = writeln!(out, "  {line}");
        }
        let _ = writeln!(out, "}}");
    }
    out
}

/// Writes the canonical text form. Byte-stable across runs.
pub fn write_db(db: &Database, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_db(db))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn json_string(s: &str) -> String {
    format!("\"{}\"", json_escape(s))
}

fn json_scheme(scheme: &Scheme) -> String {
    let attrs: Vec<String> = scheme
        .attributes()
        .iter()
        .map(|a| {
            let domain: Vec<String> = a.domain.iter().map(|v| json_string(v.as_str())).collect();
            format!(
                "{{\"name\":{},\"domain\":[{}]}}",
                json_string(a.name.as_str()),
                domain.join(",")
            )
        })
        .collect();
    format!(
        "{{\"name\":{},\"attributes\":[{}]}}",
        json_string(scheme.name().as_str()),
        attrs.join(",")
    )
}

fn json_tuple(t: &Tuple, scheme: &Scheme) -> String {
    let fields: Vec<String> = scheme
        .attributes()
        .iter()
        .map(|a| {
            let v = t.get(a.name.as_str()).expect("tuple is total on scheme");
            format!("{}:{}", json_string(a.name.as_str()), json_string(v.as_str()))
        })
        .collect();
    format!("{{{}}}", fields.join(","))
}

fn json_component(side: &BTreeSet<TupleSet>, scheme: &Scheme) -> String {
    let sets: Vec<String> = side
        .iter()
        .map(|ts| {
            let tuples: Vec<String> = ts.iter().map(|t| json_tuple(t, scheme)).collect();
            format!("[{}]", tuples.join(","))
        })
        .collect();
    format!("[{}]", sets.join(","))
}

/// Canonical single-line JSON rendering of a generalized relation: key order
/// scheme, positive, negative; arrays in canonical order; tuple keys in
/// scheme attribute order.
pub fn render_relation_json(r: &GenDisjParaRelation) -> String {
    format!(
        "{{\"scheme\":{},\"positive\":{},\"negative\":{}}}",
        json_scheme(&r.scheme),
        json_component(&r.positive, &r.scheme),
        json_component(&r.negative, &r.scheme)
    )
}
