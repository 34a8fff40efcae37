//! Shared token stream for the query and formula grammars. Whitespace is
//! insignificant; identifiers are case-sensitive; positions are 1-based
//! line:column of the token start.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Quoted(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Amp,
    Pipe,
    Bang,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Quoted(s) => format!("quoted value '{s}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Bang => "'!'".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) struct Lexer {
    tokens: Vec<Token>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Lexer {
    pub(crate) fn new(text: &str) -> Result<Lexer> {
        let mut tokens = Vec::new();
        let mut line = 1usize;
        let mut col = 1usize;
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (tl, tc) = (line, col);
            let advance = |chars: &mut std::iter::Peekable<std::str::Chars>,
                           line: &mut usize,
                           col: &mut usize| {
                let c = chars.next().unwrap();
                if c == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                c
            };
            if c.is_whitespace() {
                advance(&mut chars, &mut line, &mut col);
                continue;
            }
            let tok = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Eq),
                '&' => Some(Tok::Amp),
                '|' => Some(Tok::Pipe),
                '!' => Some(Tok::Bang),
                _ => None,
            };
            if let Some(tok) = tok {
                advance(&mut chars, &mut line, &mut col);
                tokens.push(Token { tok, line: tl, col: tc });
                continue;
            }
            if c == '\'' {
                advance(&mut chars, &mut line, &mut col);
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        Some('\'') => {
                            advance(&mut chars, &mut line, &mut col);
                            break;
                        }
                        Some('\n') | None => {
                            return Err(Error::Parse {
                                line: tl,
                                col: tc,
                                msg: "unterminated quoted value".into(),
                            });
                        }
                        Some(_) => s.push(advance(&mut chars, &mut line, &mut col)),
                    }
                }
                if s.is_empty() {
                    return Err(Error::Parse {
                        line: tl,
                        col: tc,
                        msg: "empty quoted value".into(),
                    });
                }
                tokens.push(Token { tok: Tok::Quoted(s), line: tl, col: tc });
                continue;
            }
            if is_ident_char(c) {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if is_ident_char(c) {
                        s.push(advance(&mut chars, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                tokens.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
                continue;
            }
            return Err(Error::Parse {
                line: tl,
                col: tc,
                msg: format!("unexpected character '{c}'"),
            });
        }
        Ok(Lexer { tokens, pos: 0, end_line: line, end_col: col })
    }

    pub(crate) fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    pub(crate) fn peek2(&self) -> Option<&Token> {
        self.tokens.get(self.pos + 1)
    }

    pub(crate) fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => (self.end_line, self.end_col),
        }
    }

    /// Error describing what was expected at the current position.
    pub(crate) fn expected(&self, expected: &[&str]) -> Error {
        let (line, col) = self.here();
        let found = match self.peek() {
            Some(t) => t.tok.describe(),
            None => "end of input".into(),
        };
        Error::Parse {
            line,
            col,
            msg: format!("expected {}; found {}", expected.join(" or "), found),
        }
    }

    pub(crate) fn expect(&mut self, want: &Tok, describe: &str) -> Result<Token> {
        match self.peek() {
            Some(t) if t.tok == *want => Ok(self.next().unwrap()),
            _ => Err(self.expected(&[describe])),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.expected(&["end of input"]))
        }
    }
}
