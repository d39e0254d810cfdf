use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{DslError, DslErrorKind};
use crate::exact::Rat;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(Rat),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(r) => format!("number {r}"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

const SYMBOLS: &[&str] = &[
    ":=", "+", "-", "*", "/", "^", "(", ")", "{", "}", ",", ";", "=", ":", "@", "±", "∓",
];

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, m: String| DslError { line, col, kind: DslErrorKind::Lex(m) };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: start_line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let mut int = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                int.push(chars[i]);
                i += 1;
                col += 1;
            }
            let mut value = Rat::from_integer(int.parse::<BigInt>().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                col += 1;
                let mut scale = Rat::one();
                let tenth = Rat::new(BigInt::one(), BigInt::from(10));
                let mut frac = Rat::zero();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    scale *= &tenth;
                    frac += &scale * Rat::from_integer(BigInt::from(chars[i].to_digit(10).unwrap()));
                    i += 1;
                    col += 1;
                }
                value += frac;
            }
            out.push(Token { tok: Tok::Number(value), line: start_line, col: start_col });
            continue;
        }
        let c = if c == '−' { '-' } else { c };
        let rest: String = std::iter::once(c).chain(chars[i + 1..].iter().take(1).copied()).collect();
        let sym = SYMBOLS.iter().find(|s| rest.starts_with(**s));
        match sym {
            Some(s) => {
                let n = s.chars().count();
                i += n;
                col += n;
                out.push(Token { tok: Tok::Sym(s), line: start_line, col: start_col });
            }
            None => return Err(err(start_line, start_col, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
