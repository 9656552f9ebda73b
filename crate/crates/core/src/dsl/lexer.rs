use num_bigint::BigInt;
use num_rational::BigRational;

use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    Number(BigRational),
    Str(String),
    /// Single-character punctuation, with `−` folded to `-`.
    Sym(char),
    Arrow,
    Ge,
    Newline,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: &str = "+-*/^()[]{},:_?>=";

pub fn lex(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, col: c0 });
        if c == '\n' {
            push(&mut out, Tok::Newline);
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            col += i - start;
            push(&mut out, Tok::Name(chars[start..i].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut value = BigRational::from_integer(int_part.parse::<BigInt>().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fs..i].iter().collect();
                let den = BigInt::from(10u32).pow(frac.len() as u32);
                value += BigRational::new(frac.parse::<BigInt>().expect("digits"), den);
            }
            col += i - start;
            push(&mut out, Tok::Number(value));
            continue;
        }
        if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '"' {
                return Err(DslError::parse(l0, c0, "unterminated string"));
            }
            push(&mut out, Tok::Str(chars[start..j].iter().collect()));
            col += j + 1 - i;
            i = j + 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            push(&mut out, Tok::Arrow);
            i += 2;
            col += 2;
            continue;
        }
        if c == '>' && chars.get(i + 1) == Some(&'=') {
            push(&mut out, Tok::Ge);
            i += 2;
            col += 2;
            continue;
        }
        let c = if c == '−' { '-' } else { c };
        if PUNCT.contains(c) {
            push(&mut out, Tok::Sym(c));
            i += 1;
            col += 1;
            continue;
        }
        return Err(DslError::parse(l0, c0, &format!("unexpected character {c:?}")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
