use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Integer or decimal literal, kept as text.
    Num(String),
    Str(String),
    Punct(char),
    Eof,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits DSL text into tokens; `#` starts a comment.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if ident_start(c) {
            let s = i;
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            col += i - s;
            out.push(Token { tok: Tok::Ident(chars[s..i].iter().collect()), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            col += i - s;
            let lit: String = chars[s..i].iter().collect();
            if lit.matches('.').count() > 1 {
                return Err(Error::Parse { line: l0, col: c0, msg: format!("malformed number {lit}") });
            }
            out.push(Token { tok: Tok::Num(lit), line: l0, col: c0 });
            continue;
        }
        if c == '"' {
            let s = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(Error::Parse { line: l0, col: c0, msg: "unterminated string".into() });
                }
                i += 1;
            }
            if i == chars.len() {
                return Err(Error::Parse { line: l0, col: c0, msg: "unterminated string".into() });
            }
            let lit: String = chars[s..i].iter().collect();
            i += 1;
            col += lit.chars().count() + 2;
            out.push(Token { tok: Tok::Str(lit), line: l0, col: c0 });
            continue;
        }
        if "+-*/^()[],;:=".contains(c) {
            out.push(Token { tok: Tok::Punct(c), line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Parse { line: l0, col: c0, msg: format!("unexpected character '{c}'") });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let t = tokenize("indep t,x; # comment\n  u[x] = 0.5").unwrap();
        assert_eq!(t[0].tok, Tok::Ident("indep".into()));
        let u = t.iter().find(|k| k.tok == Tok::Ident("u".into())).unwrap();
        assert_eq!((u.line, u.col), (2, 3));
        assert!(t.iter().any(|k| k.tok == Tok::Num("0.5".into())));
    }

    #[test]
    fn reports_bad_characters() {
        match tokenize("u = $") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (1, 5)),
            other => panic!("{other:?}"),
        }
    }
}
