//! Tokenizer for the analysis language.

use std::fmt;

use thiserror::Error;

/// Token kinds. Numbers keep their source spelling so the parser can
/// compute the exact decimal-to-binary conversion error.
#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Number(String),
    KwIf,
    KwElse,
    KwWhile,
    KwAssume,
    KwSqrt,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Ge,
    Le,
    Gt,
    Lt,
    EqEq,
    Ne,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Number(s) => write!(f, "number `{s}`"),
            TokenKind::KwIf => f.write_str("`if`"),
            TokenKind::KwElse => f.write_str("`else`"),
            TokenKind::KwWhile => f.write_str("`while`"),
            TokenKind::KwAssume => f.write_str("`assume`"),
            TokenKind::KwSqrt => f.write_str("`sqrt`"),
            TokenKind::Assign => f.write_str("`=`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Slash => f.write_str("`/`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::Ge => f.write_str("`>=`"),
            TokenKind::Le => f.write_str("`<=`"),
            TokenKind::Gt => f.write_str("`>`"),
            TokenKind::Lt => f.write_str("`<`"),
            TokenKind::EqEq => f.write_str("`==`"),
            TokenKind::Ne => f.write_str("`!=`"),
        }
    }
}

/// A token with its 1-based source position.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LexError {
    #[error("{line}:{col}: illegal character `{ch}`")]
    IllegalChar { ch: char, line: usize, col: usize },
    #[error("{line}:{col}: malformed number `{text}`")]
    MalformedNumber {
        text: String,
        line: usize,
        col: usize,
    },
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

/// Splits `text` into tokens; comments run from `#` to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut s = Scanner {
        src: text.as_bytes(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = s.peek() {
        let (line, col) = (s.line, s.col);
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                s.bump();
            }
            b'#' => {
                while s.peek().is_some_and(|c| c != b'\n') {
                    s.bump();
                }
            }
            b'0'..=b'9' => {
                let text = scan_number(&mut s);
                let kind = TokenKind::Number(text.clone());
                if text.ends_with(['e', 'E', '+', '-']) {
                    return Err(LexError::MalformedNumber { text, line, col });
                }
                out.push(Token { kind, line, col });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut word = String::new();
                while s
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    word.push(s.bump().unwrap() as char);
                }
                let kind = match word.as_str() {
                    "if" => TokenKind::KwIf,
                    "else" => TokenKind::KwElse,
                    "while" => TokenKind::KwWhile,
                    "assume" => TokenKind::KwAssume,
                    "sqrt" => TokenKind::KwSqrt,
                    _ => TokenKind::Ident(word),
                };
                out.push(Token { kind, line, col });
            }
            _ => {
                let kind = match c {
                    b'=' if s.peek2() == Some(b'=') => {
                        s.bump();
                        TokenKind::EqEq
                    }
                    b'=' => TokenKind::Assign,
                    b'>' if s.peek2() == Some(b'=') => {
                        s.bump();
                        TokenKind::Ge
                    }
                    b'>' => TokenKind::Gt,
                    b'<' if s.peek2() == Some(b'=') => {
                        s.bump();
                        TokenKind::Le
                    }
                    b'<' => TokenKind::Lt,
                    b'!' if s.peek2() == Some(b'=') => {
                        s.bump();
                        TokenKind::Ne
                    }
                    b'+' => TokenKind::Plus,
                    b'-' => TokenKind::Minus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'(' => TokenKind::LParen,
                    b')' => TokenKind::RParen,
                    b'[' => TokenKind::LBracket,
                    b']' => TokenKind::RBracket,
                    b'{' => TokenKind::LBrace,
                    b'}' => TokenKind::RBrace,
                    b',' => TokenKind::Comma,
                    b';' => TokenKind::Semi,
                    other => {
                        return Err(LexError::IllegalChar {
                            ch: other as char,
                            line,
                            col,
                        })
                    }
                };
                s.bump();
                out.push(Token { kind, line, col });
            }
        }
    }
    Ok(out)
}

/// Scans `digits ["." digits*] [("e"|"E") ["+"|"-"] digits]`; a trailing
/// bare dot (`1.`) is allowed.
fn scan_number(s: &mut Scanner<'_>) -> String {
    let mut text = String::new();
    while s.peek().is_some_and(|c| c.is_ascii_digit()) {
        text.push(s.bump().unwrap() as char);
    }
    if s.peek() == Some(b'.') {
        text.push(s.bump().unwrap() as char);
        while s.peek().is_some_and(|c| c.is_ascii_digit()) {
            text.push(s.bump().unwrap() as char);
        }
    }
    if s.peek().is_some_and(|c| c == b'e' || c == b'E')
        && (s.peek2().is_some_and(|c| c.is_ascii_digit())
            || (matches!(s.peek2(), Some(b'+') | Some(b'-'))
                && s.src.get(s.pos + 2).is_some_and(|c| c.is_ascii_digit())))
    {
        text.push(s.bump().unwrap() as char);
        if matches!(s.peek(), Some(b'+') | Some(b'-')) {
            text.push(s.bump().unwrap() as char);
        }
        while s.peek().is_some_and(|c| c.is_ascii_digit()) {
            text.push(s.bump().unwrap() as char);
        }
    }
    text
}
