//! Parser for the textual syntax of standalone quadratic forms.
//!
//! ```text
//! form   := [sign] term { ("+" | "-") term }
//! term   := factor { "*" factor }
//! factor := number | "e"<digits> | "ep" | "em" | "epm"
//! ```
//!
//! A term's numeric factors multiply into its coefficient; its symbol
//! factors determine the monomial: none (constant), one or two plain
//! symbols (linear / quadratic), or exactly one error slot. Example:
//!
//! ```text
//! -0.5 + 2*e1 - 0.25*e1*e2 + 0.1*ep + 0.2*em + 0.05*epm
//! ```
//!
//! Negative slot weights are accepted and routed soundly: weight `w < 0` on
//! `ep` becomes `−w` on `em` (the monomial `w·ε₊` ranges over `[w, 0]`,
//! exactly the range of `−w·ε₋`), and symmetrically; a negative `epm`
//! weight keeps its magnitude.

use thiserror::Error;

use crate::quad::{FormError, QuadForm};
use crate::registry::NoiseSym;

/// Errors from the textual form parser.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormParseError {
    #[error("empty form")]
    Empty,
    #[error("unexpected character {0:?} at byte {1}")]
    Unexpected(char, usize),
    #[error("malformed number {0:?} at byte {1}")]
    BadNumber(String, usize),
    #[error("unknown symbol {0:?} at byte {1} (expected e<k>, ep, em, or epm)")]
    BadSymbol(String, usize),
    #[error("term at byte {0} multiplies more than two plain symbols")]
    DegreeTooHigh(usize),
    #[error("term at byte {0} mixes an error slot with other symbols")]
    SlotProduct(usize),
    #[error("term at byte {0} is missing a factor")]
    MissingFactor(usize),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Number(f64),
    Plain(u64),
    SlotPm,
    SlotPos,
    SlotNeg,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // Scientific exponent: only when followed by digits or a
                // signed digit sequence, so `2e1` parses as the number 20
                // but `2*e1` keeps the symbol separate.
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let s = &text[start..i];
                let v: f64 = s
                    .parse()
                    .map_err(|_| FormParseError::BadNumber(s.to_string(), start))?;
                toks.push((Tok::Number(v), start));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                let s = &text[start..i];
                let tok = match s {
                    "ep" => Tok::SlotPos,
                    "em" => Tok::SlotNeg,
                    "epm" => Tok::SlotPm,
                    _ => {
                        let id = s
                            .strip_prefix('e')
                            .and_then(|d| d.parse::<u64>().ok())
                            .ok_or_else(|| FormParseError::BadSymbol(s.to_string(), start))?;
                        Tok::Plain(id)
                    }
                };
                toks.push((tok, start));
            }
            other => return Err(FormParseError::Unexpected(other, i)),
        }
    }
    Ok(toks)
}

/// One parsed additive term.
struct Term {
    coeff: f64,
    plain: Vec<u64>,
    slot: Option<Tok>,
    pos: usize,
}

/// Parses the textual syntax into a [`QuadForm`].
pub fn parse_form(text: &str) -> Result<QuadForm, FormParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(FormParseError::Empty);
    }

    let mut terms: Vec<Term> = Vec::new();
    let mut k = 0;
    loop {
        // Optional sign(s) before the term.
        let mut sign = 1.0;
        let term_pos = toks.get(k).map(|t| t.1).unwrap_or(text.len());
        while let Some((tok, _)) = toks.get(k) {
            match tok {
                Tok::Plus => k += 1,
                Tok::Minus => {
                    sign = -sign;
                    k += 1;
                }
                _ => break,
            }
        }
        let mut term = Term {
            coeff: sign,
            plain: Vec::new(),
            slot: None,
            pos: term_pos,
        };
        let mut factors = 0;
        loop {
            match toks.get(k) {
                Some((Tok::Number(v), _)) => term.coeff *= v,
                Some((Tok::Plain(id), p)) => {
                    term.plain.push(*id);
                    if term.plain.len() > 2 {
                        return Err(FormParseError::DegreeTooHigh(*p));
                    }
                }
                Some((t @ (Tok::SlotPm | Tok::SlotPos | Tok::SlotNeg), p)) => {
                    if term.slot.is_some() {
                        return Err(FormParseError::SlotProduct(*p));
                    }
                    term.slot = Some(match t {
                        Tok::SlotPm => Tok::SlotPm,
                        Tok::SlotPos => Tok::SlotPos,
                        _ => Tok::SlotNeg,
                    });
                }
                Some((tok, p)) => {
                    let c = match tok {
                        Tok::Plus => '+',
                        Tok::Minus => '-',
                        Tok::Star => '*',
                        _ => '?',
                    };
                    return Err(FormParseError::Unexpected(c, *p));
                }
                None => return Err(FormParseError::MissingFactor(term.pos)),
            }
            factors += 1;
            k += 1;
            match toks.get(k) {
                Some((Tok::Star, _)) => k += 1,
                _ => break,
            }
        }
        if factors == 0 {
            return Err(FormParseError::MissingFactor(term.pos));
        }
        if term.slot.is_some() && !term.plain.is_empty() {
            return Err(FormParseError::SlotProduct(term.pos));
        }
        terms.push(term);
        match toks.get(k) {
            None => break,
            Some((Tok::Plus | Tok::Minus, _)) => {}
            Some((tok, p)) => {
                let c = match tok {
                    Tok::Star => '*',
                    Tok::Number(_) => '#',
                    _ => '?',
                };
                return Err(FormParseError::Unexpected(c, *p));
            }
        }
    }

    let mut center = 0.0;
    let mut linear: Vec<(NoiseSym, f64)> = Vec::new();
    let mut quad: Vec<((NoiseSym, NoiseSym), f64)> = Vec::new();
    let (mut w_pm, mut w_pos, mut w_neg) = (0.0f64, 0.0f64, 0.0f64);
    for t in terms {
        match (&t.slot, t.plain.as_slice()) {
            (Some(Tok::SlotPm), _) => w_pm += t.coeff,
            (Some(Tok::SlotPos), _) => w_pos += t.coeff,
            (Some(Tok::SlotNeg), _) => w_neg += t.coeff,
            (None, []) => center += t.coeff,
            (None, [a]) => linear.push((NoiseSym::from_id(*a), t.coeff)),
            (None, [a, b]) => {
                quad.push(((NoiseSym::from_id(*a), NoiseSym::from_id(*b)), t.coeff));
            }
            _ => unreachable!("slot/plain mix rejected above"),
        }
    }

    // Route negative slot weights onto the mirror slot.
    let sym_err = w_pm.abs();
    let (mut pos, mut neg) = (0.0f64, 0.0f64);
    if w_pos >= 0.0 {
        pos += w_pos;
    } else {
        neg += -w_pos;
    }
    if w_neg >= 0.0 {
        neg += w_neg;
    } else {
        pos += -w_neg;
    }

    Ok(QuadForm::new(center, linear, quad, sym_err, pos, neg)?)
}
