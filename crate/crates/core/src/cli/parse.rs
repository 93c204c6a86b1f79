//! Divisor input: `2 - 1/2 - 2/3@Q + 1/5@Q`, or a JSON object
//! `{"A": "3/2", "B": "-1/3"}`.
//!
//! Each term is `[sign] INT ['/' INT] ['@' LABEL]`; every term after the
//! first needs a sign. Unlabelled terms are named `P<k>` after their
//! position, and repeated labels are summed.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::divisor::QDivisor;
use crate::error::{Error, Result};
use crate::number::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Slash,
    Plus,
    Minus,
    Label(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => {
                out.push((start, Tok::Plus));
                i += 1
            }
            '-' => {
                out.push((start, Tok::Minus));
                i += 1
            }
            '/' => {
                out.push((start, Tok::Slash));
                i += 1
            }
            '@' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                let from = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                if from == i {
                    return Err(Error::parse(from, "expected a label after '@'"));
                }
                out.push((start, Tok::Label(text[from..i].to_string())));
            }
            _ if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
            }
            _ => {
                let ch = text[start..].chars().next().expect("in bounds");
                return Err(Error::parse(start, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}

struct Term {
    pos: usize,
    coeff: Rational,
    label: Option<String>,
}

fn parse_terms(text: &str) -> Result<Vec<Term>> {
    let toks = tokenize(text)?;
    let end = text.len();
    let mut it = toks.into_iter().peekable();
    let mut terms = Vec::new();
    loop {
        let Some((pos, first)) = it.next() else {
            if terms.is_empty() {
                return Err(Error::parse(end, "empty divisor"));
            }
            return Err(Error::parse(end, "expected a term after the sign"));
        };
        let (negative, num_tok) = match first {
            Tok::Plus | Tok::Minus => {
                let neg = first == Tok::Minus;
                match it.next() {
                    Some((p, Tok::Int(n))) => (neg, (p, n)),
                    Some((p, _)) => return Err(Error::parse(p, "expected an integer")),
                    None => return Err(Error::parse(end, "expected an integer")),
                }
            }
            Tok::Int(n) if terms.is_empty() => (false, (pos, n)),
            Tok::Int(_) => return Err(Error::parse(pos, "expected '+' or '-' between terms")),
            _ => return Err(Error::parse(pos, "expected a term")),
        };
        let (num_pos, num) = num_tok;
        let mut den = BigInt::from(1);
        if matches!(it.peek(), Some((_, Tok::Slash))) {
            let (slash, _) = it.next().expect("peeked");
            match it.next() {
                Some((p, Tok::Int(d))) => {
                    if d.is_zero() {
                        return Err(Error::parse(p, "zero denominator"));
                    }
                    den = d;
                }
                Some((p, _)) => return Err(Error::parse(p, "expected a denominator")),
                None => return Err(Error::parse(slash + 1, "expected a denominator")),
            }
        }
        let mut label = None;
        if let Some((_, Tok::Label(_))) = it.peek() {
            if let Some((_, Tok::Label(l))) = it.next() {
                label = Some(l);
            }
        }
        let coeff = Rational::new(if negative { -num } else { num }, den);
        terms.push(Term {
            pos: if negative { pos } else { num_pos },
            coeff,
            label,
        });
        match it.peek() {
            None => break,
            Some((_, Tok::Plus | Tok::Minus)) => {}
            Some((p, _)) => return Err(Error::parse(*p, "expected '+' or '-' between terms")),
        }
    }
    Ok(terms)
}

fn parse_json(text: &str) -> Result<QDivisor> {
    let map: BTreeMap<String, String> = serde_json::from_str(text).map_err(|e| {
        let offset = text
            .lines()
            .take(e.line().saturating_sub(1))
            .map(|l| l.len() + 1)
            .sum::<usize>()
            + e.column().saturating_sub(1);
        Error::parse(offset, e.to_string())
    })?;
    let mut d = QDivisor::new();
    for (label, value) in map {
        let coeff = parse_rational(&value)
            .map_err(|e| Error::parse(0, format!("coefficient of {label:?}: {e}")))?;
        d.add_term(label, coeff);
    }
    Ok(d)
}

pub fn parse_divisor(text: &str) -> Result<QDivisor> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let terms = parse_terms(text)?;
    let explicit: HashMap<&str, usize> = terms
        .iter()
        .filter_map(|t| t.label.as_deref().map(|l| (l, t.pos)))
        .collect();
    let mut d = QDivisor::new();
    for (k, t) in terms.iter().enumerate() {
        let label = match &t.label {
            Some(l) => l.clone(),
            None => {
                let auto = format!("P{k}");
                if explicit.contains_key(auto.as_str()) {
                    return Err(Error::parse(
                        t.pos,
                        format!("unlabelled term would be named {auto}, which is also used as an explicit label"),
                    ));
                }
                auto
            }
        };
        d.add_term(label, t.coeff.clone());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    #[test]
    fn plain_divisor() {
        let d = parse_divisor("2 - 1/2 - 2/3 - 4/5").unwrap();
        assert_eq!(d.coefficient("P0"), Some(&int(2)));
        assert_eq!(d.coefficient("P1"), Some(&rat(-1, 2)));
        assert_eq!(d.coefficient("P2"), Some(&rat(-2, 3)));
        assert_eq!(d.coefficient("P3"), Some(&rat(-4, 5)));
        assert_eq!(parse_divisor("2-1/2-2/3-4/5").unwrap(), d);
    }

    #[test]
    fn labels_are_summed() {
        let d = parse_divisor("1/2@A + 2/3@A").unwrap();
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.coefficient("A"), Some(&rat(7, 6)));
        let d = parse_divisor("-1/2@A + 1/2@A + 3").unwrap();
        assert_eq!(d.terms().len(), 1);
    }

    #[test]
    fn leading_sign_and_fraction() {
        let d = parse_divisor("-1/3 + 2").unwrap();
        assert_eq!(d.degree(), rat(5, 3));
    }

    #[test]
    fn json_object() {
        let d = parse_divisor(r#"{"A": "3/2", "B": "-1/3"}"#).unwrap();
        assert_eq!(d.coefficient("B"), Some(&rat(-1, 3)));
    }

    #[test]
    fn errors() {
        let pos = |t: &str| match parse_divisor(t) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{t:?}: {other:?}"),
        };
        assert_eq!(pos("2 - 1/0"), 6);
        assert_eq!(pos("2 - 1/2 3"), 8);
        assert_eq!(pos("2 - x"), 4);
        assert_eq!(pos(""), 0);
        assert_eq!(pos("2 -"), 3);
        assert_eq!(pos("2 - 1/2@P2 - 1/3"), 11);
        assert!(parse_divisor("2 - 1/2@").is_err());
        assert!(parse_divisor(r#"{"A": "1/0"}"#).is_err());
        assert!(parse_divisor("{\"A\": ").is_err());
    }
}
