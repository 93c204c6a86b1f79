//! Integer expressions as printed in the family tables: `+`, `-`,
//! parentheses, integer literals, single-letter parameters and implicit
//! multiplication, e.g. `((a+1)b+3a+2)c+(2a+2)b+5a+3`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(i64),
    Var(char),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
        };
        let e = p.sum()?;
        if let Some(&(at, c)) = p.chars.get(p.pos) {
            return Err(Error::parse(at, format!("unexpected {c:?}")));
        }
        Ok(e)
    }

    /// Variables in order of first appearance.
    pub fn variables(&self, out: &mut Vec<char>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }

    /// `None` on overflow.
    pub fn eval(&self, env: &dyn Fn(char) -> i64) -> Option<i128> {
        match self {
            Expr::Const(c) => Some(*c as i128),
            Expr::Var(v) => Some(env(*v) as i128),
            Expr::Add(a, b) => a.eval(env)?.checked_add(b.eval(env)?),
            Expr::Sub(a, b) => a.eval(env)?.checked_sub(b.eval(env)?),
            Expr::Mul(a, b) => a.eval(env)?.checked_mul(b.eval(env)?),
        }
    }

    /// No subtraction and only nonnegative literals, so the value is
    /// nondecreasing in every variable over nonnegative inputs.
    pub fn is_monotone(&self) -> bool {
        match self {
            Expr::Const(c) => *c >= 0,
            Expr::Var(_) => true,
            Expr::Sub(..) => false,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.is_monotone() && b.is_monotone(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "{a}+{b}"),
            Expr::Sub(a, b) => write!(f, "{a}-({b})"),
            Expr::Mul(a, b) => {
                let wrap = |e: &Expr| matches!(e, Expr::Add(..) | Expr::Sub(..));
                if wrap(a) {
                    write!(f, "({a})")?
                } else {
                    write!(f, "{a}")?
                }
                write!(f, "*")?;
                if wrap(b) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(
            || self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()),
            |&(i, _)| i,
        )
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' {
                Expr::Add(Box::new(acc), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(acc), Box::new(rhs))
            };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => self.pos += 1,
                Some(c) if c == '(' || c.is_ascii_alphabetic() => {}
                _ => return Ok(acc),
            }
            let rhs = self.atom()?;
            acc = Expr::Mul(Box::new(acc), Box::new(rhs));
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(Error::parse(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                    digits.push(d);
                    self.pos += 1;
                }
                digits
                    .parse()
                    .map(Expr::Const)
                    .map_err(|_| Error::parse(at, "integer literal too large"))
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(Expr::Var(c))
            }
            Some(c) => Err(Error::parse(at, format!("unexpected {c:?}"))),
            None => Err(Error::parse(at, "unexpected end of expression")),
        }
    }
}
