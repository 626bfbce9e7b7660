//! Minimal S-expressions: atoms and parenthesised lists, `;` comments.

use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SexpError {
    pub offset: usize,
    pub message: String,
}

impl Sexp {
    pub fn atom(s: &str) -> Sexp {
        Sexp::Atom(s.to_string())
    }

    pub fn list<I: IntoIterator<Item = Sexp>>(items: I) -> Sexp {
        Sexp::List(items.into_iter().collect())
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }

    /// `(head rest...)` with an atom head.
    pub fn as_form(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items) => match items.split_first() {
                Some((Sexp::Atom(h), rest)) => Some((h, rest)),
                _ => None,
            },
            Sexp::Atom(_) => None,
        }
    }

    pub fn parse(src: &str) -> Result<Sexp, SexpError> {
        let all = Sexp::parse_many(src)?;
        match <[Sexp; 1]>::try_from(all) {
            Ok([one]) => Ok(one),
            Err(v) => Err(SexpError {
                offset: 0,
                message: format!("expected exactly one expression, found {}", v.len()),
            }),
        }
    }

    pub fn parse_many(src: &str) -> Result<Vec<Sexp>, SexpError> {
        let bytes: Vec<(usize, char)> = src.char_indices().collect();
        let mut i = 0;
        let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
        let mut opens: Vec<usize> = Vec::new();
        while i < bytes.len() {
            let (off, c) = bytes[i];
            if c.is_whitespace() {
                i += 1;
            } else if c == ';' {
                while i < bytes.len() && bytes[i].1 != '\n' {
                    i += 1;
                }
            } else if c == '(' {
                stack.push(Vec::new());
                opens.push(off);
                i += 1;
            } else if c == ')' {
                if stack.len() == 1 {
                    return Err(SexpError {
                        offset: off,
                        message: "unbalanced ')'".into(),
                    });
                }
                let items = stack.pop().unwrap();
                opens.pop();
                stack.last_mut().unwrap().push(Sexp::List(items));
                i += 1;
            } else {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i].1;
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    i += 1;
                }
                let end = if i < bytes.len() { bytes[i].0 } else { src.len() };
                stack.last_mut().unwrap().push(Sexp::Atom(src[bytes[start].0..end].to_string()));
            }
        }
        if let Some(off) = opens.pop() {
            return Err(SexpError {
                offset: off,
                message: "unclosed '('".into(),
            });
        }
        Ok(stack.pop().unwrap())
    }

    /// Indented rendering that breaks lists longer than `width` columns.
    pub fn pretty(&self, width: usize) -> String {
        let mut out = String::new();
        self.pretty_into(&mut out, 0, width);
        out
    }

    fn pretty_into(&self, out: &mut String, indent: usize, width: usize) {
        let flat = self.to_string();
        match self {
            Sexp::List(items) if flat.len() + indent > width && items.len() > 1 => {
                out.push('(');
                out.push_str(&items[0].to_string());
                for it in &items[1..] {
                    out.push('\n');
                    out.push_str(&" ".repeat(indent + 2));
                    it.pretty_into(out, indent + 2, width);
                }
                out.push(')');
            }
            _ => out.push_str(&flat),
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}", it)?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let s = Sexp::parse("(a (b c) ; note\n d)").unwrap();
        assert_eq!(s.to_string(), "(a (b c) d)");
        assert_eq!(Sexp::parse(&s.pretty(4)).unwrap(), s);
        assert!(Sexp::parse("(a").is_err());
        assert!(Sexp::parse("a)").is_err());
    }
}
