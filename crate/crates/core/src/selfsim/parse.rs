//! Text syntax for words and presentations.
//!
//! Words: `word := factor ('*' factor)*`, `factor := atom ('^' int)?`,
//! `atom := ident | '1' | '(' word ')'`. Whitespace is ignored; the empty
//! string and `1` denote the identity.
//!
//! Presentations are line oriented, `#` starts a comment:
//!
//! ```text
//! name = grigorchuk
//! sig = binary                  # or ternary, or k1,k2,...,kt
//! gen a = perm[1,0] (1, 1)
//! gen b = perm[0,1] (a, c)
//! norm f1 = perm[0,1] (1, (a*d)^2)
//! ```
//!
//! `gen` rules may reference generators only; `norm` rules may also reference
//! other normalizer elements. Every reference sits in a child position, so
//! the recursion is guarded by construction.

use std::collections::HashMap;

use super::word::{Letter, Word};
use super::RecursionRule;
use crate::error::{Error, Result};
use crate::tree::{Perm, TreeSignature};

pub(crate) struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]` in the source line, 1-based.
    column0: usize,
    /// Symbol references with their source positions.
    pub refs: Vec<(String, usize, usize)>,
}

impl Cursor {
    fn new(text: &str, line: usize, column0: usize) -> Cursor {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
            column0,
            refs: Vec::new(),
        }
    }

    fn column(&self) -> usize {
        self.column0 + self.pos
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let message = match self.peek() {
                Some(found) => format!("expected `{c}`, found `{found}`"),
                None => format!("expected `{c}`, found end of input"),
            };
            Err(self.error(message))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_' || (c == '-' && self.pos > start))
        {
            if self.pos == start && self.chars[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn symbol(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic() || *c == '_') {
            return None;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn word(&mut self) -> Result<Word> {
        match self.peek() {
            None | Some(')') | Some(',') => return Ok(Word::empty()),
            _ => {}
        }
        let mut w = self.factor()?;
        while self.eat('*') {
            w = w.concat(&self.factor()?);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.int()?;
            Ok(base.pow(n))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Word::empty())
            }
            _ => {
                let column = self.column();
                let name = self.symbol().ok_or_else(|| self.error(match self.chars.get(self.pos) {
                    Some(c) => format!("unexpected `{c}`"),
                    None => "unexpected end of input".into(),
                }))?;
                self.refs.push((name.clone(), self.line, column));
                Ok(Word::from_letters(vec![Letter::new(name, false)]))
            }
        }
    }
}

pub(crate) fn parse_word(text: &str) -> Result<Word> {
    let mut c = Cursor::new(text, 1, 1);
    let w = c.word()?;
    if !c.at_end() {
        let found = c.peek().unwrap();
        return Err(c.error(format!("unexpected `{found}`")));
    }
    Ok(w)
}

/// The parsed content of a presentation file, before evaluation state is
/// attached.
pub(crate) struct ParsedPresentation {
    pub name: String,
    pub sig: TreeSignature,
    pub generators: Vec<RecursionRule>,
    pub normalizers: Vec<RecursionRule>,
}

pub(crate) fn parse_presentation(text: &str) -> Result<ParsedPresentation> {
    let mut name = None;
    let mut sig = None;
    let mut generators = Vec::new();
    let mut normalizers = Vec::new();
    // (symbol, line, column, referenced from a generator rule)
    let mut refs: Vec<(String, usize, usize, bool)> = Vec::new();
    let mut declared: HashMap<String, (bool, usize)> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = raw.split('#').next().unwrap();
        if body.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(body, line_no, 1);
        let key = c.ident().ok_or_else(|| c.error("expected `name`, `sig`, `gen` or `norm`"))?;
        match key.as_str() {
            "name" => {
                c.expect('=')?;
                let value = c.ident().ok_or_else(|| c.error("expected a name"))?;
                if !c.at_end() {
                    return Err(c.error("trailing input after name"));
                }
                name = Some(value);
            }
            "sig" => {
                c.expect('=')?;
                c.skip_ws();
                let column = c.column();
                let rest: String = c.chars[c.pos..].iter().collect();
                let parsed = rest.trim().parse::<TreeSignature>().map_err(|e| Error::Parse {
                    line: line_no,
                    column,
                    message: e.to_string(),
                })?;
                sig = Some(parsed);
            }
            "gen" | "norm" => {
                let is_gen = key == "gen";
                let column = c.column() + 1;
                let symbol = c.symbol().ok_or_else(|| c.error("expected a symbol name"))?;
                if let Some((_, prev)) = declared.get(&symbol) {
                    return Err(Error::Parse {
                        line: line_no,
                        column,
                        message: format!("`{symbol}` already declared on line {prev}"),
                    });
                }
                c.expect('=')?;
                let root = parse_perm(&mut c)?;
                c.expect('(')?;
                let mut children = vec![c.word()?];
                while c.eat(',') {
                    children.push(c.word()?);
                }
                c.expect(')')?;
                if !c.at_end() {
                    let found = c.peek().unwrap();
                    return Err(c.error(format!("unexpected `{found}`")));
                }
                if children.len() != root.degree() {
                    return Err(Error::Parse {
                        line: line_no,
                        column,
                        message: format!(
                            "`{symbol}` has a degree-{} root but {} sections",
                            root.degree(),
                            children.len()
                        ),
                    });
                }
                refs.extend(c.refs.drain(..).map(|(s, l, col)| (s, l, col, is_gen)));
                declared.insert(symbol.clone(), (is_gen, line_no));
                let rule = RecursionRule {
                    name: symbol,
                    root,
                    children,
                };
                if is_gen {
                    generators.push(rule);
                } else {
                    normalizers.push(rule);
                }
            }
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }

    for (symbol, line, column, from_gen) in refs {
        match declared.get(&symbol) {
            None => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("unknown symbol `{symbol}`"),
                })
            }
            Some((false, _)) if from_gen => {
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("generator rules may not reference normalizer element `{symbol}`"),
                })
            }
            _ => {}
        }
    }

    let sig = sig.ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "missing `sig = ...` line".into(),
    })?;
    if generators.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no generators declared".into(),
        });
    }
    Ok(ParsedPresentation {
        name: name.unwrap_or_else(|| "unnamed".into()),
        sig,
        generators,
        normalizers,
    })
}

fn parse_perm(c: &mut Cursor) -> Result<Perm> {
    let column = c.column() + 1;
    match c.ident().as_deref() {
        Some("perm") => {}
        _ => return Err(c.error("expected `perm[...]`")),
    }
    c.expect('[')?;
    let mut images = Vec::new();
    if !c.eat(']') {
        loop {
            let n = c.int()?;
            let n = u8::try_from(n).map_err(|_| c.error(format!("image {n} out of range")))?;
            images.push(n);
            if c.eat(']') {
                break;
            }
            c.expect(',')?;
        }
    }
    Perm::from_images(images).map_err(|e| Error::Parse {
        line: c.line,
        column,
        message: e.to_string(),
    })
}
