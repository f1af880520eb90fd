//! Text forms: words `(1,2,3)` and cycle lists `[(1,1,2) (1,2,2)] [...]`.
//! The literal `id` denotes the identity. Errors carry byte offsets.

use crate::error::{Error, Result};
use crate::perm::{TuplePerm, Word};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a letter"));
        }
        let value: u32 = self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::Parse { offset: start, message: "letter too large".into() })?;
        if value == 0 {
            return Err(Error::Parse { offset: start, message: "letters start at 1".into() });
        }
        Ok(value)
    }

    fn word(&mut self) -> Result<Word> {
        self.expect('(')?;
        let mut letters = vec![self.number()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    letters.push(self.number()?);
                }
                Some(')') => {
                    self.pos += 1;
                    return Word::new(letters);
                }
                Some(c) => return Err(self.err(format!("expected `,` or `)`, found `{c}`"))),
                None => return Err(self.err("unterminated word")),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

/// Parses `(i,j,..)`.
pub fn parse_word(src: &str) -> Result<Word> {
    let mut cur = Cursor::new(src);
    let w = cur.word()?;
    if !cur.at_end() {
        return Err(cur.err("trailing input after word"));
    }
    Ok(w)
}

/// Parses a word and checks its letters against `[n]`.
pub fn parse_word_over(src: &str, n: u32) -> Result<Word> {
    let w = parse_word(src)?;
    w.check_alphabet(n)?;
    Ok(w)
}

/// Parses a list of cycles. `arity` is needed only for `id`; otherwise it is
/// read from the first word and checked if given.
pub fn parse_perm(src: &str, n: u32, arity: Option<usize>) -> Result<TuplePerm> {
    let mut cur = Cursor::new(src);
    cur.skip_ws();
    if cur.src[cur.pos..].trim_end() == "id" {
        let arity = arity.ok_or_else(|| cur.err("`id` needs an explicit arity"))?;
        return TuplePerm::identity(n, arity);
    }
    let mut cycles = Vec::new();
    let mut seen_arity = arity;
    while !cur.at_end() {
        cur.expect('[')?;
        let mut cycle = Vec::new();
        loop {
            cur.skip_ws();
            if cur.peek() == Some(']') {
                cur.pos += 1;
                break;
            }
            let start = cur.pos;
            let w = cur.word()?;
            let check = |e: Error| match e {
                Error::LetterOutOfRange { letter, n } => Error::Parse {
                    offset: start,
                    message: format!("letter {letter} is outside [1, {n}]"),
                },
                other => other,
            };
            w.check_alphabet(n).map_err(check)?;
            match seen_arity {
                Some(a) if a != w.arity() => {
                    return Err(Error::Parse {
                        offset: start,
                        message: format!("word has arity {}, expected {a}", w.arity()),
                    })
                }
                _ => seen_arity = Some(w.arity()),
            }
            cycle.push(w);
        }
        cycles.push(cycle);
    }
    let arity = seen_arity.ok_or_else(|| cur.err("empty permutation literal; use `id`"))?;
    TuplePerm::from_cycles(n, arity, cycles)
}
