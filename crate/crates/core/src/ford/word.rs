use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A run `g^power` of one generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token {
    pub generator: usize,
    pub power: i64,
}

/// Word in the generators, kept freely reduced with adjacent runs merged.
/// `a.b^-1.c^3` denotes `a ∘ b⁻¹ ∘ c³`, so the rightmost letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    tokens: Vec<Token>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn letter(generator: usize, inverse: bool) -> Word {
        Word::power(generator, if inverse { -1 } else { 1 })
    }

    pub fn power(generator: usize, power: i64) -> Word {
        let mut w = Word::identity();
        w.push(Token { generator, power });
        w
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn is_identity(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.tokens.iter().map(|t| t.power.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    fn push(&mut self, t: Token) {
        if t.power == 0 {
            return;
        }
        if let Some(last) = self.tokens.last_mut() {
            if last.generator == t.generator {
                last.power += t.power;
                if last.power == 0 {
                    self.tokens.pop();
                }
                return;
            }
        }
        self.tokens.push(t);
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Word) -> Word {
        let mut out = self.clone();
        for t in &inner.tokens {
            out.push(*t);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        let mut out = Word::identity();
        for t in self.tokens.iter().rev() {
            out.push(Token { generator: t.generator, power: -t.power });
        }
        out
    }

    /// Generator and direction of the rightmost letter.
    pub fn last_letter(&self) -> Option<(usize, bool)> {
        self.tokens.last().map(|t| (t.generator, t.power < 0))
    }

    pub fn format(&self, labels: &[String]) -> String {
        if self.tokens.is_empty() {
            return "id".to_string();
        }
        let parts: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match t.power {
                1 => labels[t.generator].clone(),
                p => format!("{}^{}", labels[t.generator], p),
            })
            .collect();
        parts.join(".")
    }

    pub fn parse(s: &str, labels: &[String]) -> Result<Word> {
        let s = s.trim();
        let mut w = Word::identity();
        if s.is_empty() || s == "id" {
            return Ok(w);
        }
        for part in s.split('.') {
            let part = part.trim();
            let (name, power) = match part.rsplit_once('^') {
                Some((name, p)) => {
                    (name, p.trim().parse::<i64>().map_err(|_| Error::UnknownLetter(part.to_string()))?)
                }
                None => (part, 1),
            };
            let generator =
                labels.iter().position(|l| l == name.trim()).ok_or_else(|| Error::UnknownLetter(part.to_string()))?;
            w.push(Token { generator, power });
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn labels() -> Vec<String> {
        vec!["T".into(), "S".into()]
    }

    #[test]
    fn runs_merge_and_cancel() {
        let t = Word::letter(0, false);
        let w = t.compose(&t).compose(&Word::letter(1, false));
        assert_eq!(w.format(&labels()), "T^2.S");
        assert_eq!(w.len(), 3);
        assert!(w.compose(&w.inverse()).is_identity());
        assert_eq!(w.inverse().format(&labels()), "S^-1.T^-2");
    }

    #[test]
    fn parse_round_trip() {
        let w = Word::parse("S.T^-1.T^-2.S", &labels()).unwrap();
        assert_eq!(w.format(&labels()), "S.T^-3.S");
        assert_eq!(Word::parse("id", &labels()).unwrap(), Word::identity());
        assert_eq!(Word::parse("U", &labels()), Err(Error::UnknownLetter("U".into())));
    }
}
