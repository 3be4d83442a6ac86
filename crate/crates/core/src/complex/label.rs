use std::fmt;
use std::str::FromStr;

use crate::concept::{PartialHypothesis, Sign};
use crate::error::{Error, Result};

/// Vertex labels. Text forms:
/// `(x,+)` domain point, `{0,2}` subset, `[i,-]` crosspolytope pole,
/// `<+*->` cube, `ch(a;b)` chain node, `t1:a` tagged join factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    DomainPoint { x: usize, y: Sign },
    Subset(Vec<usize>),
    CrossPole { i: usize, y: Sign },
    Cube(PartialHypothesis),
    ChainNode(Vec<VertexLabel>),
    Tagged { side: usize, inner: Box<VertexLabel> },
}

impl VertexLabel {
    pub fn point(x: usize, y: Sign) -> Self {
        VertexLabel::DomainPoint { x, y }
    }

    pub fn tagged(side: usize, inner: VertexLabel) -> Self {
        VertexLabel::Tagged {
            side,
            inner: Box::new(inner),
        }
    }

    pub fn as_point(&self) -> Option<(usize, Sign)> {
        match self {
            VertexLabel::DomainPoint { x, y } => Some((*x, *y)),
            _ => None,
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{it}")?;
    }
    Ok(())
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::DomainPoint { x, y } => write!(f, "({x},{y})"),
            VertexLabel::Subset(s) => {
                f.write_str("{")?;
                write_list(f, s, ",")?;
                f.write_str("}")
            }
            VertexLabel::CrossPole { i, y } => write!(f, "[{i},{y}]"),
            VertexLabel::Cube(h) => write!(f, "<{h}>"),
            VertexLabel::ChainNode(s) => {
                f.write_str("ch(")?;
                write_list(f, s, ";")?;
                f.write_str(")")
            }
            VertexLabel::Tagged { side, inner } => write!(f, "t{side}:{inner}"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Schema(format!(
            "bad vertex label {:?} at byte {}: {what}",
            String::from_utf8_lossy(self.s),
            self.pos
        ))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {:?}", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected number"))
    }

    fn sign(&mut self) -> Result<Sign> {
        let s = self
            .peek()
            .and_then(|c| Sign::from_char(c as char))
            .ok_or_else(|| self.err("expected sign"))?;
        self.pos += 1;
        Ok(s)
    }

    fn label(&mut self) -> Result<VertexLabel> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let x = self.number()?;
                self.expect(b',')?;
                let y = self.sign()?;
                self.expect(b')')?;
                Ok(VertexLabel::DomainPoint { x, y })
            }
            Some(b'[') => {
                self.pos += 1;
                let i = self.number()?;
                self.expect(b',')?;
                let y = self.sign()?;
                self.expect(b']')?;
                Ok(VertexLabel::CrossPole { i, y })
            }
            Some(b'{') => {
                self.pos += 1;
                let mut v = Vec::new();
                if self.peek() != Some(b'}') {
                    loop {
                        v.push(self.number()?);
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(b'}')?;
                Ok(VertexLabel::Subset(v))
            }
            Some(b'<') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c != b'>') {
                    self.pos += 1;
                }
                let body = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.err("utf8"))?;
                let h: PartialHypothesis = body.parse().map_err(|_| self.err("bad cube"))?;
                self.expect(b'>')?;
                Ok(VertexLabel::Cube(h))
            }
            Some(b'c') => {
                self.pos += 1;
                self.expect(b'h')?;
                self.expect(b'(')?;
                let mut v = Vec::new();
                if self.peek() != Some(b')') {
                    loop {
                        v.push(self.label()?);
                        if self.peek() == Some(b';') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(b')')?;
                Ok(VertexLabel::ChainNode(v))
            }
            Some(b't') => {
                self.pos += 1;
                let side = self.number()?;
                self.expect(b':')?;
                Ok(VertexLabel::tagged(side, self.label()?))
            }
            _ => Err(self.err("unknown label kind")),
        }
    }
}

impl FromStr for VertexLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let l = p.label()?;
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all_kinds() {
        let labels = vec![
            VertexLabel::point(3, Sign::Plus),
            VertexLabel::Subset(vec![0, 2]),
            VertexLabel::Subset(vec![]),
            VertexLabel::CrossPole { i: 1, y: Sign::Minus },
            VertexLabel::Cube("+*-".parse().unwrap()),
            VertexLabel::ChainNode(vec![
                VertexLabel::point(0, Sign::Minus),
                VertexLabel::ChainNode(vec![VertexLabel::Subset(vec![1])]),
            ]),
            VertexLabel::tagged(1, VertexLabel::tagged(0, VertexLabel::point(2, Sign::Plus))),
        ];
        for l in labels {
            let s = l.to_string();
            assert_eq!(s.parse::<VertexLabel>().unwrap(), l, "{s}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!("(1,x)".parse::<VertexLabel>().is_err());
        assert!("(1,+)z".parse::<VertexLabel>().is_err());
        assert!("q".parse::<VertexLabel>().is_err());
    }
}
