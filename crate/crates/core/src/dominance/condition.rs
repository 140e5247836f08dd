use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// An event on the pairs of `W` lying outside `V⁽²⁾`.
///
/// Text forms: `trivial`, `open:i-j`, `closed:i-j`, `all-open`, `all-closed`,
/// `count-eq:k`, `count-ge:k`, `count-le:k`, `pattern:0110`, `connected:i-j`,
/// `not:<condition>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Trivial,
    Open(i64, i64),
    Closed(i64, i64),
    AllOpen,
    AllClosed,
    CountEq(usize),
    CountAtLeast(usize),
    CountAtMost(usize),
    /// Exact outside configuration, one digit per outside pair in lexicographic order.
    Pattern(Vec<bool>),
    /// The two vertices are joined by a path of open outside pairs.
    Connected(i64, i64),
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
}

impl Condition {
    /// Evaluates on an outside configuration. Fails when the condition names a
    /// pair that is not an outside pair, or a pattern of the wrong length.
    pub fn holds(&self, outside: &[(i64, i64)], open: &[bool]) -> Result<bool> {
        let lookup = |i: i64, j: i64| -> Result<bool> {
            let key = (i.min(j), i.max(j));
            outside
                .iter()
                .position(|&p| p == key)
                .map(|k| open[k])
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "condition pair {i}-{j} is not an outside pair"
                    ))
                })
        };
        let count = open.iter().filter(|&&o| o).count();
        Ok(match self {
            Self::Trivial => true,
            Self::Open(i, j) => lookup(*i, *j)?,
            Self::Closed(i, j) => !lookup(*i, *j)?,
            Self::AllOpen => count == open.len(),
            Self::AllClosed => count == 0,
            Self::CountEq(k) => count == *k,
            Self::CountAtLeast(k) => count >= *k,
            Self::CountAtMost(k) => count <= *k,
            Self::Pattern(bits) => {
                if bits.len() != open.len() {
                    return Err(Error::InvalidParameter(format!(
                        "pattern has {} digits, {} outside pairs",
                        bits.len(),
                        open.len()
                    )));
                }
                bits.as_slice() == open
            }
            Self::Connected(a, b) => {
                let lo = outside
                    .iter()
                    .flat_map(|&(x, y)| [x, y])
                    .chain([*a, *b])
                    .min()
                    .unwrap();
                let hi = outside
                    .iter()
                    .flat_map(|&(x, y)| [x, y])
                    .chain([*a, *b])
                    .max()
                    .unwrap();
                let mut uf = UnionFind::new((hi - lo + 1) as usize);
                for (&(x, y), &o) in outside.iter().zip(open) {
                    if o {
                        uf.union((x - lo) as usize, (y - lo) as usize);
                    }
                }
                uf.connected((a - lo) as usize, (b - lo) as usize)
            }
            Self::Not(c) => !c.holds(outside, open)?,
            Self::And(a, b) => a.holds(outside, open)? && b.holds(outside, open)?,
        })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trivial => write!(f, "trivial"),
            Self::Open(i, j) => write!(f, "open:{i}-{j}"),
            Self::Closed(i, j) => write!(f, "closed:{i}-{j}"),
            Self::AllOpen => write!(f, "all-open"),
            Self::AllClosed => write!(f, "all-closed"),
            Self::CountEq(k) => write!(f, "count-eq:{k}"),
            Self::CountAtLeast(k) => write!(f, "count-ge:{k}"),
            Self::CountAtMost(k) => write!(f, "count-le:{k}"),
            Self::Pattern(bits) => {
                write!(f, "pattern:")?;
                bits.iter().try_for_each(|&b| write!(f, "{}", u8::from(b)))
            }
            Self::Connected(i, j) => write!(f, "connected:{i}-{j}"),
            Self::Not(c) => write!(f, "not:{c}"),
            Self::And(a, b) => write!(f, "and({a},{b})"),
        }
    }
}

fn parse_pair(s: &str) -> Option<(i64, i64)> {
    // Allow negative endpoints: split on the first '-' that follows a digit.
    let bytes = s.as_bytes();
    let cut = (1..bytes.len()).find(|&k| bytes[k] == b'-' && bytes[k - 1].is_ascii_digit())?;
    Some((s[..cut].parse().ok()?, s[cut + 1..].parse().ok()?))
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown condition '{s}'"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("not:") {
            return Ok(Self::Not(Box::new(rest.parse()?)));
        }
        if let Some(inner) = s.strip_prefix("and(").and_then(|r| r.strip_suffix(')')) {
            // Split at the top-level comma.
            let mut depth = 0;
            for (k, c) in inner.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        return Ok(Self::And(
                            Box::new(inner[..k].parse()?),
                            Box::new(inner[k + 1..].parse()?),
                        ))
                    }
                    _ => {}
                }
            }
            return Err(bad());
        }
        let (head, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = || arg.parse::<usize>().map_err(|_| bad());
        let pair = || parse_pair(arg).ok_or_else(bad);
        Ok(match head {
            "trivial" => Self::Trivial,
            "all-open" => Self::AllOpen,
            "all-closed" => Self::AllClosed,
            "open" => {
                let (i, j) = pair()?;
                Self::Open(i, j)
            }
            "closed" => {
                let (i, j) = pair()?;
                Self::Closed(i, j)
            }
            "connected" => {
                let (i, j) = pair()?;
                Self::Connected(i, j)
            }
            "count-eq" => Self::CountEq(num()?),
            "count-ge" => Self::CountAtLeast(num()?),
            "count-le" => Self::CountAtMost(num()?),
            "pattern" => Self::Pattern(
                arg.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(bad()),
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(bad()),
        })
    }
}
