//! `.rcgt` transcripts.
//!
//! ```text
//! p rcgt <rounds>
//! d <k> [arc ids...]
//! m <k> <arc id>
//! o TRAVELER | ADVERSARY
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::Winner;
use crate::temporal::ArcId;

/// One round: the announced arcs (ascending) and the arc the traveler took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub announcement: Vec<ArcId>,
    pub moved: ArcId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub rounds: Vec<Round>,
    pub outcome: Winner,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TranscriptParseError {
    pub line: usize,
    pub message: String,
}

impl Transcript {
    pub fn to_rcgt(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p rcgt {}", self.rounds.len());
        for (k, r) in self.rounds.iter().enumerate() {
            let _ = write!(out, "d {}", k + 1);
            for a in &r.announcement {
                let _ = write!(out, " {}", a.0);
            }
            out.push('\n');
            let _ = writeln!(out, "m {} {}", k + 1, r.moved.0);
        }
        let _ = writeln!(out, "o {}", self.outcome);
        out
    }

    pub fn parse(text: &str) -> Result<Transcript, TranscriptParseError> {
        let fail = |line: usize, message: String| TranscriptParseError { line, message };
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty() && t[0] != "c")
            .collect();
        let last = text.lines().count().max(1);
        let num = |line: usize, tok: &str| -> Result<u32, TranscriptParseError> {
            match tok.parse::<u32>() {
                Ok(v) if tok.bytes().all(|b| b.is_ascii_digit()) => Ok(v),
                _ => Err(fail(line, format!("`{tok}` is not a decimal integer"))),
            }
        };
        let mut it = lines.iter();

        let (hl, header) = it.next().ok_or_else(|| fail(last, "missing `p rcgt` header".into()))?;
        if header.len() != 3 || header[0] != "p" || header[1] != "rcgt" {
            return Err(fail(*hl, "malformed header, expected `p rcgt <rounds>`".into()));
        }
        let count = num(*hl, header[2])? as usize;

        let mut rounds = Vec::with_capacity(count);
        for k in 1..=count {
            let (dl, d) = it.next().ok_or_else(|| fail(last, format!("missing `d {k}` line")))?;
            if d.len() < 2 || d[0] != "d" || num(*dl, d[1])? as usize != k {
                return Err(fail(*dl, format!("expected `d {k} [arc ids]`")));
            }
            let announcement = d[2..].iter().map(|t| num(*dl, t).map(ArcId)).collect::<Result<Vec<_>, _>>()?;
            let (ml, m) = it.next().ok_or_else(|| fail(last, format!("missing `m {k}` line")))?;
            if m.len() != 3 || m[0] != "m" || num(*ml, m[1])? as usize != k {
                return Err(fail(*ml, format!("expected `m {k} <arc id>`")));
            }
            rounds.push(Round { announcement, moved: ArcId(num(*ml, m[2])?) });
        }

        let (ol, o) = it.next().ok_or_else(|| fail(last, "missing `o` outcome line".into()))?;
        let outcome = match o.as_slice() {
            ["o", "TRAVELER"] => Winner::Traveler,
            ["o", "ADVERSARY"] => Winner::Adversary,
            _ => return Err(fail(*ol, "expected `o TRAVELER` or `o ADVERSARY`".into())),
        };
        if let Some((l, _)) = it.next() {
            return Err(fail(*l, "trailing content after outcome".into()));
        }
        Ok(Transcript { rounds, outcome })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_documented_layout() {
        let t = Transcript {
            rounds: vec![
                Round { announcement: vec![ArcId(1), ArcId(4)], moved: ArcId(1) },
                Round { announcement: vec![], moved: ArcId(2) },
            ],
            outcome: Winner::Traveler,
        };
        assert_eq!(t.to_rcgt(), "p rcgt 2\nd 1 1 4\nm 1 1\nd 2\nm 2 2\no TRAVELER\n");
    }

    #[test]
    fn truncated_and_malformed_inputs() {
        assert_eq!(Transcript::parse("p rcgt 2\nd 1\nm 1 1\n").unwrap_err().line, 3);
        assert_eq!(Transcript::parse("p rcgt 1\nd 1\nm 1 1\n").unwrap_err().message, "missing `o` outcome line");
        assert_eq!(Transcript::parse("p rcgt 1\nd 2\nm 1 1\no TRAVELER\n").unwrap_err().line, 2);
        assert_eq!(Transcript::parse("p rcgt 0\no DRAW\n").unwrap_err().line, 2);
        assert_eq!(Transcript::parse("p rcg 0\n").unwrap_err().line, 1);
        assert!(Transcript::parse("").is_err());
        assert!(Transcript::parse("p rcgt 0\no ADVERSARY\nm 1 1\n").is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(rounds in prop::collection::vec((prop::collection::btree_set(1u32..50, 0..4), 1u32..50), 0..8),
                     traveler in any::<bool>()) {
            let t = Transcript {
                rounds: rounds
                    .into_iter()
                    .map(|(d, m)| Round { announcement: d.into_iter().map(ArcId).collect(), moved: ArcId(m) })
                    .collect(),
                outcome: if traveler { Winner::Traveler } else { Winner::Adversary },
            };
            prop_assert_eq!(Transcript::parse(&t.to_rcgt()).unwrap(), t);
        }
    }
}
