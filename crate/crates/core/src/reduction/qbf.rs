//! Prenex-CNF quantified boolean formulas and the QDIMACS format.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("variable {0} is quantified more than once")]
    DuplicateQuantification(u32),
    #[error("literal {0} refers to an unquantified variable")]
    UnboundLiteral(i32),
    #[error("literal 0 is not a variable")]
    ZeroLiteral,
    #[error("variable 0 cannot be quantified")]
    ZeroVariable,
    #[error("the matrix has no clauses")]
    NoClauses,
    #[error("clause {0} contains a variable and its negation")]
    Tautology(usize),
}

/// `Q1 x1 ... Qn xn . C1 ∧ ... ∧ Cm` with clauses as signed variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbf {
    prefix: Vec<(Quantifier, u32)>,
    clauses: Vec<Vec<i32>>,
}

impl Qbf {
    /// Duplicate literals inside a clause are merged; tautological clauses are rejected.
    pub fn new(prefix: Vec<(Quantifier, u32)>, clauses: Vec<Vec<i32>>) -> Result<Self, QbfError> {
        let mut bound = BTreeSet::new();
        for &(_, v) in &prefix {
            if v == 0 {
                return Err(QbfError::ZeroVariable);
            }
            if !bound.insert(v) {
                return Err(QbfError::DuplicateQuantification(v));
            }
        }
        if clauses.is_empty() {
            return Err(QbfError::NoClauses);
        }
        let mut normalized = Vec::with_capacity(clauses.len());
        for (j, clause) in clauses.into_iter().enumerate() {
            let mut lits: Vec<i32> = Vec::with_capacity(clause.len());
            for lit in clause {
                if lit == 0 {
                    return Err(QbfError::ZeroLiteral);
                }
                if !bound.contains(&lit.unsigned_abs()) {
                    return Err(QbfError::UnboundLiteral(lit));
                }
                if lits.contains(&-lit) {
                    return Err(QbfError::Tautology(j + 1));
                }
                if !lits.contains(&lit) {
                    lits.push(lit);
                }
            }
            normalized.push(lits);
        }
        Ok(Qbf { prefix, clauses: normalized })
    }

    pub fn prefix(&self) -> &[(Quantifier, u32)] {
        &self.prefix
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn variable_count(&self) -> usize {
        self.prefix.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn universal_count(&self) -> usize {
        self.prefix.iter().filter(|(q, _)| *q == Quantifier::Forall).count()
    }

    /// Position of `var` in the prefix.
    pub fn position(&self, var: u32) -> Option<usize> {
        self.prefix.iter().position(|&(_, v)| v == var)
    }

    /// Writes QDIMACS with consecutive equal quantifiers merged into one line.
    pub fn to_qdimacs(&self) -> String {
        let max_var = self.prefix.iter().map(|&(_, v)| v).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", max_var, self.clauses.len());
        let mut i = 0;
        while i < self.prefix.len() {
            let q = self.prefix[i].0;
            out.push(if q == Quantifier::Exists { 'e' } else { 'a' });
            while i < self.prefix.len() && self.prefix[i].0 == q {
                let _ = write!(out, " {}", self.prefix[i].1);
                i += 1;
            }
            out.push_str(" 0\n");
        }
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct QdimacsError {
    pub line: usize,
    pub kind: QdimacsErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QdimacsErrorKind {
    #[error("missing `p cnf` problem line")]
    MissingProblemLine,
    #[error("malformed problem line, expected `p cnf <vars> <clauses>`")]
    MalformedProblemLine,
    #[error("`{0}` is not an integer")]
    BadToken(String),
    #[error("variable {0} is quantified more than once")]
    DuplicateQuantification(u32),
    #[error("literal {literal} is outside the declared range 1..={vars}")]
    LiteralOutOfRange { literal: i64, vars: u32 },
    #[error("quantifier line after the first clause")]
    QuantifierAfterClauses,
    #[error("quantifier line is not terminated by 0")]
    UnterminatedQuantifier,
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("problem line declares {declared} clauses but {found} were given")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("{0}")]
    Invalid(QbfError),
}

/// Parses QDIMACS. Variables occurring in clauses without a quantifier are
/// bound existentially in front of the prefix, in ascending order.
pub fn parse_qdimacs(text: &str) -> Result<Qbf, QdimacsError> {
    let fail = |line, kind| QdimacsError { line, kind };
    let mut header: Option<(u32, usize)> = None;
    let mut prefix: Vec<(Quantifier, u32)> = Vec::new();
    let mut bound = BTreeSet::new();
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };
        if first.starts_with('c') {
            continue;
        }
        let Some((vars, _)) = header else {
            if first != "p" {
                return Err(fail(line, QdimacsErrorKind::MissingProblemLine));
            }
            if toks.len() != 4 || toks[1] != "cnf" {
                return Err(fail(line, QdimacsErrorKind::MalformedProblemLine));
            }
            let v = toks[2].parse::<u32>().map_err(|_| fail(line, QdimacsErrorKind::MalformedProblemLine))?;
            let c = toks[3].parse::<usize>().map_err(|_| fail(line, QdimacsErrorKind::MalformedProblemLine))?;
            header = Some((v, c));
            continue;
        };
        let int = |tok: &str| -> Result<i64, QdimacsError> {
            tok.parse::<i64>().map_err(|_| fail(line, QdimacsErrorKind::BadToken(tok.to_string())))
        };
        let check = |lit: i64| -> Result<i32, QdimacsError> {
            if lit.unsigned_abs() > vars as u64 {
                Err(fail(line, QdimacsErrorKind::LiteralOutOfRange { literal: lit, vars }))
            } else {
                Ok(lit as i32)
            }
        };
        match first {
            "p" => return Err(fail(line, QdimacsErrorKind::MalformedProblemLine)),
            "e" | "a" => {
                if !clauses.is_empty() || !current.is_empty() {
                    return Err(fail(line, QdimacsErrorKind::QuantifierAfterClauses));
                }
                if toks.last() != Some(&"0") {
                    return Err(fail(line, QdimacsErrorKind::UnterminatedQuantifier));
                }
                let q = if first == "e" { Quantifier::Exists } else { Quantifier::Forall };
                for tok in &toks[1..toks.len() - 1] {
                    let v = check(int(tok)?)?;
                    if v <= 0 {
                        return Err(fail(line, QdimacsErrorKind::LiteralOutOfRange { literal: v as i64, vars }));
                    }
                    if !bound.insert(v as u32) {
                        return Err(fail(line, QdimacsErrorKind::DuplicateQuantification(v as u32)));
                    }
                    prefix.push((q, v as u32));
                }
            }
            _ => {
                for tok in &toks {
                    let lit = check(int(tok)?)?;
                    if lit == 0 {
                        clauses.push(std::mem::take(&mut current));
                    } else {
                        current.push(lit);
                    }
                }
            }
        }
    }

    let (_, declared) = header.ok_or(fail(last, QdimacsErrorKind::MissingProblemLine))?;
    if !current.is_empty() {
        return Err(fail(last, QdimacsErrorKind::UnterminatedClause));
    }
    if clauses.len() != declared {
        return Err(fail(last, QdimacsErrorKind::ClauseCountMismatch { declared, found: clauses.len() }));
    }
    let free: BTreeSet<u32> =
        clauses.iter().flatten().map(|l| l.unsigned_abs()).filter(|v| !bound.contains(v)).collect();
    let mut full: Vec<(Quantifier, u32)> = free.into_iter().map(|v| (Quantifier::Exists, v)).collect();
    full.extend(prefix);
    Qbf::new(full, clauses).map_err(|e| fail(last, QdimacsErrorKind::Invalid(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quantifier::*;

    #[test]
    fn parses_prefix_and_clause() {
        let q = parse_qdimacs("p cnf 2 1\ne 1 0\na 2 0\n1 -2 0\n").unwrap();
        assert_eq!(q.prefix(), &[(Exists, 1), (Forall, 2)]);
        assert_eq!(q.clauses(), &[vec![1, -2]]);
    }

    #[test]
    fn free_variables_become_outer_existentials() {
        let q = parse_qdimacs("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(q.prefix(), &[(Exists, 1)]);
        let q = parse_qdimacs("c free 3\np cnf 3 2\na 2 0\n3 2 0\n-2 1 0\n").unwrap();
        assert_eq!(q.prefix(), &[(Exists, 1), (Exists, 3), (Forall, 2)]);
    }

    #[test]
    fn clauses_may_span_lines() {
        let q = parse_qdimacs("p cnf 3 2\ne 1 2 3 0\n1 2\n-3 0 2 0\n").unwrap();
        assert_eq!(q.clauses(), &[vec![1, 2, -3], vec![2]]);
    }

    #[test]
    fn diagnostics() {
        let kind = |t: &str| parse_qdimacs(t).unwrap_err().kind;
        assert_eq!(kind("p cnf 1 1\ne 1 0\ne 1 0\n1 0\n"), QdimacsErrorKind::DuplicateQuantification(1));
        assert_eq!(kind("e 1 0\n"), QdimacsErrorKind::MissingProblemLine);
        assert_eq!(kind(""), QdimacsErrorKind::MissingProblemLine);
        assert_eq!(kind("p cnf 1 1\n2 0\n"), QdimacsErrorKind::LiteralOutOfRange { literal: 2, vars: 1 });
        assert_eq!(kind("p cnf 1 1\ne 3 0\n1 0\n"), QdimacsErrorKind::LiteralOutOfRange { literal: 3, vars: 1 });
        assert_eq!(kind("p cnf 2 1\n1 0\ne 2 0\n"), QdimacsErrorKind::QuantifierAfterClauses);
        assert_eq!(kind("p cnf 1 1\ne 1\n1 0\n"), QdimacsErrorKind::UnterminatedQuantifier);
        assert_eq!(kind("p cnf 1 1\n1\n"), QdimacsErrorKind::UnterminatedClause);
        assert_eq!(kind("p cnf 1 2\n1 0\n"), QdimacsErrorKind::ClauseCountMismatch { declared: 2, found: 1 });
        assert_eq!(kind("p cnf 1 1\nx 0\n"), QdimacsErrorKind::BadToken("x".into()));
        assert_eq!(kind("p cnf 1 1\n1 -1 0\n"), QdimacsErrorKind::Invalid(QbfError::Tautology(1)));
        assert_eq!(kind("p cnf 1 0\ne 1 0\n"), QdimacsErrorKind::Invalid(QbfError::NoClauses));
        assert_eq!(kind("p dnf 1 1\n"), QdimacsErrorKind::MalformedProblemLine);
    }

    #[test]
    fn constructor_invariants() {
        assert_eq!(Qbf::new(vec![(Exists, 1)], vec![vec![2]]), Err(QbfError::UnboundLiteral(2)));
        assert_eq!(Qbf::new(vec![(Exists, 1), (Forall, 1)], vec![vec![1]]), Err(QbfError::DuplicateQuantification(1)));
        let q = Qbf::new(vec![(Exists, 1)], vec![vec![1, 1]]).unwrap();
        assert_eq!(q.clauses(), &[vec![1]]);
    }

    #[test]
    fn qdimacs_roundtrip() {
        let q = Qbf::new(
            vec![(Exists, 1), (Forall, 2), (Exists, 3)],
            vec![vec![1, -2, -3], vec![-1, 2, -3], vec![1, -2, 3]],
        )
        .unwrap();
        assert_eq!(parse_qdimacs(&q.to_qdimacs()).unwrap(), q);
    }
}
