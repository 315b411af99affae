//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! k 5
//! problem selection-full i=3
//! interval 1 (0,5)
//! interval 2 {3}
//! set S 1 2
//! value 1 7/2
//! ```
//!
//! Without `set` lines the family is a single set `S` holding every element.
//! Values are optional, but if any non-trivial element has one, all must.

use std::fmt::Write as _;

use crate::instance::{ElementId, Instance, NamedSet, ProblemKind, Realization};
use crate::interval::{Bounds, UncertainInterval};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A whitespace-separated word with its 1-based column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

/// A non-empty, comment-stripped line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn error(&self, token: usize, message: impl Into<String>) -> ParseError {
        let column = self
            .tokens
            .get(token)
            .map(|t| t.column)
            .unwrap_or_else(|| self.tokens.last().map_or(1, |t| t.column + t.text.len()));
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    pub fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    pub fn arg(&self, i: usize) -> Result<&'a str, ParseError> {
        self.tokens
            .get(i)
            .map(|t| t.text)
            .ok_or_else(|| self.error(i, format!("`{}` needs more arguments", self.keyword())))
    }

    /// Parses `key=value` tokens starting at `from`.
    pub fn key_values(&self, from: usize) -> Result<Vec<(&'a str, &'a str)>, ParseError> {
        (from..self.tokens.len())
            .map(|i| {
                self.tokens[i]
                    .text
                    .split_once('=')
                    .ok_or_else(|| self.error(i, "expected key=value"))
            })
            .collect()
    }
}

/// Splits text into lines of tokens, dropping blanks and `#` comments.
pub fn lex(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(n, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..pos],
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line { number: n + 1, tokens })
    })
}

fn parse_problem(line: &Line<'_>) -> Result<ProblemKind, ParseError> {
    let word = line.arg(1)?;
    let opts = line.key_values(2)?;
    let mut rank = None;
    for (i, (key, val)) in opts.iter().enumerate() {
        if *key != "i" {
            return Err(line.error(i + 2, format!("unknown problem option `{key}`")));
        }
        rank = Some(
            val.parse::<usize>()
                .map_err(|_| line.error(i + 2, format!("bad rank `{val}`")))?,
        );
    }
    let kind = match (word, rank) {
        ("sorting", None) => ProblemKind::Sorting,
        ("minimum", None) => ProblemKind::Minimum,
        ("selection-value", Some(rank)) => ProblemKind::SelectionValue { rank },
        ("selection-full", Some(rank)) => ProblemKind::SelectionFull { rank },
        ("selection-value" | "selection-full", None) => return Err(line.error(1, "selection problems need i=<rank>")),
        ("sorting" | "minimum", Some(_)) => return Err(line.error(2, "only selection problems take a rank")),
        _ => return Err(line.error(1, format!("unknown problem `{word}`"))),
    };
    Ok(kind)
}

fn parse_id(line: &Line<'_>, i: usize) -> Result<u32, ParseError> {
    let text = line.arg(i)?;
    text.parse::<u32>()
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| line.error(i, format!("bad element id `{text}`")))
}

/// Parses an instance file, with its realization if values are present.
pub fn parse_instance(text: &str) -> Result<(Instance, Option<Realization>), ParseError> {
    let mut k: Option<(usize, usize)> = None;
    let mut problem: Option<(ProblemKind, usize)> = None;
    let mut intervals: Vec<Option<(UncertainInterval, usize)>> = Vec::new();
    let mut sets: Vec<NamedSet> = Vec::new();
    let mut values: Vec<Option<Rational>> = Vec::new();
    let mut last_line = 0;

    for line in lex(text) {
        last_line = line.number;
        let expect_len = |n: usize| {
            if line.tokens.len() > n {
                Err(line.error(n, "unexpected trailing token"))
            } else {
                Ok(())
            }
        };
        match line.keyword() {
            "k" => {
                expect_len(2)?;
                if k.is_some() {
                    return Err(line.error(0, "duplicate `k`"));
                }
                let v = line
                    .arg(1)?
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| line.error(1, "k must be a positive integer"))?;
                k = Some((v, line.number));
            }
            "problem" => {
                if problem.is_some() {
                    return Err(line.error(0, "duplicate `problem`"));
                }
                problem = Some((parse_problem(&line)?, line.number));
            }
            "interval" => {
                expect_len(3)?;
                let id = parse_id(&line, 1)? as usize;
                let iv: UncertainInterval = line.arg(2)?.parse().map_err(|e| line.error(2, format!("{e}")))?;
                if intervals.len() < id {
                    intervals.resize(id, None);
                }
                if intervals[id - 1].is_some() {
                    return Err(line.error(1, format!("element {id} defined twice")));
                }
                intervals[id - 1] = Some((iv, line.number));
            }
            "set" => {
                let name = line.arg(1)?.to_string();
                let members = (2..line.tokens.len())
                    .map(|i| parse_id(&line, i).map(ElementId))
                    .collect::<Result<Vec<_>, _>>()?;
                if members.is_empty() {
                    return Err(line.error(2, format!("set `{name}` is empty")));
                }
                sets.push(NamedSet { name, members });
            }
            "value" => {
                expect_len(3)?;
                let id = parse_id(&line, 1)? as usize;
                let v: Rational = line.arg(2)?.parse().map_err(|e| line.error(2, format!("{e}")))?;
                if values.len() < id {
                    values.resize(id, None);
                }
                if values[id - 1].replace(v).is_some() {
                    return Err(line.error(1, format!("value for {id} given twice")));
                }
            }
            other => return Err(line.error(0, format!("unknown directive `{other}`"))),
        }
    }

    let at_end = |message: String| ParseError {
        line: last_line.max(1),
        column: 1,
        message,
    };
    let (k, _) = k.ok_or_else(|| at_end("missing `k`".into()))?;
    let (problem, problem_line) = problem.ok_or_else(|| at_end("missing `problem`".into()))?;
    let intervals = intervals
        .into_iter()
        .enumerate()
        .map(|(i, slot)| {
            slot.map(|(iv, _)| iv)
                .ok_or_else(|| at_end(format!("element {} is missing", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() > intervals.len() {
        return Err(at_end(format!("value for undefined element {}", values.len())));
    }
    let instance = if sets.is_empty() {
        Instance::single_set(intervals, problem, k)
    } else {
        Instance::new(intervals, sets, problem, k)
    }
    .map_err(|e| ParseError {
        line: problem_line,
        column: 1,
        message: e.to_string(),
    })?;

    if values.iter().all(Option::is_none) {
        return Ok((instance, None));
    }
    values.resize(instance.n(), None);
    let filled = values
        .into_iter()
        .zip(instance.intervals())
        .enumerate()
        .map(|(i, (v, iv))| match v {
            Some(v) => Ok(v),
            None if iv.is_trivial() => Ok(iv.lower().clone()),
            None => Err(at_end(format!("missing value for element {}", i + 1))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let realization = Realization::new(&instance, filled).map_err(|e| at_end(e.to_string()))?;
    Ok((instance, Some(realization)))
}

/// Canonical text form; `parse_instance` reads it back unchanged.
pub fn serialize_instance(instance: &Instance, realization: Option<&Realization>) -> String {
    let mut out = String::new();
    writeln!(out, "k {}", instance.k()).unwrap();
    writeln!(out, "problem {}", instance.problem()).unwrap();
    for (idx, iv) in instance.intervals().iter().enumerate() {
        writeln!(out, "interval {} {iv}", idx + 1).unwrap();
    }
    for set in instance.sets() {
        write!(out, "set {}", set.name).unwrap();
        for id in &set.members {
            write!(out, " {id}").unwrap();
        }
        out.push('\n');
    }
    if let Some(r) = realization {
        for (idx, v) in r.values().iter().enumerate() {
            writeln!(out, "value {} {v}", idx + 1).unwrap();
        }
    }
    out
}
