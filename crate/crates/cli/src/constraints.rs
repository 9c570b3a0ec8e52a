//! Line-oriented constraint files.
//!
//! ```text
//! # two independent fair coins
//! events 2
//! P(1) = 1/2
//! P(2) = 0.5
//! P(1,2) = 1/4
//! ```
//!
//! `events N` must come before any assignment and appear once. Indices are
//! 1-based and strictly increasing inside `P(...)`. Values are integers,
//! fractions `a/b`, or decimals (converted exactly).

use std::fmt;

use boolebell::event::MAX_EVENTS;
use boolebell::rational::{is_probability, parse_rational, Rational};
use boolebell::{EventSet, ProbabilityAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Code {
    EventsNotDeclared,
    EventsRedeclared,
    Syntax,
    DecreasingIndices,
    IndexOutOfRange,
    DuplicateSubset,
    ValueOutOfRange,
    BadRational,
    BadEventCount,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::EventsNotDeclared => "E001",
            Code::EventsRedeclared => "E002",
            Code::Syntax => "E003",
            Code::DecreasingIndices => "E004",
            Code::IndexOutOfRange => "E005",
            Code::DuplicateSubset => "E006",
            Code::ValueOutOfRange => "E007",
            Code::BadRational => "E008",
            Code::BadEventCount => "E009",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub code: Code,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {} {}", self.line, self.column, self.code.as_str(), self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub subset: EventSet,
    pub value: Rational,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintFile {
    pub events: usize,
    pub assignments: Vec<Assignment>,
}

impl ConstraintFile {
    pub fn to_assignment(&self) -> boolebell::Result<ProbabilityAssignment> {
        ProbabilityAssignment::from_pairs(
            self.events,
            self.assignments.iter().map(|a| (a.subset, a.value.clone())),
        )
    }
}

/// A cursor over one line, tracking 1-based character columns.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }
}

struct Parser {
    events: Option<(usize, usize)>,
    assignments: Vec<Assignment>,
    diagnostics: Vec<Diagnostic>,
}

impl Parser {
    fn error(&mut self, line: usize, column: usize, code: Code, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            line,
            column,
            code,
            message: message.into(),
        });
    }

    fn events_line(&mut self, line: usize, cur: &mut Cursor) {
        cur.skip_ws();
        let col = cur.column();
        let digits = cur.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() || !cur.at_end() {
            self.error(line, col, Code::Syntax, "expected `events <count>`");
            return;
        }
        if let Some((_, first)) = self.events {
            self.error(line, 1, Code::EventsRedeclared, format!("events redeclared (first declared on line {first})"));
            return;
        }
        match digits.parse::<usize>() {
            Ok(n) if (1..=MAX_EVENTS).contains(&n) => self.events = Some((n, line)),
            _ => self.error(line, col, Code::BadEventCount, format!("event count must be in 1..={MAX_EVENTS}")),
        }
    }

    fn assign_line(&mut self, line: usize, cur: &mut Cursor) {
        let Some((n, _)) = self.events else {
            self.error(line, 1, Code::EventsNotDeclared, "events not declared");
            return;
        };
        if !cur.eat('(') {
            self.error(line, cur.column(), Code::Syntax, "expected `(` after `P`");
            return;
        }
        let mut indices: Vec<(usize, usize)> = Vec::new();
        loop {
            cur.skip_ws();
            let col = cur.column();
            let digits = cur.take_while(|c| c.is_ascii_digit());
            let Ok(i) = digits.parse::<usize>() else {
                self.error(line, col, Code::Syntax, "expected an event index");
                return;
            };
            indices.push((i, col));
            if cur.eat(')') {
                break;
            }
            if !cur.eat(',') {
                self.error(line, cur.column(), Code::Syntax, "expected `,` or `)`");
                return;
            }
        }
        for &(i, col) in &indices {
            if i == 0 || i > n {
                self.error(line, col, Code::IndexOutOfRange, format!("index {i} outside 1..={n}"));
                return;
            }
        }
        if let Some(w) = indices.windows(2).find(|w| w[1].0 <= w[0].0) {
            self.error(line, w[1].1, Code::DecreasingIndices, "indices must be strictly increasing");
            return;
        }
        if !cur.eat('=') {
            self.error(line, cur.column(), Code::Syntax, "expected `=`");
            return;
        }
        cur.skip_ws();
        let col = cur.column();
        let literal = cur.text[cur.pos..].trim_end();
        let value = match parse_rational(literal) {
            Ok(v) => v,
            Err(_) => {
                self.error(line, col, Code::BadRational, format!("invalid value `{literal}`"));
                return;
            }
        };
        if !is_probability(&value) {
            self.error(line, col, Code::ValueOutOfRange, format!("value {value} outside [0, 1]"));
            return;
        }
        let idx: Vec<usize> = indices.iter().map(|&(i, _)| i).collect();
        let subset = EventSet::new(&idx).expect("indices validated");
        if let Some(prev) = self.assignments.iter().find(|a| a.subset == subset) {
            self.error(
                line,
                1,
                Code::DuplicateSubset,
                format!("duplicate subset {subset} (first assigned on line {})", prev.line),
            );
            return;
        }
        self.assignments.push(Assignment { subset, value, line });
    }
}

pub fn parse_constraints(text: &str) -> Result<ConstraintFile, Vec<Diagnostic>> {
    let mut p = Parser {
        events: None,
        assignments: Vec::new(),
        diagnostics: Vec::new(),
    };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor { text: content, pos: 0 };
        if cur.at_end() {
            continue;
        }
        let start = cur.column();
        let word = cur.take_while(|c| c.is_ascii_alphabetic());
        match word {
            "events" => p.events_line(line, &mut cur),
            "P" => p.assign_line(line, &mut cur),
            _ => p.error(line, start, Code::Syntax, "expected `events <count>` or `P(...) = value`"),
        }
    }
    if p.events.is_none() && p.diagnostics.is_empty() {
        p.error(1, 1, Code::EventsNotDeclared, "events not declared");
    }
    if !p.diagnostics.is_empty() {
        return Err(p.diagnostics);
    }
    Ok(ConstraintFile {
        events: p.events.expect("checked").0,
        assignments: p.assignments,
    })
}
