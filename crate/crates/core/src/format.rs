//! Line-based circuit text format.
//!
//! ```text
//! # comment
//! wires 3
//! mixed 2       # optional, DQC1 instances only
//! measure 1     # optional, DQC1 instances only
//! mcx0 1 2 0
//! h 1
//! cx 1 0
//! ```
//!
//! Headers come before the first gate. Mnemonics are case-insensitive; the last
//! wire of a gate line is its target (both wires for `swap`).

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Dqc1Instance, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("missing `wires` header")]
    MissingWires,
    #[error("wire {wire} out of range for {wires} wires")]
    WireOutOfRange { wire: usize, wires: usize },
    #[error("duplicate wire {wire} within a gate")]
    DuplicateWire { wire: usize },
    #[error(transparent)]
    Invalid(CircuitError),
}

/// A parsed circuit file: the circuit plus any DQC1 headers that were present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitDocument {
    pub circuit: Circuit,
    pub mixed: Option<usize>,
    pub measure: Option<usize>,
}

impl CircuitDocument {
    /// Builds the DQC1 instance, defaulting to `mixed = wires - 1` and `measure = 1`.
    pub fn into_instance(self) -> Result<Dqc1Instance, CircuitError> {
        let mixed = self.mixed.unwrap_or(self.circuit.wires() - 1);
        Dqc1Instance::new(self.circuit, mixed, self.measure.unwrap_or(1))
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn integer(tok: &Token<'_>, line: usize) -> Result<usize, ParseError> {
    tok.text.parse::<usize>().map_err(|_| {
        err(
            line,
            tok.column,
            ParseErrorKind::Syntax(format!("expected a non-negative integer, found `{}`", tok.text)),
        )
    })
}

pub fn parse_document(text: &str) -> Result<CircuitDocument, ParseError> {
    let mut wires: Option<usize> = None;
    let mut mixed = None;
    let mut measure = None;
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else {
            continue;
        };
        let word = head.text.to_ascii_lowercase();

        if matches!(word.as_str(), "wires" | "mixed" | "measure") {
            if toks.len() != 2 {
                return Err(err(
                    lineno,
                    head.column,
                    ParseErrorKind::Syntax(format!("`{word}` takes exactly one integer")),
                ));
            }
            if !gates.is_empty() {
                return Err(err(
                    lineno,
                    head.column,
                    ParseErrorKind::Syntax(format!("`{word}` header after the first gate")),
                ));
            }
            let value = integer(&toks[1], lineno)?;
            let slot = match word.as_str() {
                "wires" => &mut wires,
                "mixed" => &mut mixed,
                _ => &mut measure,
            };
            if slot.is_some() {
                return Err(err(
                    lineno,
                    head.column,
                    ParseErrorKind::Syntax(format!("duplicate `{word}` header")),
                ));
            }
            if word == "wires" && value == 0 {
                return Err(err(
                    lineno,
                    toks[1].column,
                    ParseErrorKind::Syntax("`wires` must be positive".into()),
                ));
            }
            *slot = Some(value);
            continue;
        }

        let Some(n_wires) = wires else {
            return Err(err(lineno, head.column, ParseErrorKind::MissingWires));
        };
        let kind = GateKind::from_mnemonic(head.text).ok_or_else(|| {
            err(
                lineno,
                head.column,
                ParseErrorKind::Syntax(format!("unknown gate `{}`", head.text)),
            )
        })?;

        let operands = &toks[1..];
        let expected = match kind {
            GateKind::H
            | GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::Tdg => Some(1),
            GateKind::CX | GateKind::CZ | GateKind::Swap => Some(2),
            GateKind::CCX => Some(3),
            GateKind::MCX | GateKind::MCX0 => None,
        };
        match expected {
            Some(k) if operands.len() != k => {
                return Err(err(
                    lineno,
                    head.column,
                    ParseErrorKind::Syntax(format!("`{}` takes {k} wire(s), found {}", kind, operands.len())),
                ));
            }
            None if operands.len() < 2 => {
                return Err(err(
                    lineno,
                    head.column,
                    ParseErrorKind::Syntax(format!("`{kind}` needs at least one control and a target")),
                ));
            }
            _ => {}
        }

        let mut ws = Vec::with_capacity(operands.len());
        for (i, tok) in operands.iter().enumerate() {
            let w = integer(tok, lineno)?;
            if w >= n_wires {
                return Err(err(
                    lineno,
                    tok.column,
                    ParseErrorKind::WireOutOfRange {
                        wire: w,
                        wires: n_wires,
                    },
                ));
            }
            if ws.contains(&w) {
                return Err(err(
                    lineno,
                    operands[i].column,
                    ParseErrorKind::DuplicateWire { wire: w },
                ));
            }
            ws.push(w);
        }

        let (controls, targets) = match kind {
            GateKind::Swap => (vec![], ws),
            _ => {
                let t = ws.pop().expect("arity checked");
                (ws, vec![t])
            }
        };
        let gate =
            Gate::new(kind, controls, targets).map_err(|e| err(lineno, head.column, ParseErrorKind::Invalid(e)))?;
        gates.push(gate);
    }

    let wires = wires.ok_or_else(|| err(text.lines().count().max(1), 1, ParseErrorKind::MissingWires))?;
    let circuit = Circuit::new(wires, gates).map_err(|e| err(1, 1, ParseErrorKind::Invalid(e)))?;
    Ok(CircuitDocument {
        circuit,
        mixed,
        measure,
    })
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    parse_document(text).map(|d| d.circuit)
}

/// Parses a file into a DQC1 instance; header-level inconsistencies are reported at line 1.
pub fn parse_instance(text: &str) -> Result<Dqc1Instance, ParseError> {
    parse_document(text)?
        .into_instance()
        .map_err(|e| err(1, 1, ParseErrorKind::Invalid(e)))
}

pub fn format_circuit(circuit: &Circuit) -> String {
    let mut out = format!("wires {}\n", circuit.wires());
    write_gates(&mut out, circuit);
    out
}

pub fn format_instance(instance: &Dqc1Instance) -> String {
    let mut out = format!(
        "wires {}\nmixed {}\nmeasure {}\n",
        instance.wires(),
        instance.mixed_width(),
        instance.measured_width()
    );
    write_gates(&mut out, instance.circuit());
    out
}

fn write_gates(out: &mut String, circuit: &Circuit) {
    for g in circuit.gates() {
        writeln!(out, "{g}").expect("writing to a String");
    }
}
