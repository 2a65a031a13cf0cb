//! OpenQASM 2.0 export and import for the gate set `p`, `ry`, `x`, `h`, `cp`.

use std::fmt::Write;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;

/// One gate per line; angles carry 17 significant digits so the text round-trips exactly.
pub fn export_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.n_qubits());
    for gate in circuit.gates() {
        let _ = match *gate {
            GateOp::P { target, phi } => writeln!(out, "p({phi:.16e}) q[{target}];"),
            GateOp::Ry { target, phi } => writeln!(out, "ry({phi:.16e}) q[{target}];"),
            GateOp::X { target } => writeln!(out, "x q[{target}];"),
            GateOp::H { target } => writeln!(out, "h q[{target}];"),
            GateOp::CP {
                control,
                target,
                phi,
            } => writeln!(out, "cp({phi:.16e}) q[{control}],q[{target}];"),
        };
    }
    out
}

/// Parses the subset written by [`export_qasm`]; `u1`/`cu1` are read as `p`/`cp`
/// and angle arguments may be arithmetic in `pi`.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Qasm {
            line: line_no,
            message,
        };
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err("missing `;`".into()))?
            .trim();
        if let Some(rest) = stmt.strip_prefix("qreg") {
            if circuit.is_some() {
                return Err(err("only one register is supported".into()));
            }
            let (name, size) = parse_operand(rest.trim()).map_err(err)?;
            if name != "q" {
                return Err(err(format!("register must be named `q`, got `{name}`")));
            }
            circuit = Some(Circuit::new(size));
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("gate before `qreg` declaration".into()))?;
        let gate = parse_gate(stmt).map_err(err)?;
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Qasm {
        line: text.lines().count(),
        message: "no `qreg` declaration".into(),
    })
}

fn parse_gate(stmt: &str) -> std::result::Result<GateOp, String> {
    let (head, operands) = match stmt.rfind(')') {
        Some(close) => (&stmt[..=close], &stmt[close + 1..]),
        None => stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| format!("malformed statement `{stmt}`"))?,
    };
    let (name, angle) = match head.split_once('(') {
        Some((name, arg)) => {
            let arg = arg.strip_suffix(')').ok_or("unbalanced parentheses")?;
            (name.trim(), Some(eval_expr(arg)?))
        }
        None => (head.trim(), None),
    };
    let qubits = operands
        .split(',')
        .map(|op| {
            let (reg, idx) = parse_operand(op.trim())?;
            if reg != "q" {
                return Err(format!("unknown register `{reg}`"));
            }
            Ok(idx)
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    let need = |count: usize, with_angle: bool| -> std::result::Result<f64, String> {
        if qubits.len() != count {
            return Err(format!("`{name}` takes {count} qubit operand(s)"));
        }
        match (with_angle, angle) {
            (true, Some(a)) => Ok(a),
            (false, None) => Ok(0.0),
            (true, None) => Err(format!("`{name}` needs an angle")),
            (false, Some(_)) => Err(format!("`{name}` takes no angle")),
        }
    };
    Ok(match name {
        "p" | "u1" => GateOp::P {
            phi: need(1, true)?,
            target: qubits[0],
        },
        "ry" => GateOp::Ry {
            phi: need(1, true)?,
            target: qubits[0],
        },
        "x" => {
            need(1, false)?;
            GateOp::X { target: qubits[0] }
        }
        "h" => {
            need(1, false)?;
            GateOp::H { target: qubits[0] }
        }
        "cp" | "cu1" => GateOp::CP {
            phi: need(2, true)?,
            control: qubits[0],
            target: qubits[1],
        },
        other => return Err(format!("unsupported gate `{other}`")),
    })
}

/// `name[index]`.
fn parse_operand(s: &str) -> std::result::Result<(&str, usize), String> {
    let (name, rest) = s
        .split_once('[')
        .ok_or_else(|| format!("expected `name[index]`, got `{s}`"))?;
    let idx = rest
        .strip_suffix(']')
        .ok_or_else(|| format!("unterminated index in `{s}`"))?
        .trim()
        .parse()
        .map_err(|_| format!("bad index in `{s}`"))?;
    Ok((name.trim(), idx))
}

/// Arithmetic over numbers and `pi` with `+ - * /`, unary minus, and parentheses.
fn eval_expr(src: &str) -> std::result::Result<f64, String> {
    let mut p = ExprParser {
        chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let v = p.sum()?;
    if p.pos != p.chars.len() {
        return Err(format!("trailing input in angle `{src}`"));
    }
    Ok(v)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            v = if op == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn product(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            v = if op == '*' { v * rhs } else { v / rhs };
        }
        Ok(v)
    }

    fn unary(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> std::result::Result<f64, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err("expected `)`".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "pi" => Ok(std::f64::consts::PI),
                    _ => Err(format!("unknown identifier `{word}`")),
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    let exponent_sign = (c == '+' || c == '-')
                        && matches!(self.chars.get(self.pos - 1), Some('e' | 'E'));
                    if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exponent_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                text.parse().map_err(|_| format!("bad number `{text}`"))
            }
            Some(c) => Err(format!("unexpected `{c}`")),
            None => Err("unexpected end of angle".into()),
        }
    }
}
