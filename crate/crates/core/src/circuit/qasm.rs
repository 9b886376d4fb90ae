//! Reader and writer for the OpenQASM 2.0 subset used by routing benchmarks:
//! one quantum register, any number of classical registers, the gates of
//! [`GateKind`], `measure` and `barrier`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unsupported gate `{name}`")]
    UnsupportedGate {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: unsupported statement `{keyword}`")]
    UnsupportedStatement {
        line: usize,
        col: usize,
        keyword: String,
    },
    #[error("{line}:{col}: index {index} out of bounds for register `{register}` of size {size}")]
    OutOfBounds {
        line: usize,
        col: usize,
        register: String,
        index: usize,
        size: usize,
    },
    #[error("{line}:{col}: unknown register `{name}`")]
    UnknownRegister {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: only one quantum register is supported")]
    MultipleQuantumRegisters { line: usize, col: usize },
    #[error("no quantum register declared")]
    MissingQuantumRegister,
    #[error("{line}:{col}: {source}")]
    InvalidGate {
        line: usize,
        col: usize,
        source: CircuitError,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Int(usize),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(&mut i, &mut col, 2);
            tokens.push(Token {
                tok: Tok::Arrow,
                line: tl,
                col: tc,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            tokens.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
        } else if c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let start = i;
            let mut real = false;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                real |= chars[i] == '.';
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if real {
                Tok::Num(s.parse().map_err(|_| QasmError::Syntax {
                    line: tl,
                    col: tc,
                    msg: format!("malformed number `{s}`"),
                })?)
            } else {
                Tok::Int(s.parse().map_err(|_| QasmError::Syntax {
                    line: tl,
                    col: tc,
                    msg: format!("malformed integer `{s}`"),
                })?)
            };
            tokens.push(Token {
                tok,
                line: tl,
                col: tc,
            });
        } else if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(QasmError::Syntax {
                    line: tl,
                    col: tc,
                    msg: "unterminated string".into(),
                });
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += s.chars().count() + 2;
            tokens.push(Token {
                tok: Tok::Str(s),
                line: tl,
                col: tc,
            });
        } else if ";,[](){}+-*/^=<>".contains(c) {
            advance(&mut i, &mut col, 1);
            tokens.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
        } else {
            return Err(QasmError::Syntax {
                line: tl,
                col: tc,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(tokens)
}

/// A reference to either one qubit/bit or a whole register.
#[derive(Debug, Clone, Copy)]
enum Operand {
    Single(usize),
    Register { size: usize, offset: usize },
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    qreg: Option<(String, usize)>,
    cregs: Vec<(String, usize, usize)>,
    circuit: Option<Circuit>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, QasmError> {
        let (line, col) = self.here();
        Err(QasmError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.syntax(format!("expected `{c}`")),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self) -> Result<String, QasmError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.syntax("expected identifier"),
        }
    }

    fn expect_int(&mut self) -> Result<usize, QasmError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.syntax("expected integer"),
        }
    }

    fn parse_program(&mut self) -> Result<Circuit, QasmError> {
        while self.peek().is_some() {
            self.parse_statement()?;
        }
        self.circuit.take().ok_or(QasmError::MissingQuantumRegister)
    }

    fn parse_statement(&mut self) -> Result<(), QasmError> {
        let (line, col) = self.here();
        let keyword = self.expect_ident()?;
        match keyword.as_str() {
            "OPENQASM" => {
                match self.next() {
                    Some(Tok::Num(_)) | Some(Tok::Int(_)) => {}
                    _ => return self.syntax("expected version number"),
                }
                self.expect_sym(';')
            }
            "include" => {
                match self.next() {
                    Some(Tok::Str(_)) => {}
                    _ => return self.syntax("expected file name string"),
                }
                self.expect_sym(';')
            }
            "qreg" => {
                let name = self.expect_ident()?;
                self.expect_sym('[')?;
                let size = self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if self.qreg.is_some() {
                    return Err(QasmError::MultipleQuantumRegisters { line, col });
                }
                if size == 0 {
                    return Err(QasmError::Syntax {
                        line,
                        col,
                        msg: "empty quantum register".into(),
                    });
                }
                let clbits = self.cregs.iter().map(|c| c.2).sum();
                let mut circuit = Circuit::with_clbits(size, clbits);
                circuit.set_register(name.clone());
                self.qreg = Some((name, size));
                self.circuit = Some(circuit);
                Ok(())
            }
            "creg" => {
                let name = self.expect_ident()?;
                self.expect_sym('[')?;
                let size = self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                let offset = self.cregs.iter().map(|c| c.2).sum();
                self.cregs.push((name, offset, size));
                if let Some(c) = self.circuit.as_mut() {
                    c.num_clbits = offset + size;
                }
                Ok(())
            }
            "measure" => {
                let (q, _) = self.parse_qubit_operand()?;
                if !matches!(self.next(), Some(Tok::Arrow)) {
                    return self.syntax("expected `->`");
                }
                let (c, _) = self.parse_clbit_operand()?;
                self.expect_sym(';')?;
                match (q, c) {
                    (Operand::Single(q), Operand::Single(c)) => {
                        self.add(Gate::measure(q, c), line, col)
                    }
                    (Operand::Register { size: n, .. }, Operand::Register { size: m, offset })
                        if n == m =>
                    {
                        for i in 0..n {
                            self.add(Gate::measure(i, offset + i), line, col)?;
                        }
                        Ok(())
                    }
                    _ => Err(QasmError::Syntax {
                        line,
                        col,
                        msg: "measure operands must both be bits or registers of equal size".into(),
                    }),
                }
            }
            "barrier" => {
                let mut qubits = Vec::new();
                loop {
                    match self.parse_qubit_operand()?.0 {
                        Operand::Single(q) => qubits.push(q),
                        Operand::Register { size, .. } => qubits.extend(0..size),
                    }
                    if !self.eat_sym(',') {
                        break;
                    }
                }
                self.expect_sym(';')?;
                qubits.dedup();
                self.add(Gate::barrier(qubits), line, col)
            }
            "gate" | "opaque" | "if" | "reset" => {
                Err(QasmError::UnsupportedStatement { line, col, keyword })
            }
            name => {
                let Some(kind) = GateKind::from_mnemonic(name) else {
                    return Err(QasmError::UnsupportedGate {
                        line,
                        col,
                        name: name.to_string(),
                    });
                };
                let mut params = Vec::new();
                if self.eat_sym('(') && !self.eat_sym(')') {
                    loop {
                        let (pl, pc) = self.here();
                        let v = self.parse_expr()?;
                        if !v.is_finite() {
                            return Err(QasmError::Syntax {
                                line: pl,
                                col: pc,
                                msg: "parameter is not finite".into(),
                            });
                        }
                        params.push(v);
                        if !self.eat_sym(',') {
                            break;
                        }
                    }
                    self.expect_sym(')')?;
                }
                let mut operands = Vec::new();
                loop {
                    operands.push(self.parse_qubit_operand()?.0);
                    if !self.eat_sym(',') {
                        break;
                    }
                }
                self.expect_sym(';')?;
                let broadcast = operands.iter().find_map(|o| match o {
                    Operand::Register { size, .. } => Some(*size),
                    Operand::Single(_) => None,
                });
                match broadcast {
                    None => {
                        let qubits = operands
                            .iter()
                            .map(|o| match o {
                                Operand::Single(q) => *q,
                                Operand::Register { .. } => unreachable!(),
                            })
                            .collect();
                        self.add(Gate::new(kind, qubits, params), line, col)
                    }
                    Some(n) if operands.len() == 1 => {
                        for q in 0..n {
                            self.add(Gate::new(kind, vec![q], params.clone()), line, col)?;
                        }
                        Ok(())
                    }
                    Some(_) => Err(QasmError::Syntax {
                        line,
                        col,
                        msg: "register broadcast is only supported for single-qubit gates".into(),
                    }),
                }
            }
        }
    }

    fn add(&mut self, gate: Gate, line: usize, col: usize) -> Result<(), QasmError> {
        let circuit = self
            .circuit
            .as_mut()
            .ok_or(QasmError::MissingQuantumRegister)?;
        circuit
            .try_push(gate)
            .map_err(|source| QasmError::InvalidGate { line, col, source })
    }

    fn parse_qubit_operand(&mut self) -> Result<(Operand, String), QasmError> {
        let (line, col) = self.here();
        let name = self.expect_ident()?;
        let Some((qname, size)) = self.qreg.clone() else {
            return Err(QasmError::UnknownRegister { line, col, name });
        };
        if name != qname {
            return Err(QasmError::UnknownRegister { line, col, name });
        }
        self.parse_index(name, size, 0, line, col)
    }

    fn parse_clbit_operand(&mut self) -> Result<(Operand, String), QasmError> {
        let (line, col) = self.here();
        let name = self.expect_ident()?;
        let Some((_, offset, size)) = self.cregs.iter().find(|c| c.0 == name).cloned() else {
            return Err(QasmError::UnknownRegister { line, col, name });
        };
        self.parse_index(name, size, offset, line, col)
    }

    fn parse_index(
        &mut self,
        register: String,
        size: usize,
        offset: usize,
        line: usize,
        col: usize,
    ) -> Result<(Operand, String), QasmError> {
        if self.eat_sym('[') {
            let index = self.expect_int()?;
            self.expect_sym(']')?;
            if index >= size {
                return Err(QasmError::OutOfBounds {
                    line,
                    col,
                    register,
                    index,
                    size,
                });
            }
            Ok((Operand::Single(offset + index), register))
        } else {
            Ok((Operand::Register { size, offset }, register))
        }
    }

    // expr := term (('+'|'-') term)*
    fn parse_expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.parse_term()?;
        loop {
            if self.eat_sym('+') {
                v += self.parse_term()?;
            } else if self.eat_sym('-') {
                v -= self.parse_term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn parse_term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.parse_unary()?;
        loop {
            if self.eat_sym('*') {
                v *= self.parse_unary()?;
            } else if self.eat_sym('/') {
                v /= self.parse_unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym('-') {
            Ok(-self.parse_unary()?)
        } else if self.eat_sym('+') {
            self.parse_unary()
        } else {
            let base = self.parse_atom()?;
            if self.eat_sym('^') {
                Ok(base.powf(self.parse_unary()?))
            } else {
                Ok(base)
            }
        }
    }

    fn parse_atom(&mut self) -> Result<f64, QasmError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(v as f64)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.parse_expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "pi" {
                    return Ok(PI);
                }
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => {
                        self.pos -= 1;
                        return self.syntax(format!("unknown identifier `{name}` in expression"));
                    }
                };
                self.expect_sym('(')?;
                let v = self.parse_expr()?;
                self.expect_sym(')')?;
                Ok(f(v))
            }
            _ => self.syntax("expected expression"),
        }
    }
}

/// Parses an OpenQASM 2.0 program. The `OPENQASM` header and `include` line
/// are optional.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let tokens = lex(text)?;
    let end = tokens.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
        qreg: None,
        cregs: Vec::new(),
        circuit: None,
    };
    parser.parse_program()
}

/// Writes the circuit as OpenQASM 2.0, one statement per line. Classical
/// registers are flattened into a single register.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    let qreg = circuit.register();
    let creg = if qreg == "c" { "meas" } else { "c" };
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg {qreg}[{}];", circuit.num_qubits());
    if circuit.num_clbits() > 0 {
        let _ = writeln!(out, "creg {creg}[{}];", circuit.num_clbits());
    }
    for gate in circuit.gates() {
        match gate.kind {
            GateKind::Measure => {
                let _ = writeln!(
                    out,
                    "measure {qreg}[{}] -> {creg}[{}];",
                    gate.qubits[0],
                    gate.clbit.expect("measure carries a classical bit")
                );
            }
            _ => {
                out.push_str(gate.kind.mnemonic());
                if !gate.params.is_empty() {
                    out.push('(');
                    for (i, p) in gate.params.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        let _ = write!(out, "{p}");
                    }
                    out.push(')');
                }
                out.push(' ');
                for (i, q) in gate.qubits.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{qreg}[{q}]");
                }
                out.push_str(";\n");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_programs() {
        let c = parse_qasm("qreg q[2]; cx q[0],q[1];").unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.gates(), &[Gate::cx(0, 1)]);

        let c = parse_qasm("qreg q[1]; h q[0];").unwrap();
        assert_eq!(c.num_qubits(), 1);
        assert_eq!(c.gates(), &[Gate::h(0)]);
    }

    #[test]
    fn full_header_params_and_measure() {
        let text = r#"OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg a[1];
creg b[2];
// a comment
u3(pi/2, -pi/4, 0.5*pi) q[0];
rz(-0.25) q[2];
tdg q[1];
measure q[2] -> b[1];
barrier q;
"#;
        let c = parse_qasm(text).unwrap();
        assert_eq!(c.num_clbits(), 3);
        let g = &c.gates()[0];
        assert_eq!(g.kind, GateKind::U3);
        assert_eq!(g.params, vec![PI / 2.0, -PI / 4.0, 0.5 * PI]);
        assert_eq!(c.gates()[1].params, vec![-0.25]);
        assert_eq!(c.gates()[2].kind, GateKind::Tdg);
        assert_eq!(c.gates()[3], Gate::measure(2, 2));
        assert_eq!(c.gates()[4], Gate::barrier(vec![0, 1, 2]));
    }

    #[test]
    fn broadcast_single_qubit_gate() {
        let c = parse_qasm("qreg q[3]; h q;").unwrap();
        assert_eq!(c.gates(), &[Gate::h(0), Gate::h(1), Gate::h(2)]);
    }

    #[test]
    fn errors_carry_position_and_offender() {
        match parse_qasm("qreg q[2];\ncx q[0] q[1];") {
            Err(QasmError::Syntax {
                line: 2, col: 9, ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_qasm("qreg q[3];\nccx q[0],q[1],q[2];") {
            Err(QasmError::UnsupportedGate { name, line: 2, .. }) => assert_eq!(name, "ccx"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_qasm("qreg q[2];\ncx q[0],q[2];"),
            Err(QasmError::OutOfBounds {
                index: 2,
                size: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2];\nqreg r[2];"),
            Err(QasmError::MultipleQuantumRegisters { .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2];\ngate foo a { h a; }"),
            Err(QasmError::UnsupportedStatement { .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2];\ncx q[1],q[1];"),
            Err(QasmError::InvalidGate { .. })
        ));
        assert!(matches!(
            parse_qasm("h q[0];"),
            Err(QasmError::UnknownRegister { .. })
        ));
    }

    #[test]
    fn emit_cx_and_empty() {
        let mut c = Circuit::new(2);
        c.push(Gate::cx(0, 1));
        let text = emit_qasm(&c);
        assert_eq!(text.matches("cx ").count(), 1);
        assert!(text.contains("cx q[0],q[1];\n"));

        let empty = emit_qasm(&Circuit::new(3));
        assert_eq!(
            empty,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n"
        );
        assert_eq!(parse_qasm(&empty).unwrap(), Circuit::new(3));
    }
}
