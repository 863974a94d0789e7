//! Recursive-descent parser for eQASM assembly text. One statement per
//! line; `#` starts a comment; labels end with `:` and may share a line
//! with an instruction. Mnemonics and register names are case
//! insensitive. Quantum mnemonics come from the instantiation
//! configuration, so the same parser serves any instantiation.

use std::collections::HashMap;

use eqasm_core::{
    ArithOp, BranchTarget, BundleSlot, CmpFlag, Gpr, InstantiationConfig, Instruction, LogicOp,
    QOpKind, RegRef, SReg, TReg,
};

use crate::diag::Diagnostic;

/// A parsed statement with its source line for later diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub instr: Instruction,
    pub line: usize,
}

/// A parsed program. `labels` maps a label to the index of the statement
/// it precedes; a label at the end of the file maps to `statements.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceProgram {
    pub statements: Vec<Statement>,
    pub labels: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Comma,
    Pipe,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(v) => format!("'{v}'"),
            Tok::Comma => "','".into(),
            Tok::Pipe => "'|'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Colon => "':'".into(),
        }
    }
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, Diagnostic> {
    let mut tokens = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            '#' => break,
            ' ' | '\t' | '\r' => i += 1,
            ',' => {
                tokens.push((Tok::Comma, col));
                i += 1;
            }
            '|' => {
                tokens.push((Tok::Pipe, col));
                i += 1;
            }
            '{' => {
                tokens.push((Tok::LBrace, col));
                i += 1;
            }
            '}' => {
                tokens.push((Tok::RBrace, col));
                i += 1;
            }
            '(' => {
                tokens.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                tokens.push((Tok::RParen, col));
                i += 1;
            }
            ':' => {
                tokens.push((Tok::Colon, col));
                i += 1;
            }
            '-' | '0'..='9' => {
                let start = i;
                if c == '-' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(Diagnostic::new(line_no, col, "expected digits after '-'"));
                    }
                }
                let negative = c == '-';
                let digits_start = i;
                let radix = if line[i..].starts_with("0x") || line[i..].starts_with("0X") {
                    i += 2;
                    16
                } else {
                    10
                };
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let digits = if radix == 16 {
                    &line[digits_start + 2..i]
                } else {
                    &line[digits_start..i]
                };
                let digits = digits.replace('_', "");
                let value = i64::from_str_radix(&digits, radix).map_err(|_| {
                    Diagnostic::new(line_no, col, format!("bad integer '{}'", &line[start..i]))
                })?;
                let value = if negative { -value } else { value };
                tokens.push((Tok::Int(value), col));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((Tok::Ident(line[start..i].to_string()), col));
            }
            other => {
                return Err(Diagnostic::new(
                    line_no,
                    col,
                    format!("unexpected character '{other}'"),
                ));
            }
        }
    }
    Ok(tokens)
}

struct LineParser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    cfg: &'a InstantiationConfig,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, c)| c)
            .unwrap_or_else(|| self.tokens.last().map(|&(_, c)| c + 1).unwrap_or(1))
    }

    fn err(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.line, self.col(), message)
    }

    fn next(&mut self) -> Option<Tok> {
        let tok = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok) -> Result<(), Diagnostic> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Diagnostic::new(
                self.line,
                self.tokens[self.pos - 1].1,
                format!("expected {} but found {}", want.describe(), t.describe()),
            )),
            None => Err(self.err(format!("expected {} at end of line", want.describe()))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), Diagnostic> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok((s, col)),
            Some(t) => Err(Diagnostic::new(
                self.line,
                col,
                format!("expected {what} but found {}", t.describe()),
            )),
            None => Err(self.err(format!("expected {what} at end of line"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<(i64, usize), Diagnostic> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(v)) => Ok((v, col)),
            Some(t) => Err(Diagnostic::new(
                self.line,
                col,
                format!("expected {what} but found {}", t.describe()),
            )),
            None => Err(self.err(format!("expected {what} at end of line"))),
        }
    }

    fn reg(&mut self, prefix: char, count: u8, what: &str) -> Result<u8, Diagnostic> {
        let (name, col) = self.ident(what)?;
        let mut chars = name.chars();
        let head = chars.next().unwrap();
        let rest: String = chars.collect();
        if !head.eq_ignore_ascii_case(&prefix) || rest.is_empty() {
            return Err(Diagnostic::new(
                self.line,
                col,
                format!("expected {what} but found '{name}'"),
            ));
        }
        let idx: u32 = rest.parse().map_err(|_| {
            Diagnostic::new(
                self.line,
                col,
                format!("expected {what} but found '{name}'"),
            )
        })?;
        if idx >= count as u32 {
            return Err(Diagnostic::new(
                self.line,
                col,
                format!("register {name} out of range; the instantiation has {count}"),
            ));
        }
        Ok(idx as u8)
    }

    fn gpr(&mut self) -> Result<Gpr, Diagnostic> {
        self.reg('R', self.cfg.num_gprs, "a GPR like R3").map(Gpr)
    }

    fn flag(&mut self) -> Result<CmpFlag, Diagnostic> {
        let (name, col) = self.ident("a comparison flag")?;
        CmpFlag::parse(&name).ok_or_else(|| {
            Diagnostic::new(self.line, col, format!("unknown comparison flag '{name}'"))
        })
    }

    fn imm_in(&mut self, what: &str, min: i64, max: i64) -> Result<i64, Diagnostic> {
        let (value, col) = self.int(what)?;
        if value < min || value > max {
            return Err(Diagnostic::new(
                self.line,
                col,
                format!("{what} {value} outside {min}..={max}"),
            ));
        }
        Ok(value)
    }

    /// `Rt(Imm)` memory operand.
    fn mem_operand(&mut self) -> Result<(Gpr, i32), Diagnostic> {
        let rt = self.gpr()?;
        self.expect(Tok::LParen)?;
        let offset = self.imm_in("memory offset", -(1 << 9), (1 << 9) - 1)?;
        self.expect(Tok::RParen)?;
        Ok((rt, offset as i32))
    }

    fn end(&self) -> Result<(), Diagnostic> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.err(format!(
                "unexpected {} after the instruction",
                self.tokens[self.pos].0.describe()
            )))
        }
    }

    fn quantum_slot(&mut self) -> Result<BundleSlot, Diagnostic> {
        let (mnemonic, col) = self.ident("a quantum operation")?;
        let op = self.cfg.op_by_mnemonic(&mnemonic).ok_or_else(|| {
            Diagnostic::new(
                self.line,
                col,
                format!("unknown quantum operation '{mnemonic}'"),
            )
        })?;
        let canonical = op.mnemonic.clone();
        if op.kind == QOpKind::Qnop {
            return Ok(BundleSlot {
                mnemonic: canonical,
                target: None,
            });
        }
        let target = match self.peek() {
            Some(Tok::Ident(name)) if name.starts_with(['S', 's']) => {
                RegRef::S(SReg(self.reg('S', self.cfg.num_sregs, "an S register")?))
            }
            Some(Tok::Ident(name)) if name.starts_with(['T', 't']) => {
                RegRef::T(TReg(self.reg('T', self.cfg.num_tregs, "a T register")?))
            }
            _ => return Err(self.err(format!("operation '{canonical}' needs a target register"))),
        };
        Ok(BundleSlot {
            mnemonic: canonical,
            target: Some(target),
        })
    }

    fn bundle(&mut self, pi: u32) -> Result<Instruction, Diagnostic> {
        let mut slots = vec![self.quantum_slot()?];
        while self.peek() == Some(&Tok::Pipe) {
            self.next();
            slots.push(self.quantum_slot()?);
        }
        self.end()?;
        Ok(Instruction::Bundle { pi, slots })
    }

    fn statement(&mut self) -> Result<Instruction, Diagnostic> {
        // A leading integer is the optional PI of a quantum bundle.
        if let Some(Tok::Int(_)) = self.peek() {
            let pi = self.imm_in("pre-interval", 0, u32::MAX as i64)? as u32;
            self.expect(Tok::Comma)?;
            return self.bundle(pi);
        }

        let (name, col) = self.ident("an instruction")?;
        let upper = name.to_ascii_uppercase();
        let instr = match upper.as_str() {
            "CMP" => {
                let rs = self.gpr()?;
                self.expect(Tok::Comma)?;
                let rt = self.gpr()?;
                Instruction::Cmp { rs, rt }
            }
            "BR" => {
                let flag = self.flag()?;
                self.expect(Tok::Comma)?;
                let target = match self.peek() {
                    Some(Tok::Int(_)) => {
                        let off = self.imm_in("branch offset", -(1 << 20), (1 << 20) - 1)?;
                        BranchTarget::Offset(off as i32)
                    }
                    _ => BranchTarget::Label(self.ident("a label or offset")?.0),
                };
                Instruction::Br { flag, target }
            }
            "FBR" => {
                let flag = self.flag()?;
                self.expect(Tok::Comma)?;
                Instruction::Fbr {
                    flag,
                    rd: self.gpr()?,
                }
            }
            "LDI" => {
                let rd = self.gpr()?;
                self.expect(Tok::Comma)?;
                let imm = self.imm_in("immediate", -(1 << 19), (1 << 19) - 1)?;
                Instruction::Ldi {
                    rd,
                    imm: imm as i32,
                }
            }
            "LDUI" => {
                let rd = self.gpr()?;
                self.expect(Tok::Comma)?;
                let imm = self.imm_in("immediate", 0, (1 << 15) - 1)?;
                self.expect(Tok::Comma)?;
                Instruction::Ldui {
                    rd,
                    imm: imm as u32,
                    rs: self.gpr()?,
                }
            }
            "LD" => {
                let rd = self.gpr()?;
                self.expect(Tok::Comma)?;
                let (rt, offset) = self.mem_operand()?;
                Instruction::Ld { rd, rt, offset }
            }
            "ST" => {
                let rs = self.gpr()?;
                self.expect(Tok::Comma)?;
                let (rt, offset) = self.mem_operand()?;
                Instruction::St { rs, rt, offset }
            }
            "FMR" => {
                let rd = self.gpr()?;
                self.expect(Tok::Comma)?;
                let qubit = self.reg('Q', self.cfg.num_qubits(), "a qubit like Q1")?;
                Instruction::Fmr { rd, qubit }
            }
            "AND" | "OR" | "XOR" => {
                let op = match upper.as_str() {
                    "AND" => LogicOp::And,
                    "OR" => LogicOp::Or,
                    _ => LogicOp::Xor,
                };
                let rd = self.gpr()?;
                self.expect(Tok::Comma)?;
                let rs = self.gpr()?;
                self.expect(Tok::Comma)?;
                Instruction::Logic {
                    op,
                    rd,
                    rs,
                    rt: self.gpr()?,
                }
            }
            "NOT" => {
                let rd = self.gpr()?;
                self.expect(Tok::Comma)?;
                Instruction::Not {
                    rd,
                    rt: self.gpr()?,
                }
            }
            "ADD" | "SUB" => {
                let op = if upper == "ADD" {
                    ArithOp::Add
                } else {
                    ArithOp::Sub
                };
                let rd = self.gpr()?;
                self.expect(Tok::Comma)?;
                let rs = self.gpr()?;
                self.expect(Tok::Comma)?;
                Instruction::Arith {
                    op,
                    rd,
                    rs,
                    rt: self.gpr()?,
                }
            }
            "QWAIT" => {
                let cycles = self.imm_in("wait time", 0, self.cfg.max_qwait() as i64)?;
                Instruction::Qwait {
                    cycles: cycles as u32,
                }
            }
            "QWAITR" => Instruction::Qwaitr { rs: self.gpr()? },
            "SMIS" => {
                let sd = SReg(self.reg('S', self.cfg.num_sregs, "an S register")?);
                self.expect(Tok::Comma)?;
                self.expect(Tok::LBrace)?;
                let mut qubits = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        qubits.push(self.imm_in("qubit address", 0, 255)? as u8);
                        if self.peek() == Some(&Tok::Comma) {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                Instruction::Smis { sd, qubits }
            }
            "SMIT" => {
                let td = TReg(self.reg('T', self.cfg.num_tregs, "a T register")?);
                self.expect(Tok::Comma)?;
                self.expect(Tok::LBrace)?;
                let mut pairs = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    loop {
                        self.expect(Tok::LParen)?;
                        let a = self.imm_in("qubit address", 0, 255)? as u8;
                        self.expect(Tok::Comma)?;
                        let b = self.imm_in("qubit address", 0, 255)? as u8;
                        self.expect(Tok::RParen)?;
                        pairs.push((a, b));
                        if self.peek() == Some(&Tok::Comma) {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                Instruction::Smit { td, pairs }
            }
            _ => {
                // Not a classical mnemonic: a quantum bundle with the
                // default pre-interval of 1.
                if self.cfg.op_by_mnemonic(&name).is_some() {
                    self.pos -= 1;
                    return self.bundle(1);
                }
                return Err(Diagnostic::new(
                    self.line,
                    col,
                    format!("unknown mnemonic '{name}'"),
                ));
            }
        };
        self.end()?;
        Ok(instr)
    }
}

/// Parses assembly text into a [`SourceProgram`], collecting every
/// diagnostic instead of stopping at the first.
pub fn parse(text: &str, cfg: &InstantiationConfig) -> Result<SourceProgram, Vec<Diagnostic>> {
    let mut statements = Vec::new();
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut errors = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut tokens = match lex_line(raw_line, line_no) {
            Ok(t) => t,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };

        // Leading `name:` defines a label for the next statement.
        while tokens.len() >= 2 && matches!(tokens[0].0, Tok::Ident(_)) && tokens[1].0 == Tok::Colon
        {
            let (Tok::Ident(name), col) = tokens.remove(0) else {
                unreachable!()
            };
            tokens.remove(0);
            if labels.insert(name.clone(), statements.len()).is_some() {
                errors.push(Diagnostic::new(
                    line_no,
                    col,
                    format!("label '{name}' is defined twice"),
                ));
            }
        }
        if tokens.is_empty() {
            continue;
        }

        let mut parser = LineParser {
            tokens,
            pos: 0,
            line: line_no,
            cfg,
        };
        match parser.statement() {
            Ok(instr) => statements.push(Statement {
                instr,
                line: line_no,
            }),
            Err(e) => errors.push(e),
        }
    }

    // Every branch label must resolve.
    for stmt in &statements {
        if let Instruction::Br {
            target: BranchTarget::Label(name),
            ..
        } = &stmt.instr
        {
            if !labels.contains_key(name) {
                errors.push(Diagnostic::new(
                    stmt.line,
                    1,
                    format!("unresolved label '{name}'"),
                ));
            }
        }
    }

    if errors.is_empty() {
        Ok(SourceProgram { statements, labels })
    } else {
        Err(errors)
    }
}
