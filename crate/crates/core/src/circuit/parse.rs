//! Line-oriented circuit text format.
//!
//! ```text
//! qudits 2 3 4            # wire dimensions, most significant first
//! gate h target=1
//! gate x target=2 ctrl=1@1
//! gate givens target=0 levels=0,1 theta=0.7853981633974483 phi=0
//! gate cex target=1 ctrl=0@1 levels=0,2
//! gate csum target=1 ctrl2=0
//! measure all
//! ```
//!
//! `#` starts a comment to end of line, tokens are space-separated, and the
//! first significant line must declare the register. Diagnostics carry the
//! 1-based line and column of the offending token.

use super::{Circuit, CircuitOp};
use crate::error::{ParseError, Result};
use crate::gates::ControlSpec;
use crate::register::QuditRegister;

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let significant = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut offset = 0;
    for piece in significant.split_whitespace() {
        let start = significant[offset..]
            .find(piece)
            .map(|p| p + offset)
            .unwrap_or(offset);
        offset = start + piece.len();
        tokens.push(Token {
            text: piece,
            line: line_no,
            column: start + 1,
        });
    }
    tokens
}

/// Parses circuit text into a validated [`Circuit`].
pub fn parse(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| tokenize(l, i + 1))
        .filter(|t| !t.is_empty());

    let header = lines.next().ok_or_else(|| {
        ParseError::new(1, 1, "expected `qudits d_0 d_1 ...` as the first line")
    })?;
    if header[0].text != "qudits" {
        return Err(header[0]
            .err(format!("expected `qudits`, found `{}`", header[0].text))
            .into());
    }
    if header.len() < 2 {
        return Err(header[0]
            .err("`qudits` requires at least one dimension")
            .into());
    }
    let mut dims = Vec::with_capacity(header.len() - 1);
    for tok in &header[1..] {
        let d: usize = tok
            .text
            .parse()
            .map_err(|_| tok.err(format!("`{}` is not a valid dimension", tok.text)))?;
        if d < 2 {
            return Err(tok
                .err(format!("dimension must be at least 2, got {d}"))
                .into());
        }
        dims.push(d);
    }
    let register = QuditRegister::new(dims)?;
    let mut circuit = Circuit::new(register);
    let mut measured = false;

    for tokens in lines {
        let head = &tokens[0];
        if measured {
            return Err(head
                .err("no further statements are allowed after `measure all`")
                .into());
        }
        match head.text {
            "gate" => {
                let op = parse_gate(&tokens, circuit.register())?;
                circuit.push(op)?;
            }
            "measure" => {
                match tokens.get(1) {
                    Some(t) if t.text == "all" => {}
                    Some(t) => {
                        return Err(t
                            .err(format!("expected `all` after `measure`, found `{}`", t.text))
                            .into())
                    }
                    None => {
                        return Err(head.err("expected `all` after `measure`").into());
                    }
                }
                if let Some(extra) = tokens.get(2) {
                    return Err(extra
                        .err(format!("unexpected token `{}`", extra.text))
                        .into());
                }
                circuit.set_measure_all(true);
                measured = true;
            }
            other => {
                return Err(head
                    .err(format!("expected `gate` or `measure`, found `{other}`"))
                    .into())
            }
        }
    }
    Ok(circuit)
}

#[derive(Default)]
struct GateArgs {
    target: Option<usize>,
    controls: Vec<ControlSpec>,
    levels: Option<(usize, usize)>,
    theta: Option<f64>,
    phi: Option<f64>,
    ctrl2: Option<usize>,
}

fn parse_gate(tokens: &[Token<'_>], register: &QuditRegister) -> Result<CircuitOp> {
    let name = tokens
        .get(1)
        .ok_or_else(|| tokens[0].err("expected a gate name after `gate`"))?;
    let mut args = GateArgs::default();
    for tok in &tokens[2..] {
        let (key, value) = tok.text.split_once('=').ok_or_else(|| {
            tok.err(format!("expected `key=value`, found `{}`", tok.text))
        })?;
        match key {
            "target" => {
                if args.target.is_some() {
                    return Err(tok.err("duplicate argument `target`").into());
                }
                args.target = Some(parse_wire(tok, value, register)?);
            }
            "ctrl" => {
                let (wire_text, level_text) = value.split_once('@').ok_or_else(|| {
                    tok.err(format!("expected `ctrl=LINE@LEVEL`, found `{}`", tok.text))
                })?;
                let wire = parse_wire(tok, wire_text, register)?;
                let level: usize = level_text.parse().map_err(|_| {
                    tok.err(format!("`{level_text}` is not a valid control level"))
                })?;
                if level >= register.dim(wire) {
                    return Err(tok
                        .err(format!(
                            "level {level} is not a valid state of wire {wire} (dimension {})",
                            register.dim(wire)
                        ))
                        .into());
                }
                args.controls.push(ControlSpec { wire, level });
            }
            "levels" => {
                if args.levels.is_some() {
                    return Err(tok.err("duplicate argument `levels`").into());
                }
                let (a, b) = value.split_once(',').ok_or_else(|| {
                    tok.err(format!("expected `levels=i,j`, found `{}`", tok.text))
                })?;
                let i: usize = a
                    .parse()
                    .map_err(|_| tok.err(format!("`{a}` is not a valid level")))?;
                let j: usize = b
                    .parse()
                    .map_err(|_| tok.err(format!("`{b}` is not a valid level")))?;
                args.levels = Some((i, j));
            }
            "theta" => {
                if args.theta.is_some() {
                    return Err(tok.err("duplicate argument `theta`").into());
                }
                args.theta = Some(parse_angle(tok, value)?);
            }
            "phi" => {
                if args.phi.is_some() {
                    return Err(tok.err("duplicate argument `phi`").into());
                }
                args.phi = Some(parse_angle(tok, value)?);
            }
            "ctrl2" => {
                if args.ctrl2.is_some() {
                    return Err(tok.err("duplicate argument `ctrl2`").into());
                }
                args.ctrl2 = Some(parse_wire(tok, value, register)?);
            }
            other => {
                return Err(tok.err(format!("unknown argument `{other}`")).into());
            }
        }
    }

    let target = args
        .target
        .ok_or_else(|| name.err("missing required argument `target`"))?;
    let require_levels = |args: &GateArgs| {
        args.levels
            .ok_or_else(|| name.err("missing required argument `levels`"))
    };
    let reject = |cond: bool, what: &str| -> Result<()> {
        if cond {
            Err(name
                .err(format!("gate `{}` does not accept `{what}`", name.text))
                .into())
        } else {
            Ok(())
        }
    };

    let op = match name.text {
        "h" | "x" | "z" => {
            reject(args.levels.is_some(), "levels")?;
            reject(args.theta.is_some(), "theta")?;
            reject(args.phi.is_some(), "phi")?;
            reject(args.ctrl2.is_some(), "ctrl2")?;
            match name.text {
                "h" => CircuitOp::Hadamard {
                    target,
                    controls: args.controls,
                },
                "x" => CircuitOp::PauliX {
                    target,
                    controls: args.controls,
                },
                _ => CircuitOp::PauliZ {
                    target,
                    controls: args.controls,
                },
            }
        }
        "givens" => {
            reject(args.ctrl2.is_some(), "ctrl2")?;
            let levels = require_levels(&args)?;
            CircuitOp::Givens {
                target,
                controls: args.controls,
                levels,
                theta: args.theta.unwrap_or(0.0),
                phi: args.phi.unwrap_or(0.0),
            }
        }
        "cex" => {
            reject(args.theta.is_some(), "theta")?;
            reject(args.phi.is_some(), "phi")?;
            reject(args.ctrl2.is_some(), "ctrl2")?;
            if args.controls.len() != 1 {
                return Err(name
                    .err(format!(
                        "gate `cex` requires exactly one `ctrl`, got {}",
                        args.controls.len()
                    ))
                    .into());
            }
            CircuitOp::Cex {
                target,
                control: args.controls[0],
                levels: require_levels(&args)?,
            }
        }
        "csum" => {
            reject(!args.controls.is_empty(), "ctrl")?;
            reject(args.levels.is_some(), "levels")?;
            reject(args.theta.is_some(), "theta")?;
            reject(args.phi.is_some(), "phi")?;
            let control = args
                .ctrl2
                .ok_or_else(|| name.err("missing required argument `ctrl2`"))?;
            CircuitOp::Csum { control, target }
        }
        other => {
            return Err(name.err(format!("unknown gate name `{other}`")).into());
        }
    };
    Ok(op)
}

fn parse_wire(tok: &Token<'_>, text: &str, register: &QuditRegister) -> Result<usize> {
    let wire: usize = text
        .parse()
        .map_err(|_| tok.err(format!("`{text}` is not a valid wire index")))?;
    if wire >= register.num_qudits() {
        return Err(tok
            .err(format!(
                "wire {wire} is outside the register (size {})",
                register.num_qudits()
            ))
            .into());
    }
    Ok(wire)
}

fn parse_angle(tok: &Token<'_>, text: &str) -> Result<f64> {
    let angle: f64 = text
        .parse()
        .map_err(|_| tok.err(format!("`{text}` is not a valid angle")))?;
    if !angle.is_finite() {
        return Err(tok.err(format!("angle `{text}` is not finite")).into());
    }
    Ok(angle)
}

impl std::fmt::Display for Circuit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "qudits")?;
        for d in self.register.dims() {
            write!(f, " {d}")?;
        }
        writeln!(f)?;
        for op in &self.ops {
            match op {
                CircuitOp::Hadamard { target, controls } => {
                    write!(f, "gate h target={target}")?;
                    write_controls(f, controls)?;
                }
                CircuitOp::PauliX { target, controls } => {
                    write!(f, "gate x target={target}")?;
                    write_controls(f, controls)?;
                }
                CircuitOp::PauliZ { target, controls } => {
                    write!(f, "gate z target={target}")?;
                    write_controls(f, controls)?;
                }
                CircuitOp::Givens {
                    target,
                    controls,
                    levels,
                    theta,
                    phi,
                } => {
                    write!(f, "gate givens target={target}")?;
                    write_controls(f, controls)?;
                    write!(f, " levels={},{} theta={theta} phi={phi}", levels.0, levels.1)?;
                }
                CircuitOp::Cex {
                    target,
                    control,
                    levels,
                } => {
                    write!(
                        f,
                        "gate cex target={target} ctrl={}@{} levels={},{}",
                        control.wire, control.level, levels.0, levels.1
                    )?;
                }
                CircuitOp::Csum { control, target } => {
                    write!(f, "gate csum target={target} ctrl2={control}")?;
                }
            }
            writeln!(f)?;
        }
        if self.measure_all {
            writeln!(f, "measure all")?;
        }
        Ok(())
    }
}

fn write_controls(
    f: &mut std::fmt::Formatter<'_>,
    controls: &[ControlSpec],
) -> std::fmt::Result {
    for c in controls {
        write!(f, " ctrl={}@{}", c.wire, c.level)?;
    }
    Ok(())
}
