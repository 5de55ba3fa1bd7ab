//! Plain-text circuits.
//!
//! ```text
//! # comments run to the end of the line
//! qubits 2
//! h 0
//! cz 0 1
//! rx 0 theta1
//! rz 1 pi/4
//! ```
//!
//! A rotation whose angle is a number (or a multiple of `pi`) is fixed; any other
//! angle token names a parameter.

use std::f64::consts::PI;
use std::fmt::Write as _;

use azx_core::bp::{Ansatz, Gate};
use azx_core::label::Param;

use crate::json::ParseError;

fn at(line: usize, col: usize) -> String {
    format!("line {line}, column {col}")
}

fn fail<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        location: at(line, col),
        message: message.into(),
    })
}

/// Parses `1.5`, `-0.2`, `pi`, `-pi/2`, `3*pi/4` and the like.
pub fn parse_angle(s: &str) -> Option<f64> {
    if let Ok(x) = s.parse::<f64>() {
        return x.is_finite().then_some(x);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok().filter(|d| *d != 0.0)?),
        None => (body, 1.0),
    };
    let coeff = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c.strip_suffix('*')?.parse::<f64>().ok()?,
        None => return None,
    };
    Some(sign * coeff * PI / den)
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(byte, t)| (line[..byte].chars().count() + 1, t))
        .collect()
}

pub fn parse_circuit(text: &str) -> Result<Ansatz, ParseError> {
    let mut n: Option<usize> = None;
    let mut gates = Vec::new();
    let mut last_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let toks = tokens(line);
        let Some(&(col, op)) = toks.first() else { continue };
        let args = &toks[1..];
        let expect = |k: usize| -> Result<(), ParseError> {
            if args.len() == k {
                return Ok(());
            }
            let c = args.get(k).map_or(col + op.chars().count(), |a| a.0);
            fail(ln, c, format!("`{op}` takes {k} argument(s), found {}", args.len()))
        };
        let Some(nq) = n else {
            if op != "qubits" {
                return fail(ln, col, "expected the header `qubits <n>`");
            }
            expect(1)?;
            match args[0].1.parse::<usize>() {
                Ok(q) if q > 0 => n = Some(q),
                _ => return fail(ln, args[0].0, "expected a positive qubit count"),
            }
            continue;
        };
        let qubit = |k: usize| -> Result<usize, ParseError> {
            let (c, t) = args[k];
            match t.parse::<usize>() {
                Ok(q) if q < nq => Ok(q),
                Ok(q) => fail(ln, c, format!("qubit {q} out of range for {nq} qubits")),
                Err(_) => fail(ln, c, format!("expected a qubit index, found `{t}`")),
            }
        };
        let gate = match op {
            "qubits" => return fail(ln, col, "repeated `qubits` header"),
            "h" => {
                expect(1)?;
                Gate::H(qubit(0)?)
            }
            "rz" | "rx" => {
                expect(2)?;
                let q = qubit(0)?;
                let angle = args[1].1;
                match (parse_angle(angle), op) {
                    (Some(a), "rz") => Gate::RzFixed(q, a),
                    (Some(a), _) => Gate::RxFixed(q, a),
                    (None, "rz") => Gate::Rz(q, Param::new(angle)),
                    (None, _) => Gate::Rx(q, Param::new(angle)),
                }
            }
            "cnot" | "cz" => {
                expect(2)?;
                let (a, b) = (qubit(0)?, qubit(1)?);
                if a == b {
                    return fail(ln, args[1].0, "two-qubit gate needs distinct qubits");
                }
                if op == "cnot" { Gate::Cnot(a, b) } else { Gate::Cz(a, b) }
            }
            other => return fail(ln, col, format!("unknown gate `{other}`")),
        };
        if let Some(p) = gate.param() {
            if gates.iter().any(|g: &Gate| g.param() == Some(p)) {
                return fail(ln, args[1].0, format!("parameter `{p}` already drives another gate"));
            }
        }
        gates.push(gate);
    }
    let Some(nq) = n else {
        return fail(last_line.max(1), 1, "missing `qubits <n>` header");
    };
    Ansatz::new(nq, gates).map_err(|e| ParseError {
        location: "circuit".into(),
        message: e.to_string(),
    })
}

pub fn write_circuit(a: &Ansatz) -> String {
    let mut s = format!("qubits {}\n", a.n_qubits());
    for g in a.gates() {
        let _ = match g {
            Gate::H(q) => writeln!(s, "h {q}"),
            Gate::Rz(q, p) => writeln!(s, "rz {q} {p}"),
            Gate::Rx(q, p) => writeln!(s, "rx {q} {p}"),
            Gate::RzFixed(q, x) => writeln!(s, "rz {q} {x:?}"),
            Gate::RxFixed(q, x) => writeln!(s, "rx {q} {x:?}"),
            Gate::Cnot(c, t) => writeln!(s, "cnot {c} {t}"),
            Gate::Cz(a, b) => writeln!(s, "cz {a} {b}"),
        };
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5"), Some(0.5));
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("-pi/2"), Some(-PI / 2.0));
        assert_eq!(parse_angle("3*pi/4"), Some(3.0 * PI / 4.0));
        assert_eq!(parse_angle("theta"), None);
        assert_eq!(parse_angle("θ1"), None);
    }

    #[test]
    fn parses_and_round_trips() {
        let a = parse_circuit("# sim9\nqubits 2\nh 0\nh 1\ncz 0 1\nrx 0 θ1  # first\nrx 1 θ2\nrz 0 -pi/4\n").unwrap();
        assert_eq!(a.n_qubits(), 2);
        assert_eq!(a.params().len(), 2);
        assert_eq!(a.gates()[5], Gate::RzFixed(0, -PI / 4.0));
        assert_eq!(parse_circuit(&write_circuit(&a)).unwrap(), a);
    }

    #[test]
    fn errors_point_at_the_token() {
        let e = parse_circuit("qubits 2\nrx 5 t\n").unwrap_err();
        assert_eq!(e.location, "line 2, column 4");
        let e = parse_circuit("qubits 2\n  frob 0\n").unwrap_err();
        assert_eq!(e.location, "line 2, column 3");
        let e = parse_circuit("h 0\n").unwrap_err();
        assert_eq!(e.location, "line 1, column 1");
        let e = parse_circuit("qubits 1\nrx 0 t\nrz 0 t\n").unwrap_err();
        assert_eq!(e.location, "line 3, column 6");
        assert!(parse_circuit("qubits 2\ncz 1 1\n").is_err());
    }
}
