//! JSON encoding of diagrams and matrices.
//!
//! A diagram is an object
//!
//! ```text
//! {"vertices": [{"id": 0, "kind": "green_box", "params": {...}}, ...],
//!  "edges":    [[port, port], ...],
//!  "inputs":   [port, ...],
//!  "outputs":  [port, ...],
//!  "sqrt2_power": 0}
//! ```
//!
//! where a port is `[vertex, leg]` or `["in", slot]` / `["out", slot]`. Entry `i` of
//! `inputs` names the port wired to input slot `i`, and likewise for `outputs`;
//! `edges` lists the links between two vertex legs. Complex numbers are `[re, im]`.

use std::fmt;

use azx_core::diagram::VertexId;
use azx_core::label::{FuncLabel, FuncRegistry, PhaseLabel, C64};
use azx_core::{Diagram, Label, Port, Tau, Tensor, VertexKind};
use serde_json::{json, Map, Value};

/// A malformed document, with the place where the problem was found.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(location: impl Into<String>, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        location: location.into(),
        message: message.into(),
    })
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn port(p: Port) -> Value {
    match p {
        Port::Input(i) => json!(["in", i]),
        Port::Output(j) => json!(["out", j]),
        Port::Leg(v, l) => json!([v.0, l]),
    }
}

fn label(l: &Label) -> Value {
    match l {
        Label::Const(z) => json!({ "const": complex(*z) }),
        Label::Phase(p) => json!({ "phase": { "param": p.param.as_str(), "k": p.k, "c": p.c } }),
        Label::Func(f) => json!({ "func": { "param": f.param.as_str(), "id": f.func.id() } }),
    }
}

fn kind(k: &VertexKind) -> (&'static str, Value) {
    match k {
        VertexKind::GreenBox { label: l, inputs, outputs } => (
            "green_box",
            json!({ "label": label(l), "inputs": inputs, "outputs": outputs }),
        ),
        VertexKind::Pink { tau, inputs, outputs } => {
            let t = if *tau == Tau::Pi { "pi" } else { "0" };
            ("pink", json!({ "tau": t, "inputs": inputs, "outputs": outputs }))
        }
        VertexKind::Hadamard => ("hadamard", json!({})),
        VertexKind::Triangle => ("triangle", json!({})),
        VertexKind::TriangleInverse => ("triangle_inv", json!({})),
        VertexKind::W { outputs } => ("w", json!({ "outputs": outputs })),
    }
}

pub fn diagram_to_value(d: &Diagram) -> Value {
    let vertices: Vec<Value> = d
        .vertices()
        .map(|(v, k)| {
            let (name, params) = kind(k);
            json!({ "id": v.0, "kind": name, "params": params })
        })
        .collect();
    let edges: Vec<Value> = d
        .edges()
        .filter(|(a, b)| !a.is_boundary() && !b.is_boundary())
        .map(|(a, b)| json!([port(a), port(b)]))
        .collect();
    let side = |n: usize, slot: fn(usize) -> Port| -> Vec<Value> {
        (0..n)
            .map(|i| d.partner(slot(i)).map_or(Value::Null, port))
            .collect()
    };
    json!({
        "vertices": vertices,
        "edges": edges,
        "inputs": side(d.n_inputs(), Port::Input),
        "outputs": side(d.n_outputs(), Port::Output),
        "sqrt2_power": d.sqrt2_power(),
    })
}

pub fn diagram_to_string(d: &Diagram) -> String {
    let mut s = serde_json::to_string_pretty(&diagram_to_value(d)).expect("values serialize");
    s.push('\n');
    s
}

/// Row-major matrix as `{"rows": r, "cols": c, "data": [[re, im], ...]}`.
pub fn tensor_to_value(t: &Tensor) -> Value {
    let data: Vec<Value> = t.data().iter().map(|z| complex(*z)).collect();
    json!({ "rows": t.rows(), "cols": t.cols(), "data": data })
}

pub fn tensor_from_value(v: &Value) -> Result<Tensor, ParseError> {
    let rows = uint(v.get("rows"), "rows")?;
    let cols = uint(v.get("cols"), "cols")?;
    let (Some(inputs), Some(outputs)) = (log2(cols), log2(rows)) else {
        return err("matrix", "dimensions must be powers of two");
    };
    let data = array(v.get("data"), "data")?;
    if data.len() != rows * cols {
        return err("data", format!("expected {} entries, found {}", rows * cols, data.len()));
    }
    let data = data
        .iter()
        .enumerate()
        .map(|(i, z)| parse_complex(z, &format!("data[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tensor::from_data(inputs, outputs, data))
}

fn log2(n: usize) -> Option<usize> {
    n.is_power_of_two().then(|| n.trailing_zeros() as usize)
}

/// Turns a serde error into a `line:column` annotated one.
fn syntax(e: serde_json::Error) -> ParseError {
    ParseError {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string().split(" at line").next().unwrap_or("").to_string(),
    }
}

pub fn parse_diagram(text: &str, registry: &FuncRegistry) -> Result<Diagram, ParseError> {
    let v: Value = serde_json::from_str(text).map_err(syntax)?;
    diagram_from_value(&v, registry)
}

pub fn parse_tensor(text: &str) -> Result<Tensor, ParseError> {
    tensor_from_value(&serde_json::from_str(text).map_err(syntax)?)
}

fn array<'a>(v: Option<&'a Value>, at: &str) -> Result<&'a Vec<Value>, ParseError> {
    match v {
        Some(Value::Array(a)) => Ok(a),
        Some(_) => err(at, "expected an array"),
        None => err(at, "missing field"),
    }
}

fn uint(v: Option<&Value>, at: &str) -> Result<usize, ParseError> {
    match v.and_then(Value::as_u64) {
        Some(n) => Ok(n as usize),
        None => err(at, "expected a non-negative integer"),
    }
}

fn float(v: Option<&Value>, at: &str) -> Result<f64, ParseError> {
    match v.and_then(Value::as_f64) {
        Some(x) => Ok(x),
        None => err(at, "expected a number"),
    }
}

fn string<'a>(v: Option<&'a Value>, at: &str) -> Result<&'a str, ParseError> {
    match v.and_then(Value::as_str) {
        Some(s) => Ok(s),
        None => err(at, "expected a string"),
    }
}

fn parse_complex(v: &Value, at: &str) -> Result<C64, ParseError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(C64::new(float(Some(re), at)?, float(Some(im), at)?)),
        _ => err(at, "expected [re, im]"),
    }
}

fn parse_port(v: &Value, at: &str) -> Result<Port, ParseError> {
    let Some([a, b]) = v.as_array().map(Vec::as_slice) else {
        return err(at, "expected a port [vertex, leg] or [\"in\"|\"out\", slot]");
    };
    let index = uint(Some(b), at)?;
    match a {
        Value::String(s) if s == "in" => Ok(Port::Input(index)),
        Value::String(s) if s == "out" => Ok(Port::Output(index)),
        Value::String(s) => err(at, format!("unknown boundary `{s}`")),
        other => Ok(Port::Leg(VertexId(uint(Some(other), at)?), index)),
    }
}

fn parse_label(v: Option<&Value>, at: &str, registry: &FuncRegistry) -> Result<Label, ParseError> {
    let Some(Value::Object(m)) = v else {
        return err(at, "expected a label object");
    };
    if let Some(z) = m.get("const") {
        return Ok(Label::Const(parse_complex(z, &format!("{at}.const"))?));
    }
    if let Some(p) = m.get("phase") {
        let at = format!("{at}.phase");
        let param = string(p.get("param"), &format!("{at}.param"))?;
        let k = match p.get("k").and_then(Value::as_i64) {
            Some(k) if k != 0 && i32::try_from(k).is_ok() => k as i32,
            _ => return err(format!("{at}.k"), "expected a non-zero integer"),
        };
        let c = match p.get("c") {
            None => 0.0,
            c => float(c, &format!("{at}.c"))?,
        };
        return Ok(Label::Phase(PhaseLabel {
            param: param.into(),
            k,
            c,
        }));
    }
    if let Some(f) = m.get("func") {
        let at = format!("{at}.func");
        let param = string(f.get("param"), &format!("{at}.param"))?;
        let id = string(f.get("id"), &format!("{at}.id"))?;
        let Some(func) = registry.get(id) else {
            return err(format!("{at}.id"), format!("unknown function `{id}`"));
        };
        return Ok(Label::Func(FuncLabel {
            param: param.into(),
            func,
        }));
    }
    err(at, "expected one of `const`, `phase`, `func`")
}

fn parse_kind(name: &str, params: &Map<String, Value>, at: &str, registry: &FuncRegistry) -> Result<VertexKind, ParseError> {
    let io = |k: &str| uint(params.get(k), &format!("{at}.params.{k}"));
    Ok(match name {
        "green_box" => VertexKind::GreenBox {
            label: parse_label(params.get("label"), &format!("{at}.params.label"), registry)?,
            inputs: io("inputs")?,
            outputs: io("outputs")?,
        },
        "pink" => {
            let tau = match params.get("tau").and_then(Value::as_str) {
                Some("0") => Tau::Zero,
                Some("pi") => Tau::Pi,
                _ => return err(format!("{at}.params.tau"), "expected \"0\" or \"pi\""),
            };
            VertexKind::Pink {
                tau,
                inputs: io("inputs")?,
                outputs: io("outputs")?,
            }
        }
        "hadamard" => VertexKind::Hadamard,
        "triangle" => VertexKind::Triangle,
        "triangle_inv" => VertexKind::TriangleInverse,
        "w" => VertexKind::W { outputs: io("outputs")? },
        other => return err(format!("{at}.kind"), format!("unknown vertex kind `{other}`")),
    })
}

pub fn diagram_from_value(v: &Value, registry: &FuncRegistry) -> Result<Diagram, ParseError> {
    if !v.is_object() {
        return err("document", "expected a diagram object");
    }
    let inputs = array(v.get("inputs"), "inputs")?;
    let outputs = array(v.get("outputs"), "outputs")?;
    let mut d = Diagram::new(inputs.len(), outputs.len());
    for (i, vert) in array(v.get("vertices"), "vertices")?.iter().enumerate() {
        let at = format!("vertices[{i}]");
        let id = uint(vert.get("id"), &format!("{at}.id"))?;
        let name = string(vert.get("kind"), &format!("{at}.kind"))?;
        let empty = Map::new();
        let params = match vert.get("params") {
            None | Some(Value::Null) => &empty,
            Some(Value::Object(m)) => m,
            Some(_) => return err(format!("{at}.params"), "expected an object"),
        };
        let kind = parse_kind(name, params, &at, registry)?;
        kind.validate().or_else(|e| err(&at, e.to_string()))?;
        d.insert_vertex(VertexId(id), kind).or_else(|e| err(&at, e.to_string()))?;
    }
    let link = |d: &mut Diagram, a: Port, b: Port, at: &str| -> Result<(), ParseError> {
        if d.partner(a) == Some(b) {
            return Ok(());
        }
        d.connect(a, b).or_else(|e| err(at, e.to_string()))
    };
    for (i, e) in array(v.get("edges"), "edges")?.iter().enumerate() {
        let at = format!("edges[{i}]");
        let Some([a, b]) = e.as_array().map(Vec::as_slice) else {
            return err(at, "expected a pair of ports");
        };
        let (a, b) = (parse_port(a, &format!("{at}[0]"))?, parse_port(b, &format!("{at}[1]"))?);
        link(&mut d, a, b, &at)?;
    }
    for (side, list, slot) in [("inputs", inputs, Port::Input as fn(usize) -> Port), ("outputs", outputs, Port::Output)] {
        for (i, p) in list.iter().enumerate() {
            let at = format!("{side}[{i}]");
            link(&mut d, slot(i), parse_port(p, &at)?, &at)?;
        }
    }
    if let Some(p) = v.get("sqrt2_power") {
        match p.as_i64().and_then(|p| i32::try_from(p).ok()) {
            Some(p) => d.mul_sqrt2(p),
            None => return err("sqrt2_power", "expected an integer"),
        }
    }
    d.validate().or_else(|e| err("diagram", e.to_string()))?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use azx_core::notation::*;

    #[test]
    fn round_trip_small() {
        let reg = FuncRegistry::with_builtins();
        let d = chain(&[
            green_param("t", -2, 0.25, 1, 2).unwrap(),
            cnot(),
            w(2).unwrap().transpose(),
            pink(Tau::Pi, 1, 1).tensor(&sqrt2_scalar(-3)),
        ])
        .unwrap()
        .tensor(&Diagram::identity(1));
        let back = parse_diagram(&diagram_to_string(&d), &reg).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn errors_carry_positions() {
        let reg = FuncRegistry::with_builtins();
        let e = parse_diagram("{\"vertices\": [\n  {\"id\": 0,]\n}", &reg).unwrap_err();
        assert!(e.location.starts_with("line 2"), "{e}");
        let doc = r#"{"vertices":[{"id":0,"kind":"blob"}],"edges":[],"inputs":[],"outputs":[]}"#;
        assert_eq!(parse_diagram(doc, &reg).unwrap_err().location, "vertices[0].kind");
        let dangling = r#"{"vertices":[{"id":0,"kind":"hadamard"}],"edges":[],"inputs":[[0,0]],"outputs":[]}"#;
        assert_eq!(parse_diagram(dangling, &reg).unwrap_err().location, "diagram");
    }

    #[test]
    fn matrices_round_trip() {
        let t = azx_core::evaluate(&cnot(), &azx_core::Binding::new()).unwrap();
        let s = serde_json::to_string(&tensor_to_value(&t)).unwrap();
        assert_eq!(parse_tensor(&s).unwrap(), t);
    }
}
