//! Text file formats: circuits, truth tables, spectra, states and reports.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use qaclab_core::fourier::{BooleanFn, FourierSpectrum};
use qaclab_core::report::{GadgetReport, Relation};
use qaclab_core::states::BuiltState;
use qaclab_core::{
    Circuit, DensityMatrix, Gate, Layer, PrimitiveOp, SingleQubitState, Statevector, Unitary2, C64,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

type Pair = [f64; 2];

fn c(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateFile {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<Vec<[Pair; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<[[Pair; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    n_inputs: usize,
    n_ancilla: usize,
    output: Option<usize>,
    layers: Vec<Vec<GateFile>>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Io(msg.into())
}

impl GateFile {
    fn from_gate(g: &Gate) -> Self {
        let mut f = GateFile {
            kind: String::new(),
            qubits: g.qubits().to_vec(),
            state: None,
            matrix: None,
            tag: None,
            param: None,
        };
        match g {
            Gate::Reflection { state, .. } => {
                f.kind = "reflection".into();
                f.state = Some(state.iter().map(|s| [pair(s.a0), pair(s.a1)]).collect());
            }
            Gate::Unitary { matrix, .. } => {
                f.kind = "u1".into();
                let m = matrix.m;
                f.matrix = Some([
                    [pair(m[0][0]), pair(m[0][1])],
                    [pair(m[1][0]), pair(m[1][1])],
                ]);
            }
            Gate::Primitive { op, .. } => {
                f.kind = "primitive".into();
                f.tag = Some(op.tag().into());
                f.param = op.param();
            }
        }
        f
    }

    fn into_gate(self) -> CliResult<Gate> {
        let GateFile {
            kind,
            qubits,
            state,
            matrix,
            tag,
            param,
        } = self;
        let extra = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(bad(format!("unexpected field for a {kind} gate")))
            }
        };
        match kind.as_str() {
            "reflection" => {
                extra(matrix.is_none() && tag.is_none() && param.is_none())?;
                let st = state.ok_or_else(|| bad("reflection gate needs \"state\""))?;
                let st = st
                    .into_iter()
                    .map(|[a, b]| SingleQubitState::new(c(a), c(b)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| bad(e.to_string()))?;
                Ok(Gate::reflection(qubits, st))
            }
            "u1" => {
                extra(state.is_none() && tag.is_none() && param.is_none())?;
                let m = matrix.ok_or_else(|| bad("u1 gate needs \"matrix\""))?;
                if qubits.len() != 1 {
                    return Err(bad("u1 gate acts on exactly one qubit"));
                }
                let u = Unitary2::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
                    .map_err(|e| bad(e.to_string()))?;
                Ok(Gate::unitary(qubits[0], u))
            }
            "primitive" => {
                extra(state.is_none() && matrix.is_none())?;
                let tag = tag.ok_or_else(|| bad("primitive gate needs \"tag\""))?;
                let op = PrimitiveOp::from_tag(&tag, param)
                    .ok_or_else(|| bad(format!("unknown primitive {tag} with param {param:?}")))?;
                Ok(Gate::primitive(qubits, op))
            }
            other => Err(bad(format!("unknown gate kind {other:?}"))),
        }
    }
}

pub fn circuit_to_json(c: &Circuit) -> String {
    let f = CircuitFile {
        n_inputs: c.n_inputs,
        n_ancilla: c.n_ancilla,
        output: c.output,
        layers: c
            .layers
            .iter()
            .map(|l| l.gates.iter().map(GateFile::from_gate).collect())
            .collect(),
    };
    crate::json::to_string(&f)
}

pub fn circuit_from_json(text: &str) -> CliResult<Circuit> {
    let f: CircuitFile =
        serde_json::from_str(text).map_err(|e| bad(format!("circuit file: {e}")))?;
    let layers = f
        .layers
        .into_iter()
        .map(|l| {
            l.into_iter()
                .map(GateFile::into_gate)
                .collect::<CliResult<Vec<_>>>()
                .map(Layer::new)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let c = Circuit {
        n_inputs: f.n_inputs,
        n_ancilla: f.n_ancilla,
        output: f.output,
        layers,
    };
    c.ensure_valid().map_err(|e| bad(e.to_string()))?;
    Ok(c)
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// One real per line; blank lines are skipped.
pub fn truth_table_from_text(text: &str) -> CliResult<BooleanFn> {
    let vals = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|e| bad(format!("truth table line {}: {e}", i + 1)))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if vals.is_empty() || !vals.len().is_power_of_two() {
        return Err(bad(format!(
            "truth table has {} entries, not a power of two",
            vals.len()
        )));
    }
    let n = vals.len().trailing_zeros() as usize;
    BooleanFn::new_real(n, vals).map_err(|e| bad(e.to_string()))
}

pub fn truth_table_to_text(f: &BooleanFn) -> String {
    f.table()
        .iter()
        .map(|v| crate::json::fmt_f64(*v) + "\n")
        .collect()
}

pub fn spectrum_to_csv(s: &FourierSpectrum) -> String {
    let mut out = String::from("mask,|S|,coefficient\n");
    for (mask, v) in s.coeffs().iter().enumerate() {
        out.push_str(&format!(
            "{mask},{},{}\n",
            mask.count_ones(),
            crate::json::fmt_f64(*v)
        ));
    }
    out
}

pub fn spectrum_from_csv(text: &str) -> CliResult<FourierSpectrum> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("mask,|S|,coefficient") {
        return Err(bad(
            "spectrum CSV must start with the header mask,|S|,coefficient",
        ));
    }
    let mut coeffs = Vec::new();
    for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match cells.as_slice() {
            [m, w, v] => m
                .parse::<usize>()
                .ok()
                .zip(w.parse::<u32>().ok())
                .zip(v.parse::<f64>().ok()),
            _ => None,
        };
        let ((m, w), v) =
            parsed.ok_or_else(|| bad(format!("spectrum row {}: malformed", i + 1)))?;
        if m != i || w != m.count_ones() {
            return Err(bad(format!(
                "spectrum row {}: mask or weight out of order",
                i + 1
            )));
        }
        coeffs.push(v);
    }
    if coeffs.is_empty() || !coeffs.len().is_power_of_two() {
        return Err(bad("spectrum length is not a power of two"));
    }
    FourierSpectrum::new(coeffs.len().trailing_zeros() as usize, coeffs)
        .map_err(|e| bad(e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<Pair>>,
    /// Row-major `2^n x 2^n` entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<Vec<Pair>>,
}

pub fn state_from_json(text: &str) -> CliResult<BuiltState> {
    let f: StateFile = serde_json::from_str(text).map_err(|e| bad(format!("state file: {e}")))?;
    qaclab_core::check_cap(f.n).map_err(|e| bad(e.to_string()))?;
    let d = 1usize << f.n;
    match (f.amplitudes, f.density) {
        (Some(a), None) => {
            let psi = Statevector::from_amplitudes(f.n, a.into_iter().map(c).collect())
                .map_err(|e| bad(e.to_string()))?;
            if !psi.is_normalized(1e-9) {
                return Err(bad(format!("state is not normalized: {}", psi.norm_sqr())));
            }
            Ok(BuiltState::Pure(psi))
        }
        (None, Some(m)) => {
            if m.len() != d * d {
                return Err(bad(format!(
                    "density has {} entries, expected {}",
                    m.len(),
                    d * d
                )));
            }
            let mat = DMatrix::from_row_iterator(d, d, m.into_iter().map(c));
            Ok(BuiltState::Mixed(
                DensityMatrix::new(f.n, mat).map_err(|e| bad(e.to_string()))?,
            ))
        }
        _ => Err(bad(
            "state file needs exactly one of \"amplitudes\" and \"density\"",
        )),
    }
}

pub fn state_to_json(s: &BuiltState) -> String {
    let f = match s {
        BuiltState::Pure(psi) => StateFile {
            n: psi.n_qubits(),
            amplitudes: Some(psi.amplitudes().iter().copied().map(pair).collect()),
            density: None,
        },
        BuiltState::Mixed(rho) => {
            let m = rho.matrix();
            let d = m.nrows();
            StateFile {
                n: rho.n_qubits(),
                amplitudes: None,
                density: Some((0..d * d).map(|i| pair(m[(i / d, i % d)])).collect()),
            }
        }
    };
    crate::json::to_string(&f)
}

fn relation_name(r: Relation) -> &'static str {
    r.symbol()
}

pub fn report_value(r: &GadgetReport) -> Value {
    let params: Map<String, Value> = r
        .params
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    let measured: Map<String, Value> = r
        .measured()
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let bounds: Map<String, Value> = r
        .bounds()
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "relation": relation_name(c.relation),
                "measured": c.measured,
                "bound": c.bound,
                "tol": c.tol,
                "passed": c.passed,
            })
        })
        .collect();
    json!({
        "lemma_id": r.lemma,
        "params": params,
        "seed": r.seed,
        "measured": measured,
        "bounds": bounds,
        "passed": r.passed(),
        "checks": checks,
        "notes": r.notes,
    })
}

pub fn report_to_json(r: &GadgetReport) -> String {
    crate::json::to_string(&report_value(r))
}

/// Writes through a sibling temporary file and a rename, so readers never see
/// a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path
        .file_name()
        .ok_or_else(|| bad(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}
