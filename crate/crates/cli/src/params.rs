//! Parameter parsing helpers for JSON-ish CLI values.

use serde_json::Value;
use whittaker_core::Complex;

pub struct ParamError(pub String);

fn value_to_complex(v: &Value) -> Result<Complex, ParamError> {
    match v {
        Value::Number(n) => Ok(Complex::new(
            n.as_f64().ok_or_else(|| ParamError("bad number".into()))?,
            0.0,
        )),
        Value::Array(parts) if parts.len() == 2 => {
            let re = parts[0]
                .as_f64()
                .ok_or_else(|| ParamError("bad [re, im] pair".into()))?;
            let im = parts[1]
                .as_f64()
                .ok_or_else(|| ParamError("bad [re, im] pair".into()))?;
            Ok(Complex::new(re, im))
        }
        Value::Object(map) => {
            let re = map
                .get("re")
                .and_then(Value::as_f64)
                .ok_or_else(|| ParamError("object form needs numeric re".into()))?;
            let im = map.get("im").and_then(Value::as_f64).unwrap_or(0.0);
            Ok(Complex::new(re, im))
        }
        other => Err(ParamError(format!(
            "expected number, [re, im] or {{re, im}}, got {other}"
        ))),
    }
}

/// Parse a JSON list of complex scalars; `expect_len = 0` skips the length
/// check.
pub fn parse_complex_list(text: &str, expect_len: usize) -> Result<Vec<Complex>, ParamError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| ParamError(format!("bad JSON list: {e}")))?;
    let Value::Array(items) = v else {
        return Err(ParamError("expected a JSON array".into()));
    };
    let out = items
        .iter()
        .map(value_to_complex)
        .collect::<Result<Vec<_>, _>>()?;
    if expect_len != 0 && out.len() != expect_len {
        return Err(ParamError(format!(
            "expected {expect_len} entries, got {}",
            out.len()
        )));
    }
    Ok(out)
}

/// Parse one complex scalar from a number, `[re, im]`, or `{re, im}` form.
pub fn parse_complex_scalar(text: &str) -> Result<Complex, ParamError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| ParamError(format!("bad JSON value: {e}")))?;
    value_to_complex(&v)
}

/// Echo complex values as `{re, im}` objects that re-parse exactly.
pub fn echo_complex_list(values: &[Complex]) -> Vec<serde_json::Value> {
    values
        .iter()
        .map(|z| serde_json::json!({"re": z.re, "im": z.im}))
        .collect()
}
