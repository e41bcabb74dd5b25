use serde_json::{Number, Value};

/// Below this magnitude a power is eigensolver noise and prints as zero.
const SNAP: f64 = 1e-12;

/// `x` rounded to 12 significant digits as a JSON number.
pub fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let x = if x.abs() < SNAP { 0.0 } else { x };
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}
