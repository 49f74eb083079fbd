//! JSON serialization with fixed float formatting.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips `f64` exactly and makes outputs byte-identical across runs
//! regardless of the shortest-representation heuristics of the default
//! serializer.

use serde::Serialize;
use std::io;

struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes `value` as compact JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes valid UTF-8"))
}

/// Fixed 17-significant-digit rendering for CSV and report output.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let values = [
            0.0,
            1.0,
            -1.8 * std::f64::consts::PI,
            f64::MIN_POSITIVE,
            1.0 / 3.0,
            5.654866776461628,
        ];
        for &v in &values {
            let s = to_json_string(&v).unwrap();
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{s}");
        }
    }

    #[test]
    fn serialization_is_deterministic() {
        #[derive(Serialize)]
        struct Payload {
            xs: Vec<f64>,
            n: usize,
        }
        let p = Payload {
            xs: vec![0.1, 0.2, 0.30000000000000004],
            n: 3,
        };
        assert_eq!(to_json_string(&p).unwrap(), to_json_string(&p).unwrap());
    }
}
