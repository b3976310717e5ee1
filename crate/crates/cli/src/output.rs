//! Output sinks and number formatting shared by all commands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`]; non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest text of the rounded value (exponent form for very small or
/// large magnitudes).
pub fn fmt_num(x: f64) -> String {
    format!("{:?}", round_sig(x))
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            *v = Value::from(round_sig(n.as_f64().expect("f64 number")));
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// `--out PATH` or stdout.
pub fn open(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// One pretty-printed JSON object with floats rounded.
pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut tree = serde_json::to_value(value)?;
    round_floats(&mut tree);
    let mut sink = open(out)?;
    serde_json::to_writer_pretty(&mut sink, &tree)?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(())
}

pub fn csv_writer(out: Option<&Path>) -> CliResult<csv::Writer<Box<dyn Write>>> {
    Ok(csv::Writer::from_writer(open(out)?))
}
