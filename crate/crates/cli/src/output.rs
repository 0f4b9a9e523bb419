use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Significant digits of every number written to a file.
pub const DIGITS: usize = 9;

pub fn round(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x);
    // No negative zero in files.
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(data: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(data)?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    for r in rows {
        w.serialize(r).map_err(io::Error::other)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}

/// `explicit` if given, else `<dir>/<name>`, creating parent directories.
pub fn write(
    explicit: Option<&Path>,
    dir: &Path,
    name: &str,
    contents: &str,
) -> io::Result<PathBuf> {
    let path = explicit
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.join(name));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&path, contents)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_nine_digits() {
        assert_eq!(round(0.6268510148499474), 0.626851015);
        assert_eq!(round(-1.234567891234e-7), -1.23456789e-7);
        assert_eq!(round(-1e-320), -1e-320);
        assert_eq!(round(0.0), 0.0);
    }

    #[test]
    fn json_numbers_are_rounded_recursively() {
        let s = to_json(&serde_json::json!({"a": [1.0f64 / 3.0, {"b": 2.0f64 / 3.0}], "n": 7}))
            .unwrap();
        assert!(s.contains("0.333333333"));
        assert!(s.contains("0.666666667"));
        assert!(s.contains("\"n\": 7"));
    }
}
