use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;

pub const TOOL: &str = "holdtrack";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tool name, version, and resolved config, attached to every output.
pub fn provenance(config: &Config) -> Value {
    json!({ "tool": TOOL, "version": VERSION, "config": config })
}

/// Provenance as `#` comment lines for line-oriented text outputs.
pub fn comment_header(config: &Config) -> String {
    let cfg = serde_json::to_string(config).expect("config serializes");
    format!("# {TOOL} {VERSION}\n# config: {cfg}\n")
}

/// Writes `contents` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("writing {}", path.display()))?;
    tmp.write_all(contents).with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// `value` as pretty JSON with a `provenance` member added.
pub fn with_provenance<T: Serialize>(config: &Config, value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    let prov = provenance(config);
    match &mut v {
        Value::Object(map) => {
            map.insert("provenance".into(), prov);
        }
        other => {
            v = json!({ "provenance": prov, "data": other.take() });
        }
    }
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
