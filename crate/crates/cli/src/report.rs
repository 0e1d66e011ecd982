use dkz_core::json::canonical;
use serde_json::Value;
use std::io::Write;
use std::path::Path;

/// Canonical, pretty JSON with a trailing newline.
pub fn render(report: Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonical(report)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes next to the target and renames over it.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}
