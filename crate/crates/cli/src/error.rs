use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("problem file not found: {0}")]
    FileNotFound(String),
    #[error("could not read {path}: {message}")]
    Io { path: String, message: String },
    #[error("schema violation at `{path}`: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },
    #[error("command `{command}` is not applicable: {reason}")]
    NotApplicable { command: String, reason: String },
    #[error("{module} error {kind}: {message}")]
    Module { module: &'static str, kind: String, message: String },
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::SchemaViolation { path: path.into(), message: message.into() }
    }

    /// Wraps a module error, keeping its variant name.
    pub fn module<E: std::fmt::Debug + std::fmt::Display>(module: &'static str, e: E) -> Self {
        let debug = format!("{e:?}");
        let kind = innermost_variant(&debug);
        CliError::Module { module, kind, message: e.to_string() }
    }

    /// True for internal cross-check failures.
    pub fn is_cross_check(&self) -> bool {
        matches!(self, CliError::Module { kind, .. } if kind == "CrossCheckMismatch")
    }

    /// 2 for input errors, 3 for internal cross-check failures.
    pub fn exit_code(&self) -> i32 {
        if self.is_cross_check() {
            3
        } else {
            2
        }
    }
}

/// `Outer(Inner { .. })` → `Inner`; wrapper variants are skipped.
fn innermost_variant(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
        let name = &rest[..end];
        let tail = rest[end..].trim_start();
        let wrapper = matches!(name, "Geometry" | "Expr" | "Involutivity" | "Torsion");
        if wrapper && tail.starts_with('(') {
            rest = tail[1..].trim_start();
            continue;
        }
        return name.to_string();
    }
}
