use std::path::PathBuf;

use serde::Serialize;

use crate::CliError;

/// Writes artifacts into `--out DIR`, or to stdout when no directory is given.
pub struct Sink {
    pub dir: Option<PathBuf>,
    pub deterministic: bool,
}

impl Sink {
    fn emit(&self, name: &str, body: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
                let path = dir.join(name);
                std::fs::write(&path, body)
                    .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
            }
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }

    pub fn csv(&self, name: &str, body: &str) -> Result<(), CliError> {
        if self.deterministic {
            return self.emit(name, body);
        }
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        self.emit(name, &format!("# generated_unix={secs}\n{body}"))
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(e.to_string()))?;
        text.push('\n');
        self.emit(name, &text)
    }
}
