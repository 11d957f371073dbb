use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use pitree::FiniteTree;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    TreeLeaves,
}

/// Header plus rows, rendered with `\n` line ends. Fields never contain commas.
pub struct Csv {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Csv {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.header.len());
        self.rows.push(fields);
    }

    fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// One command result in every format it supports.
pub struct Artifact {
    pub default: Format,
    json: String,
    csv: Option<Csv>,
    /// `Some(None)`: the command supports tree output but produced no tree.
    tree: Option<Option<FiniteTree>>,
}

impl Artifact {
    pub fn new(default: Format, value: &impl Serialize) -> Self {
        let mut json = serde_json::to_string_pretty(value).expect("artifacts serialize");
        json.push('\n');
        Artifact {
            default,
            json,
            csv: None,
            tree: None,
        }
    }

    pub fn with_csv(mut self, csv: Csv) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_tree(mut self, tree: Option<FiniteTree>) -> Self {
        self.tree = Some(tree);
        self
    }

    pub fn render(self, format: Option<Format>) -> Result<String, CliError> {
        match format.unwrap_or(self.default) {
            Format::Json => Ok(self.json),
            Format::Csv => self
                .csv
                .map(|c| c.render())
                .ok_or_else(|| CliError::Usage("this command has no csv output".into())),
            Format::TreeLeaves => match self.tree {
                Some(Some(t)) => Ok(t.to_leaves_format()),
                Some(None) => Err(CliError::Core(pitree::Error::Precondition(
                    "the result is empty and has no tree-leaves form".into(),
                ))),
                None => Err(CliError::Usage(
                    "this command has no tree-leaves output".into(),
                )),
            },
        }
    }
}

/// Writes to stdout, or to `out` resolved against `PITREE_OUT_DIR` when set.
pub fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os("PITREE_OUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, text)?;
            Ok(())
        }
    }
}
