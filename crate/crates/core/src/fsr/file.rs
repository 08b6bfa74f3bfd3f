//! Line-oriented register description.
//!
//! ```text
//! # comment
//! n = 4
//! f3 = x0 + x1*x2      # omitted stages default to x_{i+1} (x_0 for the last)
//! z = x0 + x3
//! init = 1001           # optional, leftmost character is x_{n-1}
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::anf::BooleanFunction;

use super::{FsrError, FsrSpec, RegisterState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FsrFileError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing `{0} = ...` line")]
    Missing(&'static str),
    #[error(transparent)]
    Spec(#[from] FsrError),
}

/// A register description plus an optional initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsrFile {
    pub spec: FsrSpec,
    pub init: Option<RegisterState>,
}

impl FsrFile {
    pub fn new(spec: FsrSpec, init: Option<RegisterState>) -> Self {
        FsrFile { spec, init }
    }
}

impl FromStr for FsrFile {
    type Err = FsrFileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut n: Option<usize> = None;
        let mut feedback: Vec<(usize, usize, BooleanFunction)> = Vec::new();
        let mut output: Option<BooleanFunction> = None;
        let mut init: Option<(usize, RegisterState)> = None;

        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| FsrFileError::Line { line: line_no, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => {
                    let v = value
                        .parse()
                        .map_err(|_| err(format!("bad register length `{value}`")))?;
                    n = Some(v);
                }
                "z" => output = Some(value.parse().map_err(|e| err(format!("{e}")))?),
                "init" => {
                    let st: RegisterState = value.parse().map_err(|e| err(format!("{e}")))?;
                    init = Some((line_no, st));
                }
                _ => {
                    let stage = key
                        .strip_prefix('f')
                        .and_then(|i| i.parse::<usize>().ok())
                        .ok_or_else(|| err(format!("unknown key `{key}`")))?;
                    let f = value.parse().map_err(|e| err(format!("{e}")))?;
                    feedback.push((line_no, stage, f));
                }
            }
        }

        let n = n.ok_or(FsrFileError::Missing("n"))?;
        let output = output.ok_or(FsrFileError::Missing("z"))?;
        let mut spec = FsrSpec::shift_register(n)?;
        for (line, stage, f) in feedback {
            if stage >= n {
                return Err(FsrFileError::Line {
                    line,
                    msg: format!("stage f{stage} outside a register of length {n}"),
                });
            }
            spec.set_feedback(stage, f)
                .map_err(|e| FsrFileError::Line {
                    line,
                    msg: e.to_string(),
                })?;
        }
        spec.set_output(output)?;
        let init = match init {
            Some((line, st)) if st.len() != n => {
                return Err(FsrFileError::Line {
                    line,
                    msg: format!("initial state has {} bits, expected {n}", st.len()),
                })
            }
            Some((_, st)) => Some(st),
            None => None,
        };
        Ok(FsrFile { spec, init })
    }
}

impl fmt::Display for FsrFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec = &self.spec;
        writeln!(f, "n = {}", spec.n())?;
        for i in spec.nontrivial_stages() {
            writeln!(f, "f{i} = {}", spec.feedback(i))?;
        }
        writeln!(f, "z = {}", spec.output())?;
        if let Some(init) = &self.init {
            writeln!(f, "init = {init}")?;
        }
        Ok(())
    }
}
