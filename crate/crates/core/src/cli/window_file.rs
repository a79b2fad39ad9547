//! JSON window files for custom interactions.
//!
//! ```json
//! { "lo": -1, "hi": 1,
//!   "entries": [ { "i": 0, "j": -1, "re": 0.5 }, { "i": 0, "j": 1, "re": 0.5, "im": 0.0 } ] }
//! ```
//!
//! `im` defaults to zero. Unknown fields, out-of-range indices and repeated
//! `(i, j)` pairs are rejected.

use std::collections::BTreeSet;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::window::InteractionWindow;

#[derive(Debug, Error)]
pub enum WindowFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed window file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate entry ({0}, {1})")]
    Duplicate(i64, i64),
    #[error(transparent)]
    Window(#[from] crate::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowEntry {
    pub i: i64,
    pub j: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomWindowFile {
    pub lo: i64,
    pub hi: i64,
    pub entries: Vec<WindowEntry>,
}

impl CustomWindowFile {
    pub fn parse(text: &str) -> Result<Self, WindowFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, WindowFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| WindowFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_window(&self) -> Result<InteractionWindow, WindowFileError> {
        let mut seen = BTreeSet::new();
        let mut w = InteractionWindow::new(self.lo, self.hi)?;
        for e in &self.entries {
            if !seen.insert((e.i, e.j)) {
                return Err(WindowFileError::Duplicate(e.i, e.j));
            }
            w.set(e.i, e.j, Complex64::new(e.re, e.im))?;
        }
        Ok(w)
    }

    pub fn from_window(w: &InteractionWindow) -> Self {
        CustomWindowFile {
            lo: w.lo(),
            hi: w.hi(),
            entries: w
                .entries()
                .map(|((i, j), v)| WindowEntry {
                    i,
                    j,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("window file serialises")
    }
}

/// Reads and validates a window file in one step.
pub fn load_window(path: &Path) -> Result<InteractionWindow, WindowFileError> {
    CustomWindowFile::load(path)?.to_window()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_pt_delta_pair;

    #[test]
    fn parses_minimal_file() {
        let f = CustomWindowFile::parse(r#"{"lo":0,"hi":0,"entries":[{"i":0,"j":0,"re":0.8}]}"#)
            .unwrap();
        let w = f.to_window().unwrap();
        assert_eq!(w.get(0, 0), Complex64::new(0.8, 0.0));
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(CustomWindowFile::parse(r#"{"lo":0,"hi":0,"entries":[],"scale":2}"#).is_err());
        assert!(CustomWindowFile::parse(
            r#"{"lo":0,"hi":0,"entries":[{"i":0,"j":0,"re":1,"x":1}]}"#
        )
        .is_err());
    }

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        let f = CustomWindowFile::parse(
            r#"{"lo":0,"hi":1,"entries":[{"i":0,"j":1,"re":1},{"i":0,"j":1,"re":2}]}"#,
        )
        .unwrap();
        assert!(matches!(
            f.to_window(),
            Err(WindowFileError::Duplicate(0, 1))
        ));
        let f =
            CustomWindowFile::parse(r#"{"lo":0,"hi":1,"entries":[{"i":0,"j":2,"re":1}]}"#).unwrap();
        assert!(matches!(f.to_window(), Err(WindowFileError::Window(_))));
        let f = CustomWindowFile::parse(r#"{"lo":2,"hi":1,"entries":[]}"#).unwrap();
        assert!(f.to_window().is_err());
    }

    #[test]
    fn round_trips_a_model_window() {
        let w = build_pt_delta_pair(3, 0.45).unwrap();
        let text = CustomWindowFile::from_window(&w).to_json();
        assert_eq!(
            CustomWindowFile::parse(&text).unwrap().to_window().unwrap(),
            w
        );
    }
}
