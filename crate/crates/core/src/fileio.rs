//! Plain-text scheme files: a header-free grammar of whitespace-separated
//! integers, chosen so published catalog tables paste in directly.
//!
//! A file is `#`-comment lines interleaved with tokens; the first token is
//! the order `n`, the next `n²` are the colors row-major, and nothing may
//! follow. Colors must be contiguous from 0. Homogeneous files carry the
//! identity relation as color 0 — catalog files that number it differently
//! are renumbered by swapping, so the internal form stays canonical.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::schemes::CoherentConfiguration;

/// A parsed scheme file, in canonical numbering (identity color 0 for
/// homogeneous inputs). `colors` always agrees with the configuration the
/// file validated to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeFile {
    pub path: Option<PathBuf>,
    pub comments: Vec<String>,
    pub order: usize,
    pub colors: Vec<u32>,
}

/// Parses and validates scheme text. The returned configuration has passed
/// the full coherence axioms; anything structurally readable but incoherent
/// comes back as an `AxiomViolation` with its witness.
pub fn parse_scheme(text: &str) -> Result<(SchemeFile, CoherentConfiguration)> {
    let mut comments = Vec::new();
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix('#') {
            comments.push(rest.trim().to_string());
            continue;
        }
        tokens.extend(line.split_whitespace().map(|t| (i + 1, t)));
    }

    let mut it = tokens.iter();
    let &(line, tok) = it.next().ok_or_else(|| Error::Parse {
        line: 1,
        detail: "expected the order, found no tokens".into(),
    })?;
    let n: usize = tok.parse().map_err(|_| Error::Parse {
        line,
        detail: format!("expected the order (an integer), got `{tok}`"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line,
            detail: "the order must be at least 1".into(),
        });
    }

    let mut colors = Vec::with_capacity(n * n);
    let mut last_line = line;
    for seen in 0..n * n {
        let &(line, tok) = it.next().ok_or(Error::Parse {
            line: last_line,
            detail: format!("expected {} color entries, found {seen}", n * n),
        })?;
        last_line = line;
        let c: u32 = tok.parse().map_err(|_| Error::Parse {
            line,
            detail: format!("expected a color (an integer), got `{tok}`"),
        })?;
        colors.push(c);
    }
    if let Some(&(line, tok)) = it.next() {
        return Err(Error::Parse {
            line,
            detail: format!("unexpected `{tok}` after the {} color entries", n * n),
        });
    }

    let max = *colors.iter().max().expect("n ≥ 1");
    let mut seen = vec![false; max as usize + 1];
    for &c in &colors {
        seen[c as usize] = true;
    }
    if let Some(gap) = seen.iter().position(|&s| !s) {
        return Err(Error::Parse {
            line: last_line,
            detail: format!("colors must be contiguous from 0: {gap} never appears but {max} does"),
        });
    }

    canonicalize_identity(n, &mut colors);
    let config = CoherentConfiguration::validate(n, colors.clone())?;
    Ok((
        SchemeFile {
            path: None,
            comments,
            order: n,
            colors,
        },
        config,
    ))
}

/// Swaps a constant nonzero diagonal color with 0. Files written by this
/// module never need it; catalog files sometimes do.
fn canonicalize_identity(n: usize, colors: &mut [u32]) {
    let d = colors[0];
    if d == 0 || !(0..n).all(|i| colors[i * n + i] == d) {
        return;
    }
    for c in colors.iter_mut() {
        if *c == 0 {
            *c = d;
        } else if *c == d {
            *c = 0;
        }
    }
}

/// Reads and parses a scheme file from disk.
pub fn read_scheme(path: &Path) -> Result<(SchemeFile, CoherentConfiguration)> {
    let text = fs::read_to_string(path)?;
    let (mut file, config) = parse_scheme(&text)?;
    file.path = Some(path.to_path_buf());
    Ok((file, config))
}

/// Renders a configuration in the file grammar, one matrix row per line,
/// identity color 0 for homogeneous configurations.
pub fn write_scheme(c: &CoherentConfiguration) -> String {
    let n = c.order();
    let mut colors = c.colors().to_vec();
    canonicalize_identity(n, &mut colors);
    let mut out = String::new();
    out.push_str(&n.to_string());
    out.push('\n');
    for row in 0..n {
        for col in 0..n {
            if col > 0 {
                out.push(' ');
            }
            out.push_str(&colors[row * n + col].to_string());
        }
        out.push('\n');
    }
    out
}

/// Writes a configuration to disk in the file grammar.
pub fn write_scheme_to(path: &Path, c: &CoherentConfiguration) -> Result<()> {
    fs::write(path, write_scheme(c))?;
    Ok(())
}

/// SHA-256 of a file's raw bytes, lowercase hex — identifies report inputs.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}
