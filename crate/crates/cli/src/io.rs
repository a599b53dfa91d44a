use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use monoforge::formula::{
    read_clause_list, read_dimacs, read_json, write_clause_list, write_dimacs, write_json,
    Assignment, CnfFormula, Var,
};

use crate::Format;

/// Reads a file, or standard input for `-`.
pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes to a file, or standard output when no path is given.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn detect(text: &str) -> Format {
    match text.trim_start().chars().next() {
        Some('[') => Format::List,
        Some('{') => Format::Json,
        _ => Format::Dimacs,
    }
}

pub fn parse_formula(text: &str, format: Format) -> Result<CnfFormula> {
    let format = if format == Format::Auto {
        detect(text)
    } else {
        format
    };
    let parsed = match format {
        Format::Dimacs => read_dimacs(text),
        Format::List => read_clause_list(text),
        Format::Json => read_json(text),
        Format::Qdimacs => bail!("qdimacs input is only accepted by `qbf`"),
        Format::Auto => unreachable!("resolved above"),
    };
    Ok(parsed?)
}

pub fn read_formula(path: &Path, format: Format) -> Result<CnfFormula> {
    let text = read_text(path)?;
    parse_formula(&text, format).with_context(|| format!("parsing {}", path.display()))
}

pub fn render_formula(f: &CnfFormula, format: Format) -> Result<String> {
    Ok(match format {
        Format::Dimacs | Format::Auto => write_dimacs(f),
        Format::List => write_clause_list(f),
        Format::Json => write_json(f),
        Format::Qdimacs => bail!("qdimacs output needs a quantifier prefix"),
    })
}

/// Signed literals separated by whitespace; `v` prefixes, `s` and `c`
/// lines and a terminating 0 are ignored.
pub fn parse_assignment(text: &str, n_vars: u32) -> Result<Assignment> {
    let mut a = Assignment::new(n_vars);
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('s') || line.starts_with('c') {
            continue;
        }
        for token in line.trim_start_matches('v').split_whitespace() {
            let value: i64 = token
                .parse()
                .with_context(|| format!("bad literal `{token}`"))?;
            if value == 0 {
                continue;
            }
            let id = u32::try_from(value.unsigned_abs()).context("literal out of range")?;
            a.set(Var::new(id), value > 0);
        }
    }
    Ok(a)
}

pub fn render_assignment(a: &Assignment) -> String {
    let lits: Vec<String> = a.to_dimacs().iter().map(i32::to_string).collect();
    format!("v {} 0", lits.join(" "))
}
