//! `--config FILE` support.
//!
//! The file holds `key = value` lines, where `key` is a long flag name of
//! the subcommand (with or without the leading dashes). Blank lines and
//! lines starting with `#` are ignored. A value of `true` turns a switch on
//! and `false` leaves it off. The file's entries are spliced in right after
//! the subcommand name; a key also given on the command line is skipped, so
//! explicit flags win.

use anyhow::{bail, Context, Result};
use std::ffi::OsString;
use std::path::Path;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`, got {line:?}", no + 1);
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            bail!("config line {}: empty key", no + 1);
        }
        out.push((key, v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Returns `args` with the config file's flags inserted after the subcommand.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    let entries = parse_config(&text)?;
    // the subcommand is the first argument after the binary that is not an
    // option or an option's value
    let mut pos = None;
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if s == "--config" || s == "--threads" {
            i += 2;
            continue;
        }
        if s.starts_with('-') {
            i += 1;
            continue;
        }
        pos = Some(i + 1);
        break;
    }
    let Some(pos) = pos else {
        return Ok(args);
    };
    let given: Vec<String> = args[pos..]
        .iter()
        .filter_map(|a| {
            let s = a.to_string_lossy();
            let flag = s.strip_prefix("--")?;
            Some(flag.split_once('=').map_or(flag, |(f, _)| f).to_string())
        })
        .collect();
    let mut injected = Vec::new();
    for (k, v) in entries {
        if given.contains(&k) {
            continue;
        }
        match v.as_str() {
            "true" => injected.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => {
                injected.push(OsString::from(format!("--{k}")));
                injected.push(OsString::from(v));
            }
        }
    }
    let mut out = args[..pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos..]);
    Ok(out)
}
