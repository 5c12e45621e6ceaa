//! Config files become extra command-line arguments inserted right after the
//! subcommand, so flags typed by the user (which come later) override them.

use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, Command};

#[derive(Debug)]
pub struct ConfigError(pub String);

fn load_table(path: &Path) -> Result<toml::Table, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if json {
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        toml::Table::try_from(v).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    } else {
        text.parse::<toml::Table>()
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }
}

fn long_names(cmd: &Command) -> Vec<String> {
    cmd.get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect()
}

fn is_flag(cmd: &Command, long: &str) -> bool {
    cmd.get_arguments()
        .find(|a| a.get_long() == Some(long))
        .is_some_and(|a| matches!(a.get_action(), ArgAction::SetTrue))
}

fn scalar(key: &str, v: &toml::Value) -> Result<String, ConfigError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        _ => Err(ConfigError(format!("key {key:?}: expected a scalar or list of scalars"))),
    }
}

fn push_key(out: &mut Vec<OsString>, cmd: &Command, key: &str, v: &toml::Value) -> Result<(), ConfigError> {
    if is_flag(cmd, key) {
        match v {
            toml::Value::Boolean(true) => out.push(format!("--{key}").into()),
            toml::Value::Boolean(false) => {}
            _ => return Err(ConfigError(format!("key {key:?} is a switch and takes true/false"))),
        }
        return Ok(());
    }
    let values = match v {
        toml::Value::Array(items) => items.iter().map(|x| scalar(key, x)).collect::<Result<Vec<_>, _>>()?,
        other => vec![scalar(key, other)?],
    };
    for s in values {
        out.push(format!("--{key}").into());
        out.push(s.into());
    }
    Ok(())
}

/// Arguments contributed by `path` for subcommand `sub`.
pub fn config_args(root: &Command, sub: &str, path: &Path) -> Result<Vec<OsString>, ConfigError> {
    let table = load_table(path)?;
    let subcmd = root
        .find_subcommand(sub)
        .ok_or_else(|| ConfigError(format!("unknown subcommand {sub}")))?;
    let sub_longs = long_names(subcmd);
    let global_longs = long_names(root);
    let owner = |k: &str| if global_longs.iter().any(|g| g == k) { root } else { subcmd };
    let any_long: Vec<String> = root
        .get_subcommands()
        .flat_map(long_names)
        .chain(long_names(root))
        .collect();
    let mut out = Vec::new();
    for (key, value) in &table {
        let key_norm = key.replace('_', "-");
        if key_norm == "config" {
            return Err(ConfigError("a config file cannot name another config file".into()));
        }
        if let toml::Value::Table(inner) = value {
            if root.find_subcommand(&key_norm).is_none() {
                return Err(ConfigError(format!("unknown section [{key}]")));
            }
            if key_norm != sub {
                continue;
            }
            for (k, v) in inner {
                let k = k.replace('_', "-");
                if !(sub_longs.contains(&k) || global_longs.contains(&k)) || k == "config" {
                    return Err(ConfigError(format!("[{key}] has no flag --{k}")));
                }
                push_key(&mut out, owner(&k), &k, v)?;
            }
            continue;
        }
        if !any_long.contains(&key_norm) {
            return Err(ConfigError(format!("no subcommand has a flag --{key_norm}")));
        }
        if sub_longs.contains(&key_norm) || global_longs.contains(&key_norm) {
            push_key(&mut out, owner(&key_norm), &key_norm, value)?;
        }
    }
    Ok(out)
}

/// `argv` with `extra` spliced in after the first occurrence of `sub`.
pub fn splice(argv: &[OsString], sub: &str, extra: Vec<OsString>) -> Vec<OsString> {
    let pos = argv.iter().skip(1).position(|a| a == sub).map(|p| p + 2).unwrap_or(argv.len());
    let mut out = argv[..pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[pos..]);
    out
}
