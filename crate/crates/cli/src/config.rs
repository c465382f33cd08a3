//! Flat `key = value` config files. Keys are long flag names without the
//! leading dashes; flags given on the command line win.

use crate::Failure;

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key = value", i + 1));
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: bad key '{}'", i + 1, k.trim()));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn flag_key(arg: &str) -> Option<&str> {
    let rest = arg.strip_prefix("--")?;
    Some(rest.split_once('=').map_or(rest, |(k, _)| k))
}

/// Splices config-file entries into `argv` right after the subcommand, skipping
/// keys already given as flags. Returns the new argv and the config path.
pub fn merge_config(argv: &[String]) -> Result<(Vec<String>, Option<String>), Failure> {
    let mut args = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            match it.next() {
                Some(p) => path = Some(p.clone()),
                None => return Err(Failure::Usage("--config needs a file path".into())),
            }
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            args.push(a.clone());
        }
    }
    let Some(p) = path else {
        return Ok((args, None));
    };
    let text = std::fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("cannot read config {p}: {e}")))?;
    let entries = parse_config(&text).map_err(|e| Failure::Usage(format!("{p}: {e}")))?;
    let given: Vec<String> = args.iter().filter_map(|a| flag_key(a)).map(str::to_string).collect();
    let insert_at = args.iter().skip(1).position(|a| !a.starts_with('-')).map_or(args.len(), |i| i + 2);
    let extra: Vec<String> = entries
        .into_iter()
        .filter(|(k, _)| !given.contains(k))
        .map(|(k, v)| format!("--{k}={v}"))
        .collect();
    args.splice(insert_at..insert_at, extra);
    Ok((args, Some(p)))
}
