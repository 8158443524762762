use std::path::Path;

use ramify::pc::{
    self, FillPolicy, GroupElement, PcGroup, PcPresentation, RelationTable, DEFAULT_CAP,
};
use ramify::rat::parse_rat;
use ramify::Rat;
use serde::de::DeserializeOwned;

use crate::error::{CliError, Exit};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        exit: Exit::Malformed,
        code: "io-error",
        message: e.to_string(),
        location: Some(path.display().to_string()),
        detail: None,
    })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::malformed(
            "parse-error",
            e.to_string(),
            format!("{origin}:{}:{}", e.line(), e.column()),
        )
    })
}

pub fn rational(s: &str, flag: &str) -> Result<Rat, CliError> {
    parse_rat(s).map_err(|e| CliError::malformed("bad-rational", e.to_string(), flag))
}

/// `1,0,2` or `[1,0,2]`.
pub fn element(s: &str, flag: &str) -> Result<GroupElement, CliError> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(GroupElement(Vec::new()));
    }
    inner
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map(GroupElement)
        .map_err(|_| {
            CliError::malformed(
                "bad-element",
                format!("cannot read exponent vector {s:?}"),
                flag,
            )
        })
}

pub fn elements(items: &[String], flag: &str, g: &PcGroup) -> Result<Vec<GroupElement>, CliError> {
    items
        .iter()
        .map(|s| {
            let x = element(s, flag)?;
            g.check_element(&x)
                .map_err(|e| CliError::from(e).at(format!("{flag} {s}")))?;
            Ok(x)
        })
        .collect()
}

/// Comma-separated positive integers.
pub fn index_list(s: &str, flag: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            CliError::malformed("bad-list", format!("cannot read integer list {s:?}"), flag)
        })
}

/// Enumeration cap, overridable with `RAMIFY_CAP`.
pub fn cap() -> Result<u64, CliError> {
    match std::env::var("RAMIFY_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::malformed(
                "bad-cap",
                format!("RAMIFY_CAP={v:?} is not an integer"),
                "RAMIFY_CAP",
            )
        }),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

/// A group read from a presentation file or named by `kind:args`.
pub fn group(
    file: Option<&Path>,
    builtin: Option<&str>,
    fill: Option<&Path>,
) -> Result<PcGroup, CliError> {
    let cap = cap()?;
    let pres = match (file, builtin) {
        (Some(path), None) => {
            let pres: PcPresentation = read_json(path)?;
            return PcGroup::with_cap(pres, cap)
                .map_err(|e| CliError::from(e).at(path.display().to_string()));
        }
        (None, Some(spec)) => builtin_group(spec, fill)?.presentation().clone(),
        _ => {
            return Err(CliError::malformed(
                "no-group",
                "give exactly one of --file and --builtin",
                "--file/--builtin",
            ))
        }
    };
    PcGroup::with_cap(pres, cap).map_err(CliError::from)
}

fn builtin_group(spec: &str, fill: Option<&Path>) -> Result<PcGroup, CliError> {
    let bad = || {
        CliError::malformed(
            "bad-builtin",
            format!("unknown group {spec:?}; expected heisenberg:P, elementary:P:N, cyclic:P:N or tower:P:D"),
            "--builtin",
        )
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |k: usize| {
        parts
            .get(k)
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(bad)
    };
    let p = || num(1).and_then(|p| u32::try_from(p).map_err(|_| bad()));
    if fill.is_some() && parts[0] != "tower" {
        return Err(CliError::malformed(
            "bad-fill",
            "--fill only applies to tower truncations",
            "--fill",
        ));
    }
    let g = match (parts[0], parts.len()) {
        ("heisenberg", 2) => pc::heisenberg(p()?),
        ("elementary", 3) => pc::elementary_abelian(p()?, num(2)?),
        ("cyclic", 3) => pc::cyclic(p()?, num(2)?),
        ("tower", 3) => {
            let policy = match fill {
                Some(path) => FillPolicy::Table(read_json::<RelationTable>(path)?),
                None => FillPolicy::Trivial,
            };
            pc::c_tower_truncation(p()?, num(2)?, &policy)
        }
        _ => return Err(bad()),
    };
    g.map_err(|e| CliError::from(e).at(spec.to_string()))
}
