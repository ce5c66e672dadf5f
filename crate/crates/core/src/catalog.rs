//! Named designs: the `builtin:` scheme and the catalogue used by the test
//! suites.
//!
//! ```text
//! builtin:sic               SIC POVM (d = 2, 3)
//! builtin:mub               full MUB set (prime d ≤ 13)
//! builtin:basis             computational basis (not a design)
//! builtin:sic-depol:t=0.5   depolarized SIC
//! builtin:mub-depol:t=0.5   depolarized MUB set
//! ```

use crate::designs::{basis_povm, depolarize, is_prime, mub_full_set, sic_povm, Povm, MAX_MUB_PRIME};
use crate::error::{Error, Result};

pub const BUILTIN_PREFIX: &str = "builtin:";

/// Depolarizing parameters used when enumerating the catalogue.
pub const CATALOGUE_T: [f64; 3] = [0.25, 0.5, 0.75];

fn parse_t(rest: &str) -> Result<f64> {
    let value = rest
        .strip_prefix("t=")
        .ok_or_else(|| Error::InvalidParameter(format!("expected 't=<value>' after the design kind, got '{rest}'")))?;
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse depolarizing parameter '{value}'")))
}

/// Resolve a `builtin:` name (prefix optional) in dimension `d`.
pub fn builtin_design(name: &str, d: usize) -> Result<Povm> {
    let name = name.strip_prefix(BUILTIN_PREFIX).unwrap_or(name);
    let (kind, rest) = match name.split_once(':') {
        Some((k, r)) => (k, Some(r)),
        None => (name, None),
    };
    match (kind, rest) {
        ("sic", None) => sic_povm(d),
        ("mub", None) => mub_full_set(d),
        ("basis", None) => basis_povm(d),
        ("sic-depol", Some(r)) => depolarize(&sic_povm(d)?, parse_t(r)?),
        ("mub-depol", Some(r)) => depolarize(&mub_full_set(d)?, parse_t(r)?),
        _ => Err(Error::InvalidParameter(format!(
            "unknown builtin design '{name}' (known: sic, mub, basis, sic-depol:t=<t>, mub-depol:t=<t>)"
        ))),
    }
}

/// Every catalogued conical 2-design in dimension `d`: the projective ones
/// available for `d` and their depolarized versions at [`CATALOGUE_T`].
pub fn conical_catalogue(d: usize) -> Vec<Povm> {
    let mut projective = Vec::new();
    if matches!(d, 2 | 3) {
        projective.push(sic_povm(d).expect("built-in SIC"));
    }
    if is_prime(d) && d <= MAX_MUB_PRIME {
        projective.push(mub_full_set(d).expect("prime d"));
    }
    let mut out = projective.clone();
    for p in &projective {
        for t in CATALOGUE_T {
            out.push(depolarize(p, t).expect("t in (0, 1]"));
        }
    }
    out
}
