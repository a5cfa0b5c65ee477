//! Enumeration caps.
//!
//! Bell and factorial growth make silently accepting a large `n` a foot-gun, so
//! every sweep checks one of these caps and fails loudly. The CLI reads
//! overrides from `FINFREE_LIMITS`, e.g. `partitions=11,permutations=8`.

use std::sync::RwLock;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest `n` for which `P(n)` is enumerated.
    pub partitions: usize,
    /// Largest `n` for which `S_n` is swept.
    pub permutations: usize,
    /// Largest `n` for pair sweeps over `P(n) x P(n)`.
    pub pair_sweep: usize,
    /// Largest `n` for genus layers with `k >= 2`.
    pub genus_high: usize,
    /// Largest `n` for genus layers with `k <= 1`.
    pub genus_low: usize,
    /// Largest `r + s` for annular sums.
    pub annular: usize,
    /// Largest `n` for non-crossing sums.
    pub noncrossing: usize,
    /// Largest `n` for the Mobius algebra check.
    pub mobius_algebra: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            partitions: 12,
            permutations: 9,
            pair_sweep: 8,
            genus_high: 7,
            genus_low: 8,
            annular: 9,
            noncrossing: 12,
            mobius_algebra: 6,
        }
    }
}

static CURRENT: RwLock<Option<Limits>> = RwLock::new(None);

impl Limits {
    /// The process-wide caps (defaults unless [`Limits::install`] was called).
    pub fn current() -> Limits {
        CURRENT
            .read()
            .ok()
            .and_then(|g| *g)
            .unwrap_or_default()
    }

    pub fn install(self) {
        if let Ok(mut g) = CURRENT.write() {
            *g = Some(self);
        }
    }

    /// Applies `key=value` overrides separated by commas.
    pub fn with_overrides(mut self, spec: &str) -> Result<Limits> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("limit override {item:?} is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("limit value in {item:?} is not an integer")))?;
            let slot = match key.trim() {
                "partitions" => &mut self.partitions,
                "permutations" => &mut self.permutations,
                "pair_sweep" => &mut self.pair_sweep,
                "genus_high" => &mut self.genus_high,
                "genus_low" => &mut self.genus_low,
                "annular" => &mut self.annular,
                "noncrossing" => &mut self.noncrossing,
                "mobius_algebra" => &mut self.mobius_algebra,
                other => return Err(Error::Parse(format!("unknown limit {other:?}"))),
            };
            *slot = value;
        }
        Ok(self)
    }

    pub fn from_env() -> Result<Limits> {
        match std::env::var("FINFREE_LIMITS") {
            Ok(spec) => Limits::default().with_overrides(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }
}

pub(crate) fn check(what: &'static str, got: usize, cap: usize) -> Result<()> {
    if got > cap {
        Err(Error::SizeLimit { what, got, cap })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let l = Limits::default()
            .with_overrides("partitions=10, annular=7")
            .unwrap();
        assert_eq!(l.partitions, 10);
        assert_eq!(l.annular, 7);
        assert!(Limits::default().with_overrides("bogus=1").is_err());
        assert!(Limits::default().with_overrides("partitions").is_err());
    }

    #[test]
    fn check_names_the_cap() {
        let err = check("n", 13, 12).unwrap_err();
        assert!(err.to_string().contains("cap is 12"));
    }
}
