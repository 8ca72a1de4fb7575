use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::VarSpace;
use crate::error::{Error, Result};

/// Target geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// CP^{N−1}.
    ProjectiveSpace { n: u32 },
    /// Degree-k hypersurface in CP^{N−1}.
    Hypersurface { n: u32, k: u32 },
}

impl Model {
    pub fn cp(n: u32) -> Result<Self> {
        let m = Model::ProjectiveSpace { n };
        m.validate()?;
        Ok(m)
    }

    pub fn hyp(n: u32, k: u32) -> Result<Self> {
        let m = Model::Hypersurface { n, k };
        m.validate()?;
        Ok(m)
    }

    pub fn cp2() -> Self {
        Model::ProjectiveSpace { n: 3 }
    }

    pub fn m89() -> Self {
        Model::Hypersurface { n: 8, k: 9 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Model::ProjectiveSpace { n } if n >= 3 => Ok(()),
            Model::Hypersurface { n, k } if n >= 3 && k >= 1 => Ok(()),
            _ => Err(Error::Invalid(format!("unsupported model {self}"))),
        }
    }

    pub fn n(&self) -> u32 {
        match *self {
            Model::ProjectiveSpace { n } | Model::Hypersurface { n, .. } => n,
        }
    }

    pub fn k(&self) -> Option<u32> {
        match *self {
            Model::Hypersurface { k, .. } => Some(k),
            _ => None,
        }
    }

    /// Complex dimension of the target; the classical pairing is
    /// nonzero exactly when the exponents add up to it.
    pub fn dim(&self) -> i64 {
        match *self {
            Model::ProjectiveSpace { n } => n as i64 - 1,
            Model::Hypersurface { n, .. } => n as i64 - 2,
        }
    }

    /// ∫ h^{dim} over the target: 1 for projective space, k for the hypersurface.
    pub fn classical(&self) -> i64 {
        match *self {
            Model::ProjectiveSpace { .. } => 1,
            Model::Hypersurface { k, .. } => k as i64,
        }
    }

    /// File-name friendly identifier.
    pub fn key(&self) -> String {
        match *self {
            Model::ProjectiveSpace { n } => format!("cp{n}"),
            Model::Hypersurface { n, k } => format!("hyp{n}_{k}"),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Model::ProjectiveSpace { n } => write!(f, "cp:{n}"),
            Model::Hypersurface { n, k } => write!(f, "hyp:{n}:{k}"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad number `{t}` in model `{s}`")))
        };
        match parts.as_slice() {
            ["cp", n] => Model::cp(num(n)?),
            ["hyp", n, k] => Model::hyp(num(n)?, num(k)?),
            _ => Err(Error::Invalid(format!("model must be cp:N or hyp:N:k, got `{s}`"))),
        }
    }
}

/// Multiplicities of inserted classes O_{h^j}.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InsertionProfile(BTreeMap<u32, u32>);

impl InsertionProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut p = Self::new();
        for &(j, m) in pairs {
            p.add(j, m);
        }
        p
    }

    pub fn add(&mut self, j: u32, m: u32) {
        if m > 0 {
            *self.0.entry(j).or_insert(0) += m;
        }
    }

    pub fn with(&self, j: u32, m: u32) -> Self {
        let mut p = self.clone();
        p.add(j, m);
        p
    }

    pub fn get(&self, j: u32) -> u32 {
        self.0.get(&j).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(&j, &m)| (j, m))
    }

    pub fn count(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Σ m_j (j − 1).
    pub fn weight(&self) -> i64 {
        self.iter().map(|(j, m)| m as i64 * (j as i64 - 1)).sum()
    }
}

impl fmt::Display for InsertionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(j, m)| format!("{j}:{m}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for InsertionProfile {
    type Err = Error;

    /// Parses `j:m,j:m,...`; the empty string is the empty profile.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Self::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (j, m) = item
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("insertion `{item}` is not j:m")))?;
            let j = j.trim().parse().map_err(|_| Error::Invalid(format!("bad class in `{item}`")))?;
            let m = m.trim().parse().map_err(|_| Error::Invalid(format!("bad multiplicity in `{item}`")))?;
            p.add(j, m);
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorSpec {
    Closed { d: u32, a: i64, b: i64 },
    Open { d: u32, a: i64 },
}

/// A fully specified virtual structure constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrelatorSpec {
    pub model: Model,
    pub sector: SectorSpec,
    pub insertions: InsertionProfile,
}

impl CorrelatorSpec {
    pub fn closed(model: Model, d: u32, a: i64, b: i64, insertions: InsertionProfile) -> Self {
        CorrelatorSpec {
            model,
            sector: SectorSpec::Closed { d, a, b },
            insertions,
        }
    }

    pub fn open(model: Model, d: u32, a: i64, insertions: InsertionProfile) -> Self {
        CorrelatorSpec {
            model,
            sector: SectorSpec::Open { d, a },
            insertions,
        }
    }

    pub fn degree(&self) -> u32 {
        match self.sector {
            SectorSpec::Closed { d, .. } | SectorSpec::Open { d, .. } => d,
        }
    }

    /// Unique string used as the cache key.
    pub fn canonical(&self) -> String {
        match self.sector {
            SectorSpec::Closed { d, a, b } => {
                format!("{}|closed|d={d}|a={a}|b={b}|{}", self.model, self.insertions)
            }
            SectorSpec::Open { d, a } => format!("{}|open|d={d}|a={a}|{}", self.model, self.insertions),
        }
    }
}

impl fmt::Display for CorrelatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Positions of class exponents j in a series variable space. The class
/// j = 1 never appears; it is carried by the q-grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpace {
    classes: Vec<u32>,
}

impl ClassSpace {
    /// Classes 0, 2, 3, ..., j_max.
    pub fn upto(j_max: u32) -> Self {
        ClassSpace {
            classes: std::iter::once(0).chain(2..=j_max).collect(),
        }
    }

    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn j_max(&self) -> u32 {
        *self.classes.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn pos(&self, j: u32) -> Option<usize> {
        self.classes.iter().position(|&c| c == j)
    }

    pub fn vars(&self, prefix: &str) -> Arc<VarSpace> {
        VarSpace::new(self.classes.iter().map(|j| format!("{prefix}{j}"))).expect("distinct classes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_parse() {
        assert_eq!("cp:3".parse::<Model>().unwrap(), Model::cp2());
        assert_eq!(" hyp:8:9 ".parse::<Model>().unwrap(), Model::m89());
        assert!("cp:2".parse::<Model>().is_err());
        assert!("hyp:8".parse::<Model>().is_err());
        assert!("p:3".parse::<Model>().is_err());
    }

    #[test]
    fn profile_parse_merges_repeats() {
        let p: InsertionProfile = "2:1, 2:2,0:1".parse().unwrap();
        assert_eq!(p.get(2), 3);
        assert_eq!(p.get(0), 1);
        assert!("".parse::<InsertionProfile>().unwrap().is_empty());
        assert!("2".parse::<InsertionProfile>().is_err());
    }
}
