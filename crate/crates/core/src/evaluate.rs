//! Driver that evaluates correlators with radius retries, memoization and
//! parallel scheduling.

use std::sync::Arc;

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::algebra::FactoredRational;
use crate::cache::VscCache;
use crate::closed::vsc_closed_with;
use crate::error::{Error, Result};
use crate::model::{CorrelatorSpec, SectorSpec};
use crate::open::vsc_open_with;
use crate::residue::{ascending, iterated_residue, RadiusProfile};

pub const DEFAULT_RETRIES: u32 = 8;

/// Iterated residue in ascending order; an indecisive pole triggers a
/// retry with independently perturbed radii.
pub fn residue_with_retry(f: &FactoredRational, profile: &RadiusProfile, retries: u32) -> Result<BigRational> {
    let order = ascending(f.space().len());
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut current = profile.clone();
    let mut last = None;
    for _ in 0..=retries {
        match iterated_residue(f, &current, &order) {
            Err(e @ Error::IndecisivePole { .. }) => {
                log::debug!("retrying with perturbed radii after: {e}");
                last = Some(e);
                current = profile.perturbed(&mut rng);
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

#[derive(Debug, Clone)]
pub struct Evaluator {
    cache: Arc<VscCache>,
    retries: u32,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Evaluator {
            cache: Arc::new(VscCache::in_memory()),
            retries: DEFAULT_RETRIES,
        }
    }

    pub fn with_cache(cache: Arc<VscCache>, retries: u32) -> Self {
        Evaluator { cache, retries }
    }

    pub fn cache(&self) -> &Arc<VscCache> {
        &self.cache
    }

    pub fn retries(&self) -> u32 {
        self.retries
    }

    /// Value of one correlator, from the cache when present.
    pub fn vsc(&self, spec: &CorrelatorSpec) -> Result<BigRational> {
        if let Some(v) = self.cache.get(spec) {
            return Ok(v);
        }
        let v = match spec.sector {
            SectorSpec::Closed { .. } => vsc_closed_with(spec, self.retries)?,
            SectorSpec::Open { .. } => vsc_open_with(spec, self.retries)?,
        };
        self.cache.put(spec, &v)?;
        Ok(v)
    }

    /// Evaluates many correlators in parallel, most expensive first.
    pub fn vsc_many(&self, specs: &[CorrelatorSpec]) -> Result<Vec<BigRational>> {
        let mut idx: Vec<usize> = (0..specs.len()).collect();
        idx.sort_by_key(|&i| std::cmp::Reverse((specs[i].degree(), specs[i].insertions.count())));
        let mut vals: Vec<(usize, BigRational)> = idx
            .par_iter()
            .with_max_len(1)
            .map(|&i| self.vsc(&specs[i]).map(|v| (i, v)))
            .collect::<Result<_>>()?;
        vals.sort_by_key(|(i, _)| *i);
        Ok(vals.into_iter().map(|(_, v)| v).collect())
    }
}
