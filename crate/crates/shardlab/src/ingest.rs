//! Pipeline entry for rational simplicial arrangements given by normals: the
//! full shard machinery runs on the poset of regions without any group.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::geom::{parse_arrangement_file, Arrangement, GeomError};
use crate::num::{rank, Rat};
use crate::weak::RegionLattice;

/// An ingested arrangement with its poset of regions.
pub struct IngestedArrangement {
    pub arr: Arrangement<Rat>,
    pub lattice: RegionLattice,
    span_memo: Mutex<HashMap<Vec<u8>, u64>>,
}

impl IngestedArrangement {
    pub fn from_arrangement(arr: Arrangement<Rat>) -> Result<Self, GeomError> {
        let regions = arr.regions()?;
        let seps: Vec<u64> = regions
            .iter()
            .map(|r| r.sep.iter().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        let lattice = RegionLattice::from_seps(arr.n_hyperplanes(), seps);
        Ok(IngestedArrangement {
            arr,
            lattice,
            span_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_file_text(text: &str) -> Result<Self, GeomError> {
        Self::from_arrangement(parse_arrangement_file(text)?)
    }

    /// Hyperplanes whose normals lie in the span of the given ones.
    pub fn span_closure(&self, hyps: &[u8]) -> u64 {
        let mut key = hyps.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&m) = self.span_memo.lock().unwrap().get(&key) {
            return m;
        }
        let base: Vec<Vec<Rat>> = key
            .iter()
            .map(|&h| self.arr.normals[h as usize].clone())
            .collect();
        let r = rank(&base);
        let mut mask = 0u64;
        for (h, n) in self.arr.normals.iter().enumerate() {
            let mut rows = base.clone();
            rows.push(n.clone());
            if rank(&rows) == r {
                mask |= 1u64 << h;
            }
        }
        self.span_memo.lock().unwrap().insert(key, mask);
        mask
    }
}
