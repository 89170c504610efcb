//! File batches over `r`-subsets of servers and the output-function partition.

use std::collections::BTreeSet;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::combinatorics::subsets_of_size;
use crate::config::ValidatedConfig;

/// A disjoint batch of `eta1` files stored on exactly the servers of `servers`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    pub servers: Vec<usize>,
    pub files: Vec<usize>,
}

/// The CDC placement: one batch per `r`-subset, plus per-server views.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    config: ValidatedConfig,
    batches: Vec<Batch>,
    /// `server_files[k - 1]` is `M_k`.
    server_files: Vec<BTreeSet<usize>>,
    /// `server_functions[k - 1]` is `W_k`.
    server_functions: Vec<BTreeSet<usize>>,
    /// `file_batch[n - 1]` is the index into `batches` holding file `n`.
    file_batch: Vec<usize>,
}

/// Assigns file indices `[(i-1)*eta1 + 1 : i*eta1]` to the `i`-th `r`-subset
/// in lexicographic order and derives each server's file set.
pub fn place_files(cfg: &ValidatedConfig) -> (Vec<Batch>, Vec<BTreeSet<usize>>) {
    let mut server_files = vec![BTreeSet::new(); cfg.k];
    let batches: Vec<Batch> = subsets_of_size(cfg.k, cfg.r)
        .into_iter()
        .enumerate()
        .map(|(i, servers)| {
            let files: Vec<usize> = (i * cfg.eta1 + 1..=(i + 1) * cfg.eta1).collect();
            for &s in &servers {
                server_files[s - 1].extend(files.iter().copied());
            }
            Batch { servers, files }
        })
        .collect();
    (batches, server_files)
}

/// Round-robin partition: `W_k = {k, k + K, k + 2K, ...}`.
pub fn assign_functions(cfg: &ValidatedConfig) -> Vec<BTreeSet<usize>> {
    (1..=cfg.k)
        .map(|k| (0..cfg.eta2).map(|i| k + i * cfg.k).collect())
        .collect()
}

impl Placement {
    pub fn new(cfg: &ValidatedConfig) -> Self {
        let (batches, server_files) = place_files(cfg);
        let server_functions = assign_functions(cfg);
        let mut file_batch = vec![0; cfg.n];
        for (i, batch) in batches.iter().enumerate() {
            for &n in &batch.files {
                file_batch[n - 1] = i;
            }
        }
        Placement { config: *cfg, batches, server_files, server_functions, file_batch }
    }

    pub fn config(&self) -> &ValidatedConfig {
        &self.config
    }

    pub fn batches(&self) -> &[Batch] {
        &self.batches
    }

    /// `M_k` for a 1-based server index.
    pub fn files_of(&self, server: usize) -> &BTreeSet<usize> {
        &self.server_files[server - 1]
    }

    /// `W_k` for a 1-based server index.
    pub fn functions_of(&self, server: usize) -> &BTreeSet<usize> {
        &self.server_functions[server - 1]
    }

    /// The server owning output function `q`.
    pub fn owner_of_function(&self, q: usize) -> usize {
        (q - 1) % self.config.k + 1
    }

    /// The `r` servers storing file `n`.
    pub fn storers_of(&self, file: usize) -> &[usize] {
        &self.batches[self.file_batch[file - 1]].servers
    }

    pub fn stores(&self, server: usize, file: usize) -> bool {
        self.server_files[server - 1].contains(&file)
    }

    /// The batch `M_T` for a sorted `r`-subset `T`, if it is one.
    pub fn batch_for(&self, servers: &[usize]) -> Option<&Batch> {
        self.batches
            .binary_search_by(|b| b.servers.as_slice().cmp(servers))
            .ok()
            .map(|i| &self.batches[i])
    }

    /// `sum_k |M_k| / N` as an exact `(numerator, denominator)` pair.
    pub fn load_redundancy(&self) -> (usize, usize) {
        (self.server_files.iter().map(BTreeSet::len).sum(), self.config.n)
    }
}

struct BatchMap<'a>(&'a [Batch]);

impl Serialize for BatchMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for batch in self.0 {
            let key = batch.servers.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            map.serialize_entry(&key, &batch.files)?;
        }
        map.end()
    }
}

/// JSON shape: `{"batches": {"1,2": [1, 2], ...}, "server_files": [[...], ...],
/// "server_functions": [[...], ...]}` with per-server lists in server order.
impl Serialize for Placement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Placement", 3)?;
        s.serialize_field("batches", &BatchMap(&self.batches))?;
        s.serialize_field("server_files", &self.server_files)?;
        s.serialize_field("server_functions", &self.server_functions)?;
        s.end()
    }
}
