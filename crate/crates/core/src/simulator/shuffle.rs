use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::combinatorics::subsets_of_size;
use crate::lp::SplitPlan;
use crate::placement::Placement;

use super::plan::{check_split_plan, exchange_lists, unicast_sender};
use super::{map_oracle, ComputationPlan, IvId, Part, Payload, SimError};

/// One shuffle message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub sender: usize,
    /// Servers that decode something from this message; never includes the sender.
    pub audience: Vec<usize>,
    /// The `(r+1)`-subset whose exchange this belongs to.
    pub subset: Vec<usize>,
    /// Split size of the round (`r` for plain CDC).
    pub split_size: usize,
    /// Equal-length parts XOR-ed into the payload.
    pub composition: Vec<Part>,
    pub payload: Payload,
}

impl Transmission {
    pub fn bits(&self) -> usize {
        self.payload.len()
    }

    /// A JSON-lines record; `payload` (hex of the LSB-first bytes) only when asked.
    pub fn to_json(&self, with_payload: bool) -> Value {
        let composition: Vec<Value> = self
            .composition
            .iter()
            .map(|p| json!({"q": p.iv.q, "n": p.iv.n, "part": p.index, "parts": p.count}))
            .collect();
        let mut v = json!({
            "sender": self.sender,
            "audience": self.audience,
            "subset": self.subset,
            "split_size": self.split_size,
            "composition": composition,
            "bits": self.bits(),
        });
        if with_payload {
            let hex: String = self.payload.as_raw_slice().iter().map(|b| format!("{b:02x}")).collect();
            v["payload"] = Value::String(hex);
        }
        v
    }
}

/// What one server holds: values it mapped itself, values it decoded, and
/// parts of values still being assembled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ServerStore {
    pub computed: BTreeMap<IvId, Payload>,
    pub decoded: BTreeMap<IvId, Payload>,
    pub pending: BTreeMap<IvId, Vec<Option<Payload>>>,
}

impl ServerStore {
    /// Map phase: every server computes exactly the values in its plan.
    pub fn map_all(placement: &Placement, plan: &ComputationPlan, seed: u64) -> Result<Vec<ServerStore>, SimError> {
        plan.check_local(placement)?;
        let bits = placement.config().t;
        Ok((1..=plan.servers())
            .map(|k| ServerStore {
                computed: plan.server(k).iter().map(|&iv| (iv, map_oracle(seed, iv, bits))).collect(),
                ..ServerStore::default()
            })
            .collect())
    }

    /// A value available for reduce, local first.
    pub fn value(&self, iv: &IvId) -> Option<&Payload> {
        self.computed.get(iv).or_else(|| self.decoded.get(iv))
    }
}

#[derive(Debug, Clone)]
pub struct ShuffleOutcome {
    pub log: Vec<Transmission>,
    pub stores: Vec<ServerStore>,
}

fn part_of(value: &Payload, index: usize, count: usize) -> &bitvec::slice::BitSlice<u8> {
    let len = value.len() / count;
    &value[index * len..(index + 1) * len]
}

/// CDC exchange inside `group` for round `round`: each value `lists[i][round]`
/// destined to member `i` is cut into `|group| - 1` parts, one per other
/// member in ascending order, and every member broadcasts the XOR of its parts.
fn encode_group(
    stores: &[ServerStore],
    subset: &[usize],
    group: &[usize],
    lists: &[Vec<IvId>],
    round: usize,
    split_size: usize,
    log: &mut Vec<Transmission>,
) -> Result<(), SimError> {
    let count = group.len() - 1;
    for &sender in group {
        let store = &stores[sender - 1];
        let mut composition = Vec::with_capacity(count);
        let mut payload: Option<Payload> = None;
        let mut missing = Vec::new();
        for &receiver in group.iter().filter(|&&i| i != sender) {
            let iv = lists[subset.iter().position(|&s| s == receiver).unwrap()][round];
            let index = group.iter().filter(|&&j| j != receiver).position(|&j| j == sender).unwrap();
            composition.push(Part { iv, index, count });
            let Some(value) = store.computed.get(&iv) else {
                missing.push(iv);
                continue;
            };
            let part = part_of(value, index, count);
            match payload.as_mut() {
                None => payload = Some(part.to_bitvec()),
                Some(acc) => *acc ^= part,
            }
        }
        if !missing.is_empty() {
            return Err(SimError::MissingSideInformation { server: sender, sender, missing });
        }
        log.push(Transmission {
            sender,
            audience: group.iter().copied().filter(|&i| i != sender).collect(),
            subset: subset.to_vec(),
            split_size,
            composition,
            payload: payload.expect("group has at least two members"),
        });
    }
    Ok(())
}

fn encode_unicast(
    stores: &[ServerStore],
    subset: &[usize],
    receiver: usize,
    iv: IvId,
    split_size: usize,
    log: &mut Vec<Transmission>,
) -> Result<(), SimError> {
    let sender = unicast_sender(subset, receiver);
    let value = stores[sender - 1]
        .computed
        .get(&iv)
        .ok_or_else(|| SimError::MissingSideInformation { server: sender, sender, missing: vec![iv] })?;
    log.push(Transmission {
        sender,
        audience: vec![receiver],
        subset: subset.to_vec(),
        split_size,
        composition: vec![Part { iv, index: 0, count: 1 }],
        payload: value.clone(),
    });
    Ok(())
}

/// Encodes the CDC shuffle: for every `(r+1)`-subset `S` in lexicographic
/// order and every round `m < eta1 eta2`, each member of `S` broadcasts one
/// `T/r`-bit XOR. Produces `C(K, r+1) (r+1) eta1 eta2` transmissions.
pub fn encode_cdc(placement: &Placement, stores: &[ServerStore]) -> Result<Vec<Transmission>, SimError> {
    let cfg = placement.config();
    let mut log = Vec::new();
    for subset in subsets_of_size(cfg.k, cfg.r + 1) {
        let lists = exchange_lists(placement, &subset);
        for round in 0..cfg.eta1 * cfg.eta2 {
            encode_group(stores, &subset, &subset, &lists, round, cfg.r, &mut log)?;
        }
    }
    Ok(log)
}

/// Encodes the S-CDC shuffle under an integer split plan; see
/// [`super::scdc_computation_plan`] for how subsets are cut into groups.
pub fn encode_scdc(placement: &Placement, stores: &[ServerStore], split: &SplitPlan) -> Result<Vec<Transmission>, SimError> {
    check_split_plan(placement, split)?;
    let cfg = placement.config();
    let mut log = Vec::new();
    for subset in subsets_of_size(cfg.k, cfg.r + 1) {
        let lists = exchange_lists(placement, &subset);
        for round in 0..split.total() {
            let size = split.split_for_round(round).expect("round within plan");
            let round = round as usize;
            for group in subset.chunks(size + 1) {
                if let [lone] = group {
                    let iv = lists[subset.iter().position(|s| s == lone).unwrap()][round];
                    encode_unicast(stores, &subset, *lone, iv, size, &mut log)?;
                } else {
                    encode_group(stores, &subset, group, &lists, round, size, &mut log)?;
                }
            }
        }
    }
    Ok(log)
}

/// Decodes every transmission at its audience using only locally mapped side
/// information: each receiver XORs out the parts it computed and must be left
/// with exactly one unknown part.
pub fn deliver(placement: &Placement, stores: &mut [ServerStore], log: &[Transmission]) -> Result<(), SimError> {
    let bits = placement.config().t;
    for tx in log {
        for part in &tx.composition {
            if part.count == 0 || !bits.is_multiple_of(part.count) || bits / part.count != tx.bits() || part.index >= part.count {
                return Err(SimError::Malformed {
                    sender: tx.sender,
                    reason: format!("part {}/{} of {} does not match a {}-bit payload", part.index, part.count, part.iv, tx.bits()),
                });
            }
        }
        for &receiver in &tx.audience {
            let store = &mut stores[receiver - 1];
            let unknown: Vec<&Part> = tx.composition.iter().filter(|p| !store.computed.contains_key(&p.iv)).collect();
            let target = match unknown.as_slice() {
                [] => continue,
                [one] => **one,
                many => {
                    return Err(SimError::MissingSideInformation {
                        server: receiver,
                        sender: tx.sender,
                        missing: many.iter().map(|p| p.iv).collect(),
                    })
                }
            };
            let mut recovered = tx.payload.clone();
            for p in tx.composition.iter().filter(|p| p.iv != target.iv) {
                recovered ^= part_of(&store.computed[&p.iv], p.index, p.count);
            }
            let slots = store.pending.entry(target.iv).or_insert_with(|| vec![None; target.count]);
            if slots.len() != target.count {
                return Err(SimError::Malformed {
                    sender: tx.sender,
                    reason: format!("{} split inconsistently", target.iv),
                });
            }
            slots[target.index] = Some(recovered);
            if slots.iter().all(Option::is_some) {
                let parts = store.pending.remove(&target.iv).unwrap();
                let mut whole = Payload::with_capacity(bits);
                for part in parts.into_iter().flatten() {
                    whole.extend_from_bitslice(&part);
                }
                store.decoded.insert(target.iv, whole);
            }
        }
    }
    Ok(())
}

/// Map, CDC-encode and decode in one go.
pub fn cdc_shuffle(placement: &Placement, plan: &ComputationPlan, seed: u64) -> Result<ShuffleOutcome, SimError> {
    let mut stores = ServerStore::map_all(placement, plan, seed)?;
    let log = encode_cdc(placement, &stores)?;
    deliver(placement, &mut stores, &log)?;
    Ok(ShuffleOutcome { log, stores })
}

/// Map, S-CDC-encode and decode in one go.
pub fn scdc_shuffle(
    placement: &Placement,
    plan: &ComputationPlan,
    split: &SplitPlan,
    seed: u64,
) -> Result<ShuffleOutcome, SimError> {
    check_split_plan(placement, split)?;
    let mut stores = ServerStore::map_all(placement, plan, seed)?;
    let log = encode_scdc(placement, &stores, split)?;
    deliver(placement, &mut stores, &log)?;
    Ok(ShuffleOutcome { log, stores })
}
