//! Conference key from pairwise keys by announcing XOR masks.
//!
//! Alice's key on her first link becomes the conference key `K`. Every user
//! who knows `K` and shares key `k` with a user who does not announces
//! `K ⊕ k`; the neighbour XORs the announcement with `k` and learns `K`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{label, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Announcement {
    pub from: Vertex,
    pub to: Vertex,
    pub mask: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConferenceKey {
    pub key: Vec<bool>,
    /// Public masks in the order they are announced.
    pub announcements: Vec<Announcement>,
    /// Key each user reconstructs, by vertex.
    pub reconstructed: BTreeMap<Vertex, Vec<bool>>,
}

pub fn xor_bits(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// Spreads Alice's key over `links`, where `keys[i]` is shared by the two
/// ends of `links[i]`.
pub fn xor_combine(
    keys: &[Vec<bool>],
    links: &[(Vertex, Vertex)],
    alice: Vertex,
) -> Result<ConferenceKey> {
    if keys.len() != links.len() || keys.is_empty() {
        return Err(Error::LengthMismatch(format!(
            "{} keys for {} links",
            keys.len(),
            links.len()
        )));
    }
    let len = keys[0].len();
    if keys.iter().any(|k| k.len() != len) {
        return Err(Error::LengthMismatch("pairwise keys differ in length".into()));
    }
    let first = links
        .iter()
        .position(|&(a, b)| a == alice || b == alice)
        .ok_or_else(|| Error::InsufficientCoverage(format!("user {} has no link", label(alice))))?;
    let key = keys[first].clone();
    let (a, b) = links[first];
    let partner = if a == alice { b } else { a };
    let mut known = BTreeMap::from([(alice, key.clone()), (partner, key.clone())]);
    let mut announcements = Vec::new();
    let mut used = vec![false; links.len()];
    used[first] = true;
    loop {
        let mut progressed = false;
        for (i, &(a, b)) in links.iter().enumerate() {
            if used[i] {
                continue;
            }
            let (from, to) = match (known.contains_key(&a), known.contains_key(&b)) {
                (true, false) => (a, b),
                (false, true) => (b, a),
                (true, true) => {
                    used[i] = true;
                    continue;
                }
                (false, false) => continue,
            };
            used[i] = true;
            progressed = true;
            let mask = xor_bits(&known[&from], &keys[i]);
            known.insert(to, xor_bits(&mask, &keys[i]));
            announcements.push(Announcement { from, to, mask });
        }
        if !progressed {
            break;
        }
    }
    let users = links.iter().flat_map(|&(a, b)| [a, b]);
    if let Some(v) = users.clone().find(|v| !known.contains_key(v)) {
        return Err(Error::InsufficientCoverage(format!(
            "user {} is not connected to user {}",
            label(v),
            label(alice)
        )));
    }
    Ok(ConferenceKey {
        key,
        announcements,
        reconstructed: known,
    })
}
