//! Sorted id-sets over attributes and objects.
//!
//! Both set kinds are plain strictly ascending `u32` vectors. They are the
//! currency exchanged between the context, the miner, the oracle and the
//! reports; the hot loops work on bitsets and convert at the boundary.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

macro_rules! id_set {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
        pub struct $name(Vec<u32>);

        impl $name {
            /// The empty set.
            pub fn empty() -> Self {
                Self(Vec::new())
            }

            /// Wraps an already sorted, duplicate-free id list.
            pub fn new(ids: Vec<u32>) -> Result<Self> {
                if ids.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid(format!(
                        concat!($what, " ids must be strictly ascending, got {:?}"),
                        ids
                    )));
                }
                Ok(Self(ids))
            }

            /// Sorts and deduplicates arbitrary ids.
            pub fn from_unsorted<I: IntoIterator<Item = u32>>(ids: I) -> Self {
                let mut v: Vec<u32> = ids.into_iter().collect();
                v.sort_unstable();
                v.dedup();
                Self(v)
            }

            /// All ids `0..n`.
            pub fn full(n: usize) -> Self {
                Self((0..n as u32).collect())
            }

            pub fn from_bits(bits: &FixedBitSet) -> Self {
                Self(bits.ones().map(|i| i as u32).collect())
            }

            pub fn to_bits(&self, universe: usize) -> FixedBitSet {
                let mut bits = FixedBitSet::with_capacity(universe);
                for &id in &self.0 {
                    bits.insert(id as usize);
                }
                bits
            }

            pub fn as_slice(&self) -> &[u32] {
                &self.0
            }

            pub fn into_vec(self) -> Vec<u32> {
                self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
                self.0.iter().copied()
            }

            pub fn contains(&self, id: u32) -> bool {
                self.0.binary_search(&id).is_ok()
            }

            pub fn max_id(&self) -> Option<u32> {
                self.0.last().copied()
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                let mut it = other.0.iter();
                self.0.iter().all(|x| it.by_ref().any(|y| y == x))
            }

            /// `self ∪ {id}`.
            pub fn with(&self, id: u32) -> Self {
                match self.0.binary_search(&id) {
                    Ok(_) => self.clone(),
                    Err(pos) => {
                        let mut v = Vec::with_capacity(self.0.len() + 1);
                        v.extend_from_slice(&self.0[..pos]);
                        v.push(id);
                        v.extend_from_slice(&self.0[pos..]);
                        Self(v)
                    }
                }
            }

            /// `self ∖ {id}`.
            pub fn without(&self, id: u32) -> Self {
                Self(self.0.iter().copied().filter(|&x| x != id).collect())
            }

            /// `self ∖ other`.
            pub fn difference(&self, other: &Self) -> Self {
                Self(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
            }

            pub fn union(&self, other: &Self) -> Self {
                Self::from_unsorted(self.0.iter().chain(other.0.iter()).copied())
            }
        }

        impl TryFrom<Vec<u32>> for $name {
            type Error = Error;

            fn try_from(ids: Vec<u32>) -> Result<Self> {
                Self::new(ids)
            }
        }

        impl From<$name> for Vec<u32> {
            fn from(s: $name) -> Vec<u32> {
                s.0
            }
        }

        impl FromIterator<u32> for $name {
            fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
                Self::from_unsorted(iter)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.0.iter()).finish()
            }
        }
    };
}

id_set!(
    /// Strictly ascending attribute ids (an itemset `B ⊆ M`).
    ItemSet,
    "attribute"
);

id_set!(
    /// Strictly ascending object ids (an extent `A ⊆ G`).
    ObjectSet,
    "object"
);

impl ItemSet {
    /// Renders the set with attribute names, e.g. `{b, e, f}`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Named {
            ids: &self.0,
            names,
        }
    }
}

struct Named<'a> {
    ids: &'a [u32],
    names: &'a [String],
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &id) in self.ids.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match self.names.get(id as usize) {
                Some(n) => f.write_str(n)?,
                None => write!(f, "#{id}")?,
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_duplicates() {
        assert!(ItemSet::new(vec![2, 1]).is_err());
        assert!(ItemSet::new(vec![1, 1]).is_err());
        assert!(ItemSet::new(vec![0, 3, 7]).is_ok());
    }

    #[test]
    fn with_keeps_order() {
        let s = ItemSet::new(vec![1, 4]).unwrap();
        assert_eq!(s.with(2).as_slice(), &[1, 2, 4]);
        assert_eq!(s.with(4), s);
        assert_eq!(s.with(9).without(1).as_slice(), &[4, 9]);
    }

    #[test]
    fn subset() {
        let a = ObjectSet::new(vec![1, 3]).unwrap();
        let b = ObjectSet::new(vec![0, 1, 2, 3]).unwrap();
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(ObjectSet::empty().is_subset(&a));
    }

    #[test]
    fn serde_rejects_unsorted() {
        assert!(serde_json::from_str::<ItemSet>("[3,1]").is_err());
        let s: ItemSet = serde_json::from_str("[1,3]").unwrap();
        assert_eq!(s.as_slice(), &[1, 3]);
    }

    #[test]
    fn bits_round_trip() {
        let s = ItemSet::new(vec![0, 5, 9]).unwrap();
        assert_eq!(ItemSet::from_bits(&s.to_bits(12)), s);
    }
}
