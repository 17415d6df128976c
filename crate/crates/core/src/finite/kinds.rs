use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvarianceKind {
    Forward1,
    ForwardInf,
    Backward1,
    BackwardInf,
}

impl InvarianceKind {
    pub const ALL: [InvarianceKind; 4] = [
        InvarianceKind::Forward1,
        InvarianceKind::ForwardInf,
        InvarianceKind::Backward1,
        InvarianceKind::BackwardInf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InvarianceKind::Forward1 => "forward-1",
            InvarianceKind::ForwardInf => "forward-inf",
            InvarianceKind::Backward1 => "backward-1",
            InvarianceKind::BackwardInf => "backward-inf",
        }
    }

    pub fn is_backward(self) -> bool {
        matches!(
            self,
            InvarianceKind::Backward1 | InvarianceKind::BackwardInf
        )
    }

    /// The same notion read on the inverse relation.
    pub fn mirrored(self) -> InvarianceKind {
        match self {
            InvarianceKind::Forward1 => InvarianceKind::Backward1,
            InvarianceKind::ForwardInf => InvarianceKind::BackwardInf,
            InvarianceKind::Backward1 => InvarianceKind::Forward1,
            InvarianceKind::BackwardInf => InvarianceKind::ForwardInf,
        }
    }
}

impl fmt::Display for InvarianceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InvarianceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "forward-1" | "1" => Ok(InvarianceKind::Forward1),
            "forward-inf" | "inf" => Ok(InvarianceKind::ForwardInf),
            "backward-1" | "1back" => Ok(InvarianceKind::Backward1),
            "backward-inf" | "infback" => Ok(InvarianceKind::BackwardInf),
            other => Err(Error::InvalidParameter(format!(
                "invariance kind `{other}`"
            ))),
        }
    }
}

impl Serialize for InvarianceKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// The sixteen minimality notions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MinimalityKind {
    One,
    Inf,
    OnePlus,
    TwoPlus,
    ThreePlus,
    OneBack,
    InfBack,
    OneMinus,
    TwoMinus,
    ThreeMinus,
    OneOmega,
    TwoOmega,
    ThreeOmega,
    OneAlpha,
    TwoAlpha,
    ThreeAlpha,
}

use MinimalityKind::*;

impl MinimalityKind {
    pub const ALL: [MinimalityKind; 16] = [
        One, Inf, OnePlus, TwoPlus, ThreePlus, OneBack, InfBack, OneMinus, TwoMinus, ThreeMinus,
        OneOmega, TwoOmega, ThreeOmega, OneAlpha, TwoAlpha, ThreeAlpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            One => "1",
            Inf => "inf",
            OnePlus => "1plus",
            TwoPlus => "2plus",
            ThreePlus => "3plus",
            OneBack => "1back",
            InfBack => "infback",
            OneMinus => "1minus",
            TwoMinus => "2minus",
            ThreeMinus => "3minus",
            OneOmega => "1omega",
            TwoOmega => "2omega",
            ThreeOmega => "3omega",
            OneAlpha => "1alpha",
            TwoAlpha => "2alpha",
            ThreeAlpha => "3alpha",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Kinds whose definition quantifies over invariant subsets rather than orbits.
    pub fn is_subset_kind(self) -> bool {
        matches!(self, One | Inf | OneBack | InfBack)
    }

    pub fn is_backward(self) -> bool {
        matches!(
            self,
            OneBack | InfBack | OneMinus | TwoMinus | ThreeMinus | OneAlpha | TwoAlpha | ThreeAlpha
        )
    }

    /// The forward kind that this kind is on the inverse relation.
    pub fn forward_twin(self) -> MinimalityKind {
        match self {
            OneBack => One,
            InfBack => Inf,
            OneMinus => OnePlus,
            TwoMinus => TwoPlus,
            ThreeMinus => ThreePlus,
            OneAlpha => OneOmega,
            TwoAlpha => TwoOmega,
            ThreeAlpha => ThreeOmega,
            k => k,
        }
    }

    /// The backward kind that this kind becomes on the inverse relation.
    pub fn mirrored(self) -> MinimalityKind {
        match self {
            One => OneBack,
            Inf => InfBack,
            OnePlus => OneMinus,
            TwoPlus => TwoMinus,
            ThreePlus => ThreeMinus,
            OneOmega => OneAlpha,
            TwoOmega => TwoAlpha,
            ThreeOmega => ThreeAlpha,
            k => k.forward_twin(),
        }
    }

    /// The invariance notion tested by a subset kind.
    pub fn invariance(self) -> Option<super::InvarianceKind> {
        use super::InvarianceKind as I;
        match self {
            One => Some(I::Forward1),
            Inf => Some(I::ForwardInf),
            OneBack => Some(I::Backward1),
            InfBack => Some(I::BackwardInf),
            _ => None,
        }
    }
}

impl fmt::Display for MinimalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MinimalityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        MinimalityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("minimality kind `{s}`")))
    }
}

impl Serialize for MinimalityKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for MinimalityKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// One boolean per [`MinimalityKind`], serialized as a map keyed by kind name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Flags(pub [bool; 16]);

impl Flags {
    pub fn from_fn(mut f: impl FnMut(MinimalityKind) -> bool) -> Flags {
        let mut out = Flags::default();
        for k in MinimalityKind::ALL {
            out[k] = f(k);
        }
        out
    }

    pub fn all_equal(&self) -> bool {
        self.0.iter().all(|&b| b == self.0[0])
    }

    pub fn iter(&self) -> impl Iterator<Item = (MinimalityKind, bool)> + '_ {
        MinimalityKind::ALL.into_iter().map(|k| (k, self[k]))
    }

    /// Kinds on which two flag vectors disagree.
    pub fn differences(&self, other: &Flags) -> Vec<MinimalityKind> {
        MinimalityKind::ALL
            .into_iter()
            .filter(|&k| self[k] != other[k])
            .collect()
    }
}

impl Index<MinimalityKind> for Flags {
    type Output = bool;

    fn index(&self, k: MinimalityKind) -> &bool {
        &self.0[k.index()]
    }
}

impl IndexMut<MinimalityKind> for Flags {
    fn index_mut(&mut self, k: MinimalityKind) -> &mut bool {
        &mut self.0[k.index()]
    }
}

impl Serialize for Flags {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(16))?;
        for (k, v) in self.iter() {
            map.serialize_entry(k.name(), &v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Flags {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct FlagsVisitor;

        impl<'de> Visitor<'de> for FlagsVisitor {
            type Value = Flags;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from the sixteen kind names to booleans")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Flags, A::Error> {
                let mut flags = Flags::default();
                let mut seen = 0u32;
                while let Some((k, v)) = map.next_entry::<MinimalityKind, bool>()? {
                    flags[k] = v;
                    seen |= 1 << k.index();
                }
                if seen != 0xffff {
                    return Err(de::Error::custom("missing minimality kinds"));
                }
                Ok(flags)
            }
        }

        d.deserialize_map(FlagsVisitor)
    }
}
