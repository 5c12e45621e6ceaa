use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A chemical element supported by the toolkit.
///
/// The set is limited to elements that occur in ligands, protein structures and
/// common ions/cofactors; every variant has an entry in both radius tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    H,
    Li,
    B,
    C,
    N,
    O,
    F,
    Na,
    Mg,
    Al,
    Si,
    P,
    S,
    Cl,
    K,
    Ca,
    Mn,
    Fe,
    Co,
    Ni,
    Cu,
    Zn,
    As,
    Se,
    Br,
    Cd,
    I,
    Pt,
    Hg,
}

use Element::*;

pub const ALL_ELEMENTS: [Element; 29] = [
    H, Li, B, C, N, O, F, Na, Mg, Al, Si, P, S, Cl, K, Ca, Mn, Fe, Co, Ni, Cu, Zn, As, Se, Br, Cd,
    I, Pt, Hg,
];

impl Element {
    pub fn symbol(self) -> &'static str {
        match self {
            H => "H",
            Li => "Li",
            B => "B",
            C => "C",
            N => "N",
            O => "O",
            F => "F",
            Na => "Na",
            Mg => "Mg",
            Al => "Al",
            Si => "Si",
            P => "P",
            S => "S",
            Cl => "Cl",
            K => "K",
            Ca => "Ca",
            Mn => "Mn",
            Fe => "Fe",
            Co => "Co",
            Ni => "Ni",
            Cu => "Cu",
            Zn => "Zn",
            As => "As",
            Se => "Se",
            Br => "Br",
            Cd => "Cd",
            I => "I",
            Pt => "Pt",
            Hg => "Hg",
        }
    }

    pub fn atomic_number(self) -> u8 {
        match self {
            H => 1,
            Li => 3,
            B => 5,
            C => 6,
            N => 7,
            O => 8,
            F => 9,
            Na => 11,
            Mg => 12,
            Al => 13,
            Si => 14,
            P => 15,
            S => 16,
            Cl => 17,
            K => 19,
            Ca => 20,
            Mn => 25,
            Fe => 26,
            Co => 27,
            Ni => 28,
            Cu => 29,
            Zn => 30,
            As => 33,
            Se => 34,
            Br => 35,
            Cd => 48,
            I => 53,
            Pt => 78,
            Hg => 80,
        }
    }

    /// Standard atomic weight in Da.
    pub fn atomic_mass(self) -> f64 {
        match self {
            H => 1.008,
            Li => 6.94,
            B => 10.81,
            C => 12.011,
            N => 14.007,
            O => 15.999,
            F => 18.998,
            Na => 22.990,
            Mg => 24.305,
            Al => 26.982,
            Si => 28.085,
            P => 30.974,
            S => 32.06,
            Cl => 35.45,
            K => 39.098,
            Ca => 40.078,
            Mn => 54.938,
            Fe => 55.845,
            Co => 58.933,
            Ni => 58.693,
            Cu => 63.546,
            Zn => 65.38,
            As => 74.922,
            Se => 78.971,
            Br => 79.904,
            Cd => 112.414,
            I => 126.904,
            Pt => 195.084,
            Hg => 200.592,
        }
    }

    pub fn is_hydrogen(self) -> bool {
        self == H
    }

    /// Metals, used to classify single-atom hetero groups as inorganic.
    pub fn is_metal(self) -> bool {
        matches!(
            self,
            Li | Na | Mg | Al | K | Ca | Mn | Fe | Co | Ni | Cu | Zn | Cd | Pt | Hg
        )
    }

    /// Case-insensitive symbol lookup. Deuterium is read as hydrogen.
    pub fn from_symbol(symbol: &str) -> Option<Element> {
        let s = symbol.trim();
        if s.eq_ignore_ascii_case("D") {
            return Some(H);
        }
        ALL_ELEMENTS
            .iter()
            .copied()
            .find(|e| e.symbol().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown element symbol {0:?}")]
pub struct UnknownElement(pub String);

impl FromStr for Element {
    type Err = UnknownElement;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Element::from_symbol(s).ok_or_else(|| UnknownElement(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_round_trip() {
        for e in ALL_ELEMENTS {
            assert_eq!(Element::from_symbol(e.symbol()), Some(e));
            assert_eq!(e.symbol().to_uppercase().parse::<Element>().unwrap(), e);
        }
    }

    #[test]
    fn unknown_symbols_rejected() {
        assert!(Element::from_symbol("X").is_none());
        assert!(Element::from_symbol("").is_none());
        assert!("Xx".parse::<Element>().is_err());
    }
}
