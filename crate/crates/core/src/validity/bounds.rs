//! Tabulated ideal bond lengths and angles standing in for distance-geometry
//! bounds. Bond bounds are ideal ± 0.10 Å, angle bounds ideal ± 10°.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chemio::{BondOrder, Element, SmallMolecule};
use crate::geom::RadiusTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hybridization {
    Sp,
    Sp2,
    Sp3,
}

impl fmt::Display for Hybridization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hybridization::Sp => "sp",
            Hybridization::Sp2 => "sp2",
            Hybridization::Sp3 => "sp3",
        })
    }
}

impl FromStr for Hybridization {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sp" => Ok(Hybridization::Sp),
            "sp2" => Ok(Hybridization::Sp2),
            "sp3" => Ok(Hybridization::Sp3),
            other => Err(format!("unknown hybridization {other:?}")),
        }
    }
}

/// Triple bond → sp; any double or aromatic bond → sp2; otherwise sp3.
pub fn hybridization(mol: &SmallMolecule, atom: usize) -> Hybridization {
    let orders: Vec<BondOrder> = mol
        .bonds()
        .iter()
        .filter(|b| b.a == atom || b.b == atom)
        .map(|b| b.order)
        .collect();
    if orders.contains(&BondOrder::Triple) {
        Hybridization::Sp
    } else if orders
        .iter()
        .any(|o| matches!(o, BondOrder::Double | BondOrder::Aromatic))
    {
        Hybridization::Sp2
    } else {
        Hybridization::Sp3
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

type BondKey = (Element, Element, BondOrder);

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsTable {
    bonds: BTreeMap<BondKey, f64>,
    angles: BTreeMap<Hybridization, f64>,
    pub bond_tolerance: f64,
    pub angle_tolerance: f64,
    radii: RadiusTable,
}

fn bond_key(a: Element, b: Element, order: BondOrder) -> BondKey {
    (a.min(b), a.max(b), order)
}

#[rustfmt::skip]
const IDEAL_BONDS: &[(Element, Element, BondOrder, f64)] = {
    use BondOrder::*;
    use Element::*;
    &[
        (C, C, Single, 1.54), (C, C, Double, 1.34), (C, C, Triple, 1.20), (C, C, Aromatic, 1.39),
        (C, N, Single, 1.47), (C, N, Double, 1.28), (C, N, Triple, 1.16), (C, N, Aromatic, 1.34),
        (C, O, Single, 1.43), (C, O, Double, 1.23), (C, O, Aromatic, 1.36),
        (C, S, Single, 1.82), (C, S, Double, 1.67), (C, S, Aromatic, 1.72),
        (C, P, Single, 1.84), (C, P, Double, 1.66),
        (C, F, Single, 1.35), (C, Cl, Single, 1.77), (C, Br, Single, 1.94), (C, I, Single, 2.14),
        (C, Se, Single, 1.95), (B, C, Single, 1.56), (B, O, Single, 1.37),
        (N, N, Single, 1.45), (N, N, Double, 1.25), (N, N, Triple, 1.10), (N, N, Aromatic, 1.35),
        (N, O, Single, 1.40), (N, O, Double, 1.21), (N, O, Aromatic, 1.38),
        (N, S, Single, 1.65), (N, S, Double, 1.55), (N, S, Aromatic, 1.63),
        (N, P, Single, 1.70),
        (O, O, Single, 1.48), (O, S, Single, 1.58), (O, S, Double, 1.43),
        (O, P, Single, 1.61), (O, P, Double, 1.48), (S, S, Single, 2.05),
        (H, C, Single, 1.09), (H, N, Single, 1.01), (H, O, Single, 0.96), (H, S, Single, 1.34),
    ]
};

impl Default for BoundsTable {
    fn default() -> Self {
        BoundsTable {
            bonds: IDEAL_BONDS
                .iter()
                .map(|&(a, b, o, v)| (bond_key(a, b, o), v))
                .collect(),
            angles: [
                (Hybridization::Sp, 180.0),
                (Hybridization::Sp2, 120.0),
                (Hybridization::Sp3, 109.47),
            ]
            .into_iter()
            .collect(),
            bond_tolerance: 0.10,
            angle_tolerance: 10.0,
            radii: RadiusTable::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BoundsTableError {
    #[error("bounds CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("bounds CSV row {row}: {message}")]
    Row { row: usize, message: String },
}

#[derive(Serialize, Deserialize)]
struct BoundsRow {
    kind: String,
    a: String,
    b: String,
    order: String,
    ideal: f64,
}

impl BoundsTable {
    pub fn with_radii(mut self, radii: RadiusTable) -> Self {
        self.radii = radii;
        self
    }

    /// Ideal length for a bond; covalent-radius sum when not tabulated.
    pub fn ideal_bond(&self, a: Element, b: Element, order: BondOrder) -> f64 {
        self.bonds
            .get(&bond_key(a, b, order))
            .copied()
            .unwrap_or_else(|| self.radii.covalent(a) + self.radii.covalent(b))
    }

    pub fn is_tabulated(&self, a: Element, b: Element, order: BondOrder) -> bool {
        self.bonds.contains_key(&bond_key(a, b, order))
    }

    pub fn bond_bounds(&self, a: Element, b: Element, order: BondOrder) -> Bounds {
        let ideal = self.ideal_bond(a, b, order);
        Bounds {
            lower: ideal - self.bond_tolerance,
            upper: ideal + self.bond_tolerance,
        }
    }

    pub fn ideal_angle(&self, h: Hybridization) -> f64 {
        self.angles[&h]
    }

    pub fn angle_bounds(&self, h: Hybridization) -> Bounds {
        let ideal = self.ideal_angle(h);
        Bounds {
            lower: ideal - self.angle_tolerance,
            upper: ideal + self.angle_tolerance,
        }
    }

    /// Rows `kind,a,b,order,ideal`; `kind` is `bond` or `angle` (angle rows put
    /// the hybridization in `a` and leave `b`/`order` empty).
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (&(a, b, o), &v) in &self.bonds {
            w.serialize(BoundsRow {
                kind: "bond".into(),
                a: a.symbol().into(),
                b: b.symbol().into(),
                order: o.to_string(),
                ideal: v,
            })
            .expect("in-memory CSV");
        }
        for (&h, &v) in &self.angles {
            w.serialize(BoundsRow {
                kind: "angle".into(),
                a: h.to_string(),
                b: String::new(),
                order: String::new(),
                ideal: v,
            })
            .expect("in-memory CSV");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    /// Default table with rows from `text` overriding or extending it.
    pub fn from_csv(text: &str) -> Result<Self, BoundsTableError> {
        let mut table = BoundsTable::default();
        let mut r = csv::Reader::from_reader(text.as_bytes());
        for (i, row) in r.deserialize::<BoundsRow>().enumerate() {
            let row = row?;
            let bad = |message: String| BoundsTableError::Row { row: i + 1, message };
            if !(row.ideal > 0.0 && row.ideal.is_finite()) {
                return Err(bad(format!("ideal value {} must be positive", row.ideal)));
            }
            match row.kind.as_str() {
                "bond" => {
                    let a = Element::from_symbol(&row.a).ok_or_else(|| bad(format!("element {:?}", row.a)))?;
                    let b = Element::from_symbol(&row.b).ok_or_else(|| bad(format!("element {:?}", row.b)))?;
                    let o = match row.order.to_ascii_lowercase().as_str() {
                        "single" | "1" => BondOrder::Single,
                        "double" | "2" => BondOrder::Double,
                        "triple" | "3" => BondOrder::Triple,
                        "aromatic" | "4" => BondOrder::Aromatic,
                        other => return Err(bad(format!("bond order {other:?}"))),
                    };
                    table.bonds.insert(bond_key(a, b, o), row.ideal);
                }
                "angle" => {
                    let h: Hybridization = row.a.parse().map_err(bad)?;
                    table.angles.insert(h, row.ideal);
                }
                other => return Err(bad(format!("kind {other:?} (expected bond or angle)"))),
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_is_symmetric_with_fallback() {
        let t = BoundsTable::default();
        assert_eq!(t.ideal_bond(Element::N, Element::C, BondOrder::Single), 1.47);
        assert_eq!(t.ideal_bond(Element::C, Element::N, BondOrder::Single), 1.47);
        // Si–O not tabulated: 1.11 + 0.66
        assert!(!t.is_tabulated(Element::Si, Element::O, BondOrder::Single));
        assert!((t.ideal_bond(Element::Si, Element::O, BondOrder::Single) - 1.77).abs() < 1e-12);
        let b = t.bond_bounds(Element::C, Element::C, BondOrder::Single);
        assert!((b.lower - 1.44).abs() < 1e-12 && (b.upper - 1.64).abs() < 1e-12);
        let a = t.angle_bounds(Hybridization::Sp3);
        assert!((a.lower - 99.47).abs() < 1e-9);
    }

    #[test]
    fn csv_round_trip_and_override() {
        let t = BoundsTable::default();
        assert_eq!(BoundsTable::from_csv(&t.to_csv()).unwrap(), t);
        let o = BoundsTable::from_csv("kind,a,b,order,ideal\nbond,Si,O,single,1.63\nangle,sp2,,,118\n").unwrap();
        assert_eq!(o.ideal_bond(Element::O, Element::Si, BondOrder::Single), 1.63);
        assert_eq!(o.ideal_angle(Hybridization::Sp2), 118.0);
        assert!(BoundsTable::from_csv("kind,a,b,order,ideal\nbond,C,C,quadruple,1.0\n").is_err());
    }
}
