//! MDL SDF (V2000) reading and writing.

use std::fmt::Write as _;

use super::element::Element;
use super::molecule::{Atom, Bond, BondOrder, SmallMolecule};
use super::{col, ChemIoError};
use crate::geom::Vec3;

const V2000_MAX_ATOMS: usize = 999;

/// Parse every record of a V2000 SDF file.
pub fn parse_sdf(bytes: &[u8]) -> Result<Vec<SmallMolecule>, ChemIoError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ChemIoError::Encoding(e.valid_up_to()))?;
    let lines: Vec<&str> = text.lines().collect();
    let mut records = Vec::new();
    let mut i = 0;
    loop {
        while i < lines.len() && lines[i].trim().is_empty() && !starts_record(&lines, i) {
            i += 1;
        }
        if i >= lines.len() {
            break;
        }
        let (mol, next) = parse_record(&lines, i)?;
        records.push(mol);
        i = next;
    }
    if records.is_empty() {
        return Err(ChemIoError::Empty);
    }
    Ok(records)
}

/// Parse a file expected to hold exactly one molecule (extra records are ignored
/// with a warning).
pub fn parse_sdf_single(bytes: &[u8]) -> Result<SmallMolecule, ChemIoError> {
    let mut mols = parse_sdf(bytes)?;
    if mols.len() > 1 {
        log::warn!("SDF holds {} records; using the first", mols.len());
    }
    Ok(mols.swap_remove(0))
}

// A record may legitimately begin with a blank title line; look ahead to the
// counts line to tell it apart from blank padding.
fn starts_record(lines: &[&str], i: usize) -> bool {
    lines
        .get(i + 3)
        .map(|l| l.contains("V2000") || l.contains("V3000"))
        .unwrap_or(false)
}

fn parse_record(lines: &[&str], start: usize) -> Result<(SmallMolecule, usize), ChemIoError> {
    let err = |line: usize, message: String| ChemIoError::Parse {
        line: line + 1,
        message,
    };
    if start + 3 >= lines.len() {
        return Err(err(
            lines.len().saturating_sub(1),
            "truncated header: expected three header lines and a counts line".into(),
        ));
    }
    let name = lines[start].trim().to_string();
    let counts_idx = start + 3;
    let counts = lines[counts_idx];
    if counts.contains("V3000") {
        return Err(err(counts_idx, "V3000 records are not supported".into()));
    }
    let (n_atoms, n_bonds) =
        parse_counts(counts).ok_or_else(|| err(counts_idx, format!("malformed counts line {counts:?}")))?;

    let mut atoms = Vec::with_capacity(n_atoms);
    let mut idx = counts_idx + 1;
    for k in 0..n_atoms {
        let line = lines.get(idx).ok_or_else(|| {
            err(
                idx,
                format!("atom block ended after {k} of {n_atoms} declared atoms"),
            )
        })?;
        let atom = parse_atom_line(line, k + 1).map_err(|m| {
            err(
                idx,
                format!("atom block: record {} of {n_atoms}: {m}", k + 1),
            )
        })?;
        atoms.push(atom);
        idx += 1;
    }

    let mut bonds = Vec::with_capacity(n_bonds);
    for k in 0..n_bonds {
        let line = lines.get(idx).ok_or_else(|| {
            err(
                idx,
                format!("bond block ended after {k} of {n_bonds} declared bonds"),
            )
        })?;
        let (a, b, order) =
            parse_bond_line(line).map_err(|m| err(idx, format!("bond block: {m}")))?;
        if a == 0 || b == 0 || a > n_atoms || b > n_atoms {
            return Err(err(
                idx,
                format!("bond references atom {a}-{b} outside 1..={n_atoms}"),
            ));
        }
        bonds.push(Bond::new(a - 1, b - 1, order));
        idx += 1;
    }

    // Properties block: only charges matter here. M  CHG resets atom-block charges.
    let mut chg_seen = false;
    while idx < lines.len() {
        let line = lines[idx];
        if line.starts_with("M  END") {
            idx += 1;
            break;
        }
        if line.starts_with("$$$$") {
            break;
        }
        if line.starts_with("M  CHG") {
            if !chg_seen {
                for a in &mut atoms {
                    a.formal_charge = 0;
                }
                chg_seen = true;
            }
            let tokens: Vec<&str> = line[6..].split_whitespace().collect();
            let count: usize = tokens
                .first()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err(idx, "malformed M  CHG line".into()))?;
            if tokens.len() < 1 + 2 * count {
                return Err(err(idx, "M  CHG line shorter than its entry count".into()));
            }
            for pair in tokens[1..1 + 2 * count].chunks(2) {
                let atom: usize = pair[0]
                    .parse()
                    .map_err(|_| err(idx, format!("bad atom index {:?} in M  CHG", pair[0])))?;
                let charge: i8 = pair[1]
                    .parse()
                    .map_err(|_| err(idx, format!("bad charge {:?} in M  CHG", pair[1])))?;
                if atom == 0 || atom > atoms.len() {
                    return Err(err(idx, format!("M  CHG references atom {atom}")));
                }
                atoms[atom - 1].formal_charge = charge;
            }
        }
        idx += 1;
    }
    // Data items up to the record terminator.
    while idx < lines.len() {
        let done = lines[idx].starts_with("$$$$");
        idx += 1;
        if done {
            break;
        }
    }

    let mol = SmallMolecule::new(name, atoms, bonds).map_err(|source| ChemIoError::Molecule {
        line: start + 1,
        source,
    })?;
    Ok((mol, idx))
}

fn parse_counts(line: &str) -> Option<(usize, usize)> {
    let fixed = col(line, 0, 3)
        .and_then(|a| a.trim().parse().ok())
        .zip(col(line, 3, 6).and_then(|b| b.trim().parse().ok()));
    fixed.or_else(|| {
        let mut it = line.split_whitespace();
        Some((it.next()?.parse().ok()?, it.next()?.parse().ok()?))
    })
}

fn parse_atom_line(line: &str, serial: usize) -> Result<Atom, String> {
    let fixed = (|| {
        let x: f64 = col(line, 0, 10)?.trim().parse().ok()?;
        let y: f64 = col(line, 10, 20)?.trim().parse().ok()?;
        let z: f64 = col(line, 20, 30)?.trim().parse().ok()?;
        let sym = col(line, 31, 34)?.trim().to_string();
        let chg = col(line, 36, 39)
            .and_then(|s| s.trim().parse::<u8>().ok())
            .unwrap_or(0);
        Some((x, y, z, sym, chg))
    })();
    let (x, y, z, sym, chg) = match fixed {
        Some(v) if !v.3.is_empty() => v,
        _ => {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() < 4 {
                return Err(format!("expected x y z symbol, got {line:?}"));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|_| format!("bad coordinate {s:?}"));
            let chg = t.get(5).and_then(|s| s.parse::<u8>().ok()).unwrap_or(0);
            (parse(t[0])?, parse(t[1])?, parse(t[2])?, t[3].to_string(), chg)
        }
    };
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err("non-finite coordinate".into());
    }
    let element = Element::from_symbol(&sym).ok_or_else(|| format!("unknown element {sym:?}"))?;
    let formal_charge = match chg {
        1 => 3,
        2 => 2,
        3 => 1,
        5 => -1,
        6 => -2,
        7 => -3,
        _ => 0,
    };
    Ok(Atom {
        element,
        position: Vec3::new(x, y, z),
        formal_charge,
        serial,
        name: String::new(),
    })
}

fn parse_bond_line(line: &str) -> Result<(usize, usize, BondOrder), String> {
    let fixed = (|| {
        let a: usize = col(line, 0, 3)?.trim().parse().ok()?;
        let b: usize = col(line, 3, 6)?.trim().parse().ok()?;
        let t: u8 = col(line, 6, 9)?.trim().parse().ok()?;
        Some((a, b, t))
    })();
    let (a, b, t) = match fixed {
        Some(v) => v,
        None => {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() < 3 {
                return Err(format!("expected atom atom type, got {line:?}"));
            }
            let p = |s: &str| s.parse::<usize>().map_err(|_| format!("bad integer {s:?}"));
            (p(t[0])?, p(t[1])?, p(t[2])? as u8)
        }
    };
    let order = BondOrder::from_mdl_code(t).ok_or_else(|| format!("unsupported bond type {t}"))?;
    Ok((a, b, order))
}

/// Serialize one molecule as a V2000 record (terminated by `$$$$`).
pub fn write_sdf(mol: &SmallMolecule) -> Result<String, ChemIoError> {
    let n = mol.atoms().len();
    if n > V2000_MAX_ATOMS || mol.bonds().len() > V2000_MAX_ATOMS {
        return Err(ChemIoError::Capacity { atoms: n });
    }
    let mut out = String::new();
    let _ = writeln!(out, "{}", mol.name.lines().next().unwrap_or(""));
    let _ = writeln!(out, "  dockeval          3D");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>3}{:>3}  0  0  0  0  0  0  0  0999 V2000",
        n,
        mol.bonds().len()
    );
    for atom in mol.atoms() {
        let p = atom.position;
        let _ = writeln!(
            out,
            "{:>10.4}{:>10.4}{:>10.4} {:<3} 0  0  0  0  0  0  0  0  0  0  0  0",
            clean_zero(p.x),
            clean_zero(p.y),
            clean_zero(p.z),
            atom.element.symbol()
        );
    }
    for bond in mol.bonds() {
        let _ = writeln!(
            out,
            "{:>3}{:>3}{:>3}  0",
            bond.a + 1,
            bond.b + 1,
            bond.order.mdl_code()
        );
    }
    let charged: Vec<(usize, i8)> = mol
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.formal_charge != 0)
        .map(|(i, a)| (i + 1, a.formal_charge))
        .collect();
    for chunk in charged.chunks(8) {
        let _ = write!(out, "M  CHG{:>3}", chunk.len());
        for (i, c) in chunk {
            let _ = write!(out, " {:>3} {:>3}", i, c);
        }
        let _ = writeln!(out);
    }
    out.push_str("M  END\n$$$$\n");
    Ok(out)
}

pub fn write_sdf_many<'a>(
    mols: impl IntoIterator<Item = &'a SmallMolecule>,
) -> Result<String, ChemIoError> {
    let mut out = String::new();
    for m in mols {
        out.push_str(&write_sdf(m)?);
    }
    Ok(out)
}

// Avoid "-0.0000" so identical geometry always serializes identically.
fn clean_zero(v: f64) -> f64 {
    if v.abs() < 5e-5 {
        0.0
    } else {
        v
    }
}
