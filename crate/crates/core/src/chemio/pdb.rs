//! Fixed-column PDB reading and writing.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::element::Element;
use super::molecule::{Atom, SmallMolecule};
use super::protein::{
    classify_hetero, is_modified_residue, Chain, HeteroGroup, ProteinStructure, Residue,
};
use super::{col, ChemIoError};
use crate::geom::Vec3;

type ResidueKey = (String, i32, Option<char>);
type HeteroKey = (String, String, i32, Option<char>);

pub fn parse_pdb(bytes: &[u8]) -> Result<ProteinStructure, ChemIoError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ChemIoError::Encoding(e.valid_up_to()))?;

    let mut chains: Vec<Chain> = Vec::new();
    let mut residue_index: HashMap<ResidueKey, (usize, usize)> = HashMap::new();
    let mut hetero: Vec<(HeteroKey, Vec<Atom>)> = Vec::new();
    let mut hetero_index: HashMap<HeteroKey, usize> = HashMap::new();
    let mut structure = ProteinStructure::default();
    let mut seen_atoms = false;
    let mut first_model_done = false;

    for (lineno, line) in text.lines().enumerate() {
        let record = col(line, 0, 6).unwrap_or(line).trim_end();
        match record {
            "MODEL" => {
                if seen_atoms {
                    first_model_done = true;
                }
                continue;
            }
            "ENDMDL" => {
                first_model_done = true;
                continue;
            }
            "ATOM" | "HETATM" => {}
            _ => continue,
        }
        if first_model_done {
            structure.multi_model = true;
            continue;
        }
        seen_atoms = true;
        let rec = parse_atom_record(line).map_err(|message| ChemIoError::Parse {
            line: lineno + 1,
            message,
        })?;
        let polymer = record == "ATOM" || is_modified_residue(&rec.res_name);
        if polymer {
            let key = (rec.chain.clone(), rec.seq, rec.icode);
            let (ci, ri) = match residue_index.get(&key) {
                Some(&pos) => pos,
                None => {
                    let ci = match chains.iter().position(|c| c.id == rec.chain) {
                        Some(ci) => ci,
                        None => {
                            chains.push(Chain {
                                id: rec.chain.clone(),
                                residues: Vec::new(),
                            });
                            chains.len() - 1
                        }
                    };
                    chains[ci].residues.push(Residue {
                        chain_id: rec.chain.clone(),
                        name: rec.res_name.clone(),
                        seq_number: rec.seq,
                        insertion_code: rec.icode,
                        atoms: Vec::new(),
                    });
                    let pos = (ci, chains[ci].residues.len() - 1);
                    residue_index.insert(key, pos);
                    pos
                }
            };
            let residue = &mut chains[ci].residues[ri];
            if residue.name != rec.res_name || residue.atom(&rec.atom.name).is_some() {
                // Alternate location (or microheterogeneity): keep the first seen.
                structure.skipped_altloc_atoms += 1;
                continue;
            }
            residue.atoms.push(rec.atom);
        } else {
            let key = (rec.chain.clone(), rec.res_name.clone(), rec.seq, rec.icode);
            let gi = *hetero_index.entry(key.clone()).or_insert_with(|| {
                hetero.push((key, Vec::new()));
                hetero.len() - 1
            });
            let atoms = &mut hetero[gi].1;
            if atoms.iter().any(|a| a.name == rec.atom.name) {
                structure.skipped_altloc_atoms += 1;
                continue;
            }
            atoms.push(rec.atom);
        }
    }

    if !seen_atoms {
        return Err(ChemIoError::Empty);
    }
    for chain in &mut chains {
        chain.residues.sort_by_key(|r| r.sort_key());
    }
    structure.chains = chains;
    for ((chain_id, res_name, seq_number, insertion_code), atoms) in hetero {
        let class = classify_hetero(&res_name, &atoms);
        let name = format!("{res_name}_{chain_id}{seq_number}");
        match SmallMolecule::new(name, atoms, Vec::new()) {
            Ok(molecule) => structure.hetero_groups.push(HeteroGroup {
                chain_id,
                res_name,
                seq_number,
                insertion_code,
                class,
                molecule,
            }),
            Err(e) => log::warn!("dropping hetero group {res_name} {chain_id}{seq_number}: {e}"),
        }
    }
    Ok(structure)
}

struct AtomRecord {
    atom: Atom,
    res_name: String,
    chain: String,
    seq: i32,
    icode: Option<char>,
}

fn parse_atom_record(line: &str) -> Result<AtomRecord, String> {
    if line.len() < 54 {
        return Err(format!(
            "coordinate record too short ({} columns, need 54)",
            line.len()
        ));
    }
    let field = |a: usize, b: usize, what: &str| {
        col(line, a, b).ok_or_else(|| format!("{what} columns {}-{} unreadable", a + 1, b))
    };
    let serial = field(6, 11, "serial")?.trim().parse::<usize>().unwrap_or(0);
    let raw_name = field(12, 16, "atom name")?;
    let name = raw_name.trim().to_string();
    let res_name = field(17, 20, "residue name")?.trim().to_string();
    let chain = field(21, 22, "chain")?.trim().to_string();
    let seq_text = field(22, 26, "residue number")?.trim();
    let seq: i32 = seq_text
        .parse()
        .map_err(|_| format!("non-numeric residue number {seq_text:?}"))?;
    let icode = field(26, 27, "insertion code")?.chars().next().filter(|c| *c != ' ');
    let mut xyz = [0.0f64; 3];
    for (k, v) in xyz.iter_mut().enumerate() {
        let (a, b) = (30 + 8 * k, 38 + 8 * k);
        let t = field(a, b, "coordinate")?.trim();
        *v = t
            .parse()
            .map_err(|_| format!("non-numeric coordinate {t:?} in columns {}-{}", a + 1, b))?;
        if !v.is_finite() {
            return Err(format!("non-finite coordinate in columns {}-{}", a + 1, b));
        }
    }
    let element_col = col(line, 76, 78).map(str::trim).unwrap_or("");
    let element = if element_col.is_empty() {
        infer_element(raw_name)
    } else {
        Element::from_symbol(element_col)
    }
    .ok_or_else(|| {
        format!(
            "unknown element (element field {:?}, atom name {:?})",
            element_col, name
        )
    })?;
    let formal_charge = col(line, 78, 80)
        .map(str::trim)
        .and_then(parse_charge)
        .unwrap_or(0);
    Ok(AtomRecord {
        atom: Atom {
            element,
            position: Vec3::new(xyz[0], xyz[1], xyz[2]),
            formal_charge,
            serial,
            name,
        },
        res_name,
        chain,
        seq,
        icode,
    })
}

fn infer_element(raw_name: &str) -> Option<Element> {
    let letters: String = raw_name
        .chars()
        .skip_while(|c| c.is_ascii_digit() || *c == ' ')
        .take_while(|c| c.is_ascii_alphabetic())
        .collect();
    if !raw_name.starts_with(' ') && letters.len() >= 2 {
        if let Some(e) = Element::from_symbol(&letters[..2]) {
            return Some(e);
        }
    }
    letters.get(..1).and_then(Element::from_symbol)
}

fn parse_charge(s: &str) -> Option<i8> {
    if s.len() != 2 {
        return None;
    }
    let (digit, sign) = s.split_at(1);
    let v: i8 = digit.parse().ok()?;
    match sign {
        "+" => Some(v),
        "-" => Some(-v),
        _ => None,
    }
}

fn atom_name_field(atom: &Atom) -> String {
    if atom.name.len() < 4 && atom.element.symbol().len() == 1 {
        format!(" {:<3}", atom.name)
    } else {
        format!("{:<4}", atom.name)
    }
}

#[allow(clippy::too_many_arguments)]
fn write_atom_line(
    out: &mut String,
    record: &str,
    serial: usize,
    atom: &Atom,
    res_name: &str,
    chain: &str,
    seq: i32,
    icode: Option<char>,
) {
    let charge = match atom.formal_charge {
        0 => "  ".to_string(),
        c if c > 0 => format!("{}+", c),
        c => format!("{}-", -c),
    };
    let _ = writeln!(
        out,
        "{:<6}{:>5} {}{}{:>3} {}{:>4}{}   {:>8.3}{:>8.3}{:>8.3}{:>6.2}{:>6.2}          {:>2}{}",
        record,
        serial % 100_000,
        atom_name_field(atom),
        ' ',
        res_name,
        chain.chars().next().unwrap_or(' '),
        seq,
        icode.unwrap_or(' '),
        atom.position.x,
        atom.position.y,
        atom.position.z,
        1.0,
        0.0,
        atom.element.symbol().to_ascii_uppercase(),
        charge
    );
}

/// Serialize polymer chains (with TER records) followed by hetero groups.
pub fn write_pdb(protein: &ProteinStructure) -> String {
    let mut out = String::new();
    let mut serial = 1;
    for chain in &protein.chains {
        let mut last: Option<&Residue> = None;
        for residue in &chain.residues {
            let record = if is_modified_residue(&residue.name) {
                "HETATM"
            } else {
                "ATOM"
            };
            for atom in &residue.atoms {
                write_atom_line(
                    &mut out,
                    record,
                    serial,
                    atom,
                    &residue.name,
                    &chain.id,
                    residue.seq_number,
                    residue.insertion_code,
                );
                serial += 1;
            }
            last = Some(residue);
        }
        if let Some(r) = last {
            let _ = writeln!(
                out,
                "TER   {:>5}      {:>3} {}{:>4}{}",
                serial % 100_000,
                r.name,
                chain.id.chars().next().unwrap_or(' '),
                r.seq_number,
                r.insertion_code.unwrap_or(' ')
            );
            serial += 1;
        }
    }
    for group in &protein.hetero_groups {
        for atom in group.molecule.atoms() {
            write_atom_line(
                &mut out,
                "HETATM",
                serial,
                atom,
                &group.res_name,
                &group.chain_id,
                group.seq_number,
                group.insertion_code,
            );
            serial += 1;
        }
    }
    out.push_str("END\n");
    out
}
