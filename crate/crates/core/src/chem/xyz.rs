//! XYZ text format: line 1 atom count, line 2 free-form comment, then one
//! `Symbol x y z` line per atom. Coordinates are written with 6 decimals.

use super::{Atom, AtomCloud, ChemError, Element};
use crate::geometry::Vec3;

pub fn parse_xyz(text: &str) -> Result<AtomCloud, ChemError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(ChemError::MissingHeader)?.trim();
    if header.is_empty() {
        return Err(ChemError::MissingHeader);
    }
    let expected: usize = header
        .parse()
        .map_err(|_| ChemError::BadCount { token: header.to_string() })?;
    let _comment = lines.next(); // may legitimately be absent when expected == 0

    let mut atoms = Vec::with_capacity(expected);
    for (offset, raw) in lines.enumerate() {
        let line_no = offset + 3;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let sym = fields.next().ok_or(ChemError::MalformedAtomLine { line: line_no })?;
        let element = Element::from_symbol(sym).ok_or_else(|| ChemError::UnknownElement {
            line: line_no,
            symbol: sym.to_string(),
        })?;
        let mut coord = |_axis: usize| -> Result<f64, ChemError> {
            let tok = fields.next().ok_or(ChemError::MalformedAtomLine { line: line_no })?;
            tok.parse().map_err(|_| ChemError::BadCoordinate { line: line_no, token: tok.to_string() })
        };
        let pos = Vec3::new(coord(0)?, coord(1)?, coord(2)?);
        atoms.push(Atom::new(element, pos));
    }
    if atoms.len() != expected {
        return Err(ChemError::CountMismatch { expected, found: atoms.len() });
    }
    let cloud = AtomCloud::new(atoms);
    cloud.validate()?;
    Ok(cloud)
}

pub fn write_xyz(cloud: &AtomCloud, comment: &str) -> Result<String, ChemError> {
    if cloud.is_empty() {
        return Err(ChemError::EmptyCloud);
    }
    cloud.validate()?;
    let mut out = String::new();
    out.push_str(&cloud.len().to_string());
    out.push('\n');
    out.push_str(comment.lines().next().unwrap_or(""));
    out.push('\n');
    for atom in &cloud.atoms {
        let p = atom.position;
        out.push_str(&format!("{} {:.6} {:.6} {:.6}\n", atom.element.symbol(), p.x, p.y, p.z));
    }
    Ok(out)
}
