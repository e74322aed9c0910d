//! File formats.
//!
//! * Group table: JSON object `{"order", "labels", "table"}` with 0-based indices.
//! * Complex matrix: JSON array of rows of `[re, im]` pairs, or CSV with
//!   `re+imi` cells.
//! * Character table: `{"classes": {"sizes", "representatives"}, "rows"}`,
//!   rows in the matrix format, classes named by representative label.
//! * Idempotent set: `{"labels", "idempotents": [{"rank", "coeffs"}]}`.
//! * Diagonalizer: `{"block_sizes", "unitary", "matrix"}`.
//! * Coefficient vector: JSON array of `[re, im]` pairs.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blockdiag::{Diagonalizer, Provenance};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, FiniteGroup};
use crate::idempotents::{CharacterTable, IdempotentSet, IDEMPOTENT_TOL};
use crate::linalg::CMatrix;
use crate::ring::GroupRingElement;

pub type Pair = [f64; 2];

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn unpair(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupTableFile {
    pub order: usize,
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl From<&FiniteGroup> for GroupTableFile {
    fn from(g: &FiniteGroup) -> Self {
        Self {
            order: g.order(),
            labels: g.labels().to_vec(),
            table: g.table_rows(),
        }
    }
}

pub fn parse_group_table(text: &str) -> Result<FiniteGroup> {
    let file: GroupTableFile = serde_json::from_str(text)?;
    if file.table.len() != file.order {
        return Err(Error::Structure(format!(
            "order {} but the table has {} rows",
            file.order,
            file.table.len()
        )));
    }
    FiniteGroup::from_table(file.labels, file.table)
}

pub fn read_group_table(path: &Path) -> Result<FiniteGroup> {
    parse_group_table(&read_text(path)?)
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<Pair>> {
    m.row_iter().map(|row| row.iter().map(|&z| pair(z)).collect()).collect()
}

pub fn matrix_from_pairs(rows: &[Vec<Pair>]) -> Result<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |i, j| unpair(&rows[i][j])))
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(&matrix_to_pairs(m)).expect("finite matrix serializes")
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix> {
    let rows: Vec<Vec<Pair>> = serde_json::from_str(text)?;
    matrix_from_pairs(&rows)
}

/// `re+imi` with shortest round-trip decimals.
pub fn format_csv_cell(z: Complex64) -> String {
    let im = if z.im.is_sign_negative() {
        format!("-{}", -z.im)
    } else {
        format!("+{}", z.im)
    };
    format!("{}{}i", z.re, im)
}

/// Parses `re+imi`, `re-imi`, a bare real, or a bare imaginary `imi`.
pub fn parse_csv_cell(cell: &str) -> Result<Complex64> {
    let s = cell.trim();
    let bad = || Error::Format(format!("cannot read complex cell {cell:?}"));
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not leading and not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            let im_text = &body[k..];
            let im = match im_text {
                "+" => 1.0,
                "-" => -1.0,
                t => t.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                t => t.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(Complex64::new(0.0, im))
        }
    }
}

pub fn matrix_to_csv(m: &CMatrix) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|&z| format_csv_cell(z)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_from_csv(text: &str) -> Result<CMatrix> {
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(parse_csv_cell).collect())
        .collect::<Result<_>>()?;
    let pairs: Vec<Vec<Pair>> = rows
        .iter()
        .map(|r| r.iter().map(|&z| pair(z)).collect())
        .collect();
    matrix_from_pairs(&pairs)
}

/// Reads a matrix file, choosing CSV or JSON by extension (JSON otherwise).
/// A diagonalizer document is accepted too; its `matrix` field is used.
pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return matrix_from_csv(&text);
    }
    match serde_json::from_str::<DiagonalizerFile>(&text) {
        Ok(doc) => matrix_from_pairs(&doc.matrix),
        Err(_) => matrix_from_json(&text),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassesField {
    pub sizes: Vec<usize>,
    pub representatives: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterTableFile {
    pub classes: ClassesField,
    pub rows: Vec<Vec<Pair>>,
}

impl CharacterTableFile {
    pub fn from_table(table: &CharacterTable, group: &FiniteGroup) -> Self {
        Self {
            classes: ClassesField {
                sizes: table.class_sizes(),
                representatives: table
                    .representatives()
                    .iter()
                    .map(|&g| group.label(g).to_string())
                    .collect(),
            },
            rows: matrix_to_pairs(table.values()),
        }
    }
}

/// Builds a character table for `group` from the file document, reordering
/// columns to the group's class order.
pub fn parse_character_table(text: &str, group: &FiniteGroup) -> Result<CharacterTable> {
    let file: CharacterTableFile = serde_json::from_str(text)?;
    let classes = conjugacy_classes(group);
    let r = classes.len();
    let values = matrix_from_pairs(&file.rows)?;
    if file.classes.representatives.len() != r
        || file.classes.sizes.len() != r
        || values.shape() != (r, r)
    {
        return Err(Error::dimension(
            format!("{r} classes"),
            format!("{} classes", file.classes.representatives.len()),
        ));
    }
    // column in file -> class index in the group
    let mut target = vec![usize::MAX; r];
    for (col, label) in file.classes.representatives.iter().enumerate() {
        let g = group
            .find_element(label)
            .ok_or_else(|| Error::Format(format!("unknown class representative {label:?}")))?;
        let class = classes.class_of(g);
        if classes.size(class) != file.classes.sizes[col] {
            return Err(Error::Format(format!(
                "class of {label} has size {}, file says {}",
                classes.size(class),
                file.classes.sizes[col]
            )));
        }
        if target.contains(&class) {
            return Err(Error::Format(format!("class of {label} listed twice")));
        }
        target[col] = class;
    }
    let mut reordered = CMatrix::zeros(r, r);
    for col in 0..r {
        reordered.set_column(target[col], &values.column(col));
    }
    CharacterTable::new(group.order(), classes, reordered)
}

pub fn read_character_table(path: &Path, group: &FiniteGroup) -> Result<CharacterTable> {
    parse_character_table(&read_text(path)?, group)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdempotentEntry {
    pub rank: usize,
    pub coeffs: Vec<Pair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdempotentSetFile {
    pub labels: Vec<String>,
    pub idempotents: Vec<IdempotentEntry>,
}

impl From<&IdempotentSet> for IdempotentSetFile {
    fn from(set: &IdempotentSet) -> Self {
        Self {
            labels: set.group().labels().to_vec(),
            idempotents: set
                .elements()
                .iter()
                .zip(set.ranks())
                .map(|(e, &rank)| IdempotentEntry {
                    rank,
                    coeffs: e.coeffs().iter().map(|&z| pair(z)).collect(),
                })
                .collect(),
        }
    }
}

/// Raw elements of an idempotent file, unverified.
pub fn idempotent_elements(file: &IdempotentSetFile, group: &Arc<FiniteGroup>) -> Result<Vec<GroupRingElement>> {
    file.idempotents
        .iter()
        .map(|e| GroupRingElement::new(group.clone(), e.coeffs.iter().map(unpair).collect()))
        .collect()
}

/// Reads and certifies an idempotent set; stated ranks must match the traces.
pub fn parse_idempotent_set(text: &str, group: &Arc<FiniteGroup>) -> Result<IdempotentSet> {
    let file: IdempotentSetFile = serde_json::from_str(text)?;
    let set = IdempotentSet::new(idempotent_elements(&file, group)?, IDEMPOTENT_TOL)?;
    let stated: Vec<usize> = file.idempotents.iter().map(|e| e.rank).collect();
    if stated != set.ranks() {
        return Err(Error::Format(format!(
            "stated ranks {stated:?} differ from traces {:?}",
            set.ranks()
        )));
    }
    Ok(set)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagonalizerFile {
    pub block_sizes: Vec<usize>,
    pub unitary: bool,
    pub matrix: Vec<Vec<Pair>>,
}

impl From<&Diagonalizer> for DiagonalizerFile {
    fn from(d: &Diagonalizer) -> Self {
        Self {
            block_sizes: d.block_sizes().to_vec(),
            unitary: d.is_unitary(),
            matrix: matrix_to_pairs(d.matrix()),
        }
    }
}

pub fn parse_diagonalizer(text: &str) -> Result<Diagonalizer> {
    let file: DiagonalizerFile = serde_json::from_str(text)?;
    Diagonalizer::new(
        matrix_from_pairs(&file.matrix)?,
        file.block_sizes,
        file.unitary,
        Provenance::External,
    )
}

pub fn coeffs_to_json(w: &GroupRingElement) -> String {
    let pairs: Vec<Pair> = w.coeffs().iter().map(|&z| pair(z)).collect();
    serde_json::to_string(&pairs).expect("finite coefficients serialize")
}

pub fn parse_coeffs(text: &str, group: &Arc<FiniteGroup>) -> Result<GroupRingElement> {
    let pairs: Vec<Pair> = serde_json::from_str(text)?;
    GroupRingElement::new(group.clone(), pairs.iter().map(unpair).collect())
}

pub fn read_coeffs(path: &Path, group: &Arc<FiniteGroup>) -> Result<GroupRingElement> {
    parse_coeffs(&read_text(path)?, group)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    read_text(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};
    use crate::idempotents::{character_table, idempotents_for, CharacterSource};
    use proptest::prelude::*;

    fn grp(s: &str) -> Arc<FiniteGroup> {
        Arc::new(build_group(&s.parse().unwrap()).unwrap())
    }

    proptest! {
        #[test]
        fn csv_cells_roundtrip(re in -1e6f64..1e6, im in -1e6f64..1e6, tiny in -1e-20f64..1e-20) {
            for z in [Complex64::new(re, im), Complex64::new(tiny, -tiny), Complex64::new(re, 0.0)] {
                prop_assert_eq!(parse_csv_cell(&format_csv_cell(z)).unwrap(), z);
            }
        }

        #[test]
        fn json_matrix_roundtrip(vals in proptest::collection::vec(-10.0f64..10.0, 8)) {
            let m = CMatrix::from_fn(2, 2, |i, j| Complex64::new(vals[2 * i + j], vals[4 + 2 * i + j]));
            prop_assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m.clone());
            prop_assert_eq!(matrix_from_csv(&matrix_to_csv(&m)).unwrap(), m);
        }
    }

    #[test]
    fn csv_cell_forms() {
        assert_eq!(parse_csv_cell("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_csv_cell("-0.5-0.25i").unwrap(), Complex64::new(-0.5, -0.25));
        assert_eq!(parse_csv_cell("1e-3-2E+2i").unwrap(), Complex64::new(1e-3, -200.0));
        assert_eq!(parse_csv_cell("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_csv_cell("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_csv_cell("2.5i").unwrap(), Complex64::new(0.0, 2.5));
        assert!(parse_csv_cell("abc").is_err());
    }

    #[test]
    fn group_table_file_roundtrip_and_errors() {
        let g = grp("Q8");
        let text = serde_json::to_string(&GroupTableFile::from(&*g)).unwrap();
        let back = parse_group_table(&text).unwrap();
        assert_eq!(back, *g);
        assert_eq!(back.labels(), g.labels());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q8.json");
        std::fs::write(&path, &text).unwrap();
        let from_spec = build_group(&GroupSpec::Table(path)).unwrap();
        assert_eq!(from_spec, *g);
        assert!(from_spec.spec().is_none());

        let bad = r#"{"order": 2, "labels": ["1", "x"], "table": [[0, 1], [1, 1]]}"#;
        assert!(matches!(parse_group_table(bad), Err(Error::Structure(_))));
        assert!(parse_group_table("not json").is_err());
    }

    #[test]
    fn character_table_file_reorders_columns() {
        let g = grp("D10");
        let t = character_table(&g, &CharacterSource::Builtin).unwrap();
        let mut file = CharacterTableFile::from_table(&t, &g);
        // Rotate the columns; the parser must put them back.
        file.classes.sizes.rotate_left(1);
        file.classes.representatives.rotate_left(1);
        for row in &mut file.rows {
            row.rotate_left(1);
        }
        let text = serde_json::to_string(&file).unwrap();
        let back = parse_character_table(&text, &g).unwrap();
        assert!(crate::linalg::max_abs_diff(back.values(), t.values()) == 0.0);

        file.classes.sizes[0] += 1;
        let text = serde_json::to_string(&file).unwrap();
        assert!(parse_character_table(&text, &g).is_err());
    }

    #[test]
    fn idempotent_file_roundtrip() {
        let g = grp("D6");
        let set = idempotents_for(&g, &CharacterSource::Builtin).unwrap();
        let text = serde_json::to_string(&IdempotentSetFile::from(&set)).unwrap();
        let back = parse_idempotent_set(&text, &g).unwrap();
        assert_eq!(back.ranks(), set.ranks());

        let mut file = IdempotentSetFile::from(&set);
        file.idempotents.pop();
        let text = serde_json::to_string(&file).unwrap();
        assert!(parse_idempotent_set(&text, &g).is_err());
    }

    #[test]
    fn diagonalizer_file_roundtrip() {
        let g = grp("Q8");
        let set = idempotents_for(&g, &CharacterSource::Builtin).unwrap();
        let d = crate::blockdiag::build_diagonalizer(&set, false).unwrap();
        let text = serde_json::to_string(&DiagonalizerFile::from(&d)).unwrap();
        let back = parse_diagonalizer(&text).unwrap();
        assert_eq!(back.matrix(), d.matrix());
        assert_eq!(back.block_sizes(), d.block_sizes());
    }
}
