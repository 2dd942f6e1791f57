//! On-disk compile artifacts.
//!
//! A layout file is a single JSON document carrying the grid, the placed
//! qubits with their labels, the plaquettes (or projector trees in CNOT
//! mode), the local fields, and the full code matrices, so that `decode`
//! and `render` need no other input.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnot::{CnotLayout, ProjectorTree};
use crate::code::ParityCode;
use crate::gf2::BitMatrix;
use crate::layout::{Layout, Plaquette, PlaquetteKind};
use crate::projector::AncillaRecord;

pub const LAYOUT_FORMAT: &str = "paritycc-layout/1";

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("invalid layout file: {0}")]
    Invalid(String),
    #[error("layout json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayoutFile {
    pub format: String,
    pub mode: String,
    pub grid: GridDto,
    pub qubits: Vec<QubitDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_qubits: Vec<FixedQubitDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plaquettes: Vec<PlaquetteDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trees: Vec<TreeDto>,
    pub fields: Vec<f64>,
    pub field_offset: f64,
    pub constraint_strength: f64,
    pub code: CodeDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDto {
    pub height: usize,
    pub width: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitDto {
    pub index: usize,
    pub label: String,
    pub row: usize,
    pub col: usize,
    pub is_ancilla: bool,
    /// Physical qubits whose product an ancilla represents.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub definition: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedQubitDto {
    pub index: usize,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaquetteDto {
    pub cell: [usize; 2],
    pub qubits: Vec<usize>,
    pub kind: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeDto {
    pub projector: usize,
    pub root: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeDto {
    pub num_logical: usize,
    pub generator: Vec<String>,
    pub check: Vec<String>,
    pub decode: Vec<String>,
    pub constraint: Vec<String>,
    pub constraint_offsets: Vec<u8>,
    /// 1-based logical supports, one per parity qubit.
    pub term_labels: Vec<Vec<usize>>,
    pub coefficients: Vec<f64>,
    pub degeneracy: usize,
    pub gauge: String,
}

/// Human-readable label: the 1-based logical combination a qubit's
/// Z-value represents. Ancilla products resolve through their definitions.
pub fn qubit_label(code: &ParityCode, ancillas: &[AncillaRecord], q: usize) -> String {
    let support = logical_support(code, ancillas, q);
    support
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn logical_support(code: &ParityCode, ancillas: &[AncillaRecord], q: usize) -> Vec<usize> {
    if q < code.num_parity() {
        return code.term_labels()[q].clone();
    }
    let record = ancillas
        .iter()
        .find(|a| a.physical_index == q)
        .expect("ancilla record present");
    let mut acc = std::collections::BTreeSet::new();
    for &m in &record.definition {
        for i in logical_support(code, ancillas, m) {
            if !acc.remove(&i) {
                acc.insert(i);
            }
        }
    }
    acc.into_iter().collect()
}

fn matrix_rows(m: &BitMatrix) -> Vec<String> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| if m.get(r, c) { '1' } else { '0' })
                .collect()
        })
        .collect()
}

fn parse_matrix(rows: &[String], cols: usize) -> Result<BitMatrix, ArtifactError> {
    let mut m = BitMatrix::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(ArtifactError::Invalid(format!(
                "matrix row {r} has {} columns, expected {cols}",
                row.len()
            )));
        }
        for (c, ch) in row.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => m.set(r, c, true),
                other => {
                    return Err(ArtifactError::Invalid(format!(
                        "matrix row {r} contains `{other}`"
                    )))
                }
            }
        }
    }
    Ok(m)
}

fn bits_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

fn parse_bits(s: &str) -> Result<Vec<u8>, ArtifactError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(ArtifactError::Invalid(format!("bit string contains `{other}`"))),
        })
        .collect()
}

fn code_dto(code: &ParityCode) -> CodeDto {
    CodeDto {
        num_logical: code.num_logical(),
        generator: matrix_rows(code.generator()),
        check: matrix_rows(code.check()),
        decode: matrix_rows(code.decode_matrix()),
        constraint: matrix_rows(code.constraint_matrix()),
        constraint_offsets: code.constraint_offsets().to_vec(),
        term_labels: code
            .term_labels()
            .iter()
            .map(|s| s.iter().map(|&q| q + 1).collect())
            .collect(),
        coefficients: code.coefficients().to_vec(),
        degeneracy: code.degeneracy(),
        gauge: bits_string(code.gauge()),
    }
}

fn code_from_dto(dto: &CodeDto) -> Result<ParityCode, ArtifactError> {
    let n = dto.num_logical;
    let k = dto.term_labels.len();
    let generator = parse_matrix(&dto.generator, k)?;
    if generator.rows() != n {
        return Err(ArtifactError::Invalid("generator row count".into()));
    }
    let check = parse_matrix(&dto.check, k)?;
    let decode = parse_matrix(&dto.decode, k)?;
    let constraint = parse_matrix(&dto.constraint, n)?;
    let labels: Vec<Vec<usize>> = dto
        .term_labels
        .iter()
        .map(|s| {
            s.iter()
                .map(|&q| {
                    if q == 0 || q > n {
                        Err(ArtifactError::Invalid("term label out of range".into()))
                    } else {
                        Ok(q - 1)
                    }
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if dto.coefficients.len() != k {
        return Err(ArtifactError::Invalid("coefficient count".into()));
    }
    let gauge = parse_bits(&dto.gauge)?;
    if gauge.len() != n {
        return Err(ArtifactError::Invalid("gauge length".into()));
    }
    Ok(ParityCode::from_raw_parts(
        generator,
        check,
        decode,
        constraint,
        dto.constraint_offsets.clone(),
        labels,
        dto.coefficients.clone(),
        dto.degeneracy,
        gauge,
    ))
}

fn qubit_dtos(
    code: &ParityCode,
    ancillas: &[AncillaRecord],
    positions: &[Option<(usize, usize)>],
) -> Vec<QubitDto> {
    let k = code.num_parity();
    positions
        .iter()
        .enumerate()
        .filter_map(|(q, pos)| {
            pos.map(|(row, col)| QubitDto {
                index: q,
                label: qubit_label(code, ancillas, q),
                row,
                col,
                is_ancilla: q >= k,
                definition: ancillas
                    .iter()
                    .find(|a| a.physical_index == q)
                    .map(|a| a.definition.clone())
                    .unwrap_or_default(),
            })
        })
        .collect()
}

fn fixed_dtos(code: &ParityCode, ancillas: &[AncillaRecord], fixed: &[usize]) -> Vec<FixedQubitDto> {
    fixed
        .iter()
        .map(|&q| FixedQubitDto {
            index: q,
            label: qubit_label(code, ancillas, q),
        })
        .collect()
}

fn fields_of(code: &ParityCode, num_physical: usize, fixed: &[usize]) -> (Vec<f64>, f64) {
    let mut fields = vec![0.0; num_physical];
    let mut offset = 0.0;
    for a in 0..code.num_parity() {
        let sign = if code.gauge_word()[a] == 1 { -1.0 } else { 1.0 };
        let j = sign * code.coefficients()[a];
        if fixed.contains(&a) {
            offset += j;
        } else {
            fields[a] = j;
        }
    }
    (fields, offset)
}

/// Serialize a plaquette compile result.
pub fn plaquette_layout_file(code: &ParityCode, layout: &Layout, all_ancillas: &[AncillaRecord], strength: f64) -> LayoutFile {
    let (fields, field_offset) = fields_of(code, layout.num_physical, &layout.fixed);
    LayoutFile {
        format: LAYOUT_FORMAT.to_string(),
        mode: "plaquette".to_string(),
        grid: GridDto {
            height: layout.grid_bounds.0,
            width: layout.grid_bounds.1,
        },
        qubits: qubit_dtos(code, all_ancillas, &layout.positions),
        fixed_qubits: fixed_dtos(code, all_ancillas, &layout.fixed),
        plaquettes: layout
            .plaquettes
            .iter()
            .map(|p| PlaquetteDto {
                cell: [p.cell.0, p.cell.1],
                qubits: p.qubits.clone(),
                kind: match p.kind {
                    PlaquetteKind::Square => "square",
                    PlaquetteKind::Triangle => "triangle",
                    PlaquetteKind::Edge => "edge",
                }
                .to_string(),
            })
            .collect(),
        trees: Vec::new(),
        fields,
        field_offset,
        constraint_strength: strength,
        code: code_dto(code),
    }
}

/// Serialize a CNOT compile result.
pub fn cnot_layout_file(code: &ParityCode, layout: &CnotLayout, all_ancillas: &[AncillaRecord], strength: f64) -> LayoutFile {
    let (fields, field_offset) = fields_of(code, layout.num_physical, &layout.fixed);
    LayoutFile {
        format: LAYOUT_FORMAT.to_string(),
        mode: "cnot".to_string(),
        grid: GridDto {
            height: layout.grid_bounds.0,
            width: layout.grid_bounds.1,
        },
        qubits: qubit_dtos(code, all_ancillas, &layout.positions),
        fixed_qubits: fixed_dtos(code, all_ancillas, &layout.fixed),
        plaquettes: Vec::new(),
        trees: layout
            .trees
            .iter()
            .map(|t| TreeDto {
                projector: t.projector,
                root: t.root,
                edges: t.edges.iter().map(|&(a, b)| [a, b]).collect(),
            })
            .collect(),
        fields,
        field_offset,
        constraint_strength: strength,
        code: code_dto(code),
    }
}

/// Parsed contents of a layout file.
pub struct LoadedLayout {
    pub code: ParityCode,
    pub layout: Layout,
    pub trees: Vec<ProjectorTree>,
    pub mode: String,
    pub strength: f64,
}

pub fn load_layout_file(text: &str) -> Result<LoadedLayout, ArtifactError> {
    let file: LayoutFile = serde_json::from_str(text)?;
    if file.format != LAYOUT_FORMAT {
        return Err(ArtifactError::Invalid(format!(
            "unsupported format `{}`",
            file.format
        )));
    }
    let code = code_from_dto(&file.code)?;
    let k = code.num_parity();
    let max_index = file
        .qubits
        .iter()
        .map(|q| q.index)
        .chain(file.fixed_qubits.iter().map(|q| q.index))
        .max()
        .map_or(0, |m| m + 1);
    let num_physical = max_index.max(k);
    let mut positions = vec![None; num_physical];
    for q in &file.qubits {
        if q.row >= file.grid.height || q.col >= file.grid.width {
            return Err(ArtifactError::Invalid(format!(
                "qubit {} outside the grid",
                q.index
            )));
        }
        positions[q.index] = Some((q.row, q.col));
    }
    let fixed: Vec<usize> = file.fixed_qubits.iter().map(|q| q.index).collect();
    let plaquettes = file
        .plaquettes
        .iter()
        .map(|p| {
            let kind = match p.kind.as_str() {
                "square" => PlaquetteKind::Square,
                "triangle" => PlaquetteKind::Triangle,
                "edge" => PlaquetteKind::Edge,
                other => {
                    return Err(ArtifactError::Invalid(format!(
                        "unknown plaquette kind `{other}`"
                    )))
                }
            };
            Ok(Plaquette {
                cell: (p.cell[0], p.cell[1]),
                qubits: p.qubits.clone(),
                kind,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dynamical_ancillas: Vec<AncillaRecord> = file
        .qubits
        .iter()
        .filter(|q| q.is_ancilla && !q.definition.is_empty())
        .map(|q| AncillaRecord {
            physical_index: q.index,
            definition: q.definition.clone(),
        })
        .collect();
    let layout = Layout {
        positions,
        plaquettes,
        grid_bounds: (file.grid.height, file.grid.width),
        dynamical_ancillas,
        fixed,
        num_physical,
    };
    let trees = file
        .trees
        .iter()
        .map(|t| ProjectorTree {
            projector: t.projector,
            root: t.root,
            edges: t.edges.iter().map(|&[a, b]| (a, b)).collect(),
        })
        .collect();
    Ok(LoadedLayout {
        code,
        layout,
        trees,
        mode: file.mode,
        strength: file.constraint_strength,
    })
}
