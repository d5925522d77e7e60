//! JSON file formats.
//!
//! Spaces may appear inline or as a path to another file; relative paths
//! resolve against the directory of the file that mentions them.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use semitop_core::group::LoopTable;
use semitop_core::interval::{parse_rat, Interval};
use semitop_core::paths::{Mode, Piece, PlMap, StepPath};
use semitop_core::slices::{Affine, Band, BandPiece, SliceFamily};
use semitop_core::{FiniteSpace, SpaceMap, Subset};

/// A malformed or unreadable input file.
#[derive(Debug, thiserror::Error)]
pub struct InputError {
    pub file: PathBuf,
    /// 1-based line and column, when known.
    pub position: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file.display())?;
        if let Some((line, col)) = self.position {
            write!(f, ":{line}:{col}")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl InputError {
    pub fn new(file: &Path, message: impl Into<String>) -> InputError {
        InputError { file: file.to_path_buf(), position: None, message: message.into() }
    }

    pub fn at(file: &Path, line: usize, col: usize, message: impl Into<String>) -> InputError {
        InputError { file: file.to_path_buf(), position: Some((line, col)), message: message.into() }
    }
}

type Result<T> = std::result::Result<T, InputError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    File(String),
    Inline(SpaceFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub domain: SpaceRef,
    /// Defaults to the domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<SpaceRef>,
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceFile {
    pub interval: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub space: SpaceRef,
    pub pieces: Vec<PieceFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub name: String,
    /// A path file, relative to the table file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceFile>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub space: SpaceRef,
    pub basepoint: String,
    #[serde(default = "default_mode")]
    pub mode: u8,
    #[serde(default)]
    pub generators: Vec<GeneratorFile>,
}

fn default_mode() -> u8 {
    1
}

fn default_true() -> bool {
    true
}

/// Named paths and PL maps referenced from certificate text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub space: SpaceRef,
    #[serde(default = "default_mode")]
    pub mode: u8,
    #[serde(default = "default_true")]
    pub rel: bool,
    #[serde(default)]
    pub paths: BTreeMap<String, Vec<PieceFile>>,
    /// Node lists `[[t, value], ...]`.
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandPieceFile {
    pub value: String,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandFile {
    pub t: String,
    /// Affine expressions in `t`, e.g. `"0"`, `"1/2t"`, `"1 - 1/2t"`.
    pub bounds: Vec<String>,
    pub pieces: Vec<BandPieceFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceFile {
    pub space: SpaceRef,
    pub bands: Vec<BandFile>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| InputError::new(path, e.to_string()))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| InputError::at(path, e.line(), e.column(), e.to_string()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    parse_json(path, &read(path)?)
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

pub fn space_from_file(file: &SpaceFile) -> std::result::Result<FiniteSpace, String> {
    let names = file.points.clone();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut opens = Vec::with_capacity(file.opens.len());
    for (k, set) in file.opens.iter().enumerate() {
        let mut s = Subset::EMPTY;
        for name in set {
            let p = index.get(name.as_str()).ok_or_else(|| format!("opens[{k}]: unknown point {name:?}"))?;
            s = s.union(Subset::singleton(*p));
        }
        opens.push(s);
    }
    FiniteSpace::new(names, opens).map_err(|e| e.to_string())
}

pub fn space_to_file(space: &FiniteSpace) -> SpaceFile {
    SpaceFile {
        points: space.names().to_vec(),
        opens: space
            .opens()
            .iter()
            .map(|u| u.points().map(|p| space.name(p).to_string()).collect())
            .collect(),
    }
}

/// Resolves a space reference found in `base`.
pub fn resolve_space(base: &Path, r: &SpaceRef) -> Result<Arc<FiniteSpace>> {
    match r {
        SpaceRef::Inline(file) => space_from_file(file).map(Arc::new).map_err(|m| InputError::new(base, m)),
        SpaceRef::File(rel) => load_space(&resolve(base, rel)),
    }
}

pub fn load_space(path: &Path) -> Result<Arc<FiniteSpace>> {
    let file: SpaceFile = read_json(path)?;
    space_from_file(&file).map(Arc::new).map_err(|m| InputError::new(path, m))
}

pub fn map_from_file(base: &Path, file: &MapFile) -> Result<SpaceMap> {
    let domain = resolve_space(base, &file.domain)?;
    let codomain = match &file.codomain {
        Some(r) => resolve_space(base, r)?,
        None => domain.clone(),
    };
    let mut images = Vec::with_capacity(domain.point_count());
    for name in domain.names() {
        let target = file
            .images
            .get(name)
            .ok_or_else(|| InputError::new(base, format!("images: no image for point {name:?}")))?;
        let q = codomain
            .index_of(target)
            .ok_or_else(|| InputError::new(base, format!("images: unknown codomain point {target:?}")))?;
        images.push(q);
    }
    if let Some(extra) = file.images.keys().find(|k| domain.index_of(k).is_none()) {
        return Err(InputError::new(base, format!("images: unknown domain point {extra:?}")));
    }
    SpaceMap::new(domain, codomain, images).map_err(|e| InputError::new(base, e.to_string()))
}

pub fn load_map(path: &Path) -> Result<SpaceMap> {
    let file: MapFile = read_json(path)?;
    map_from_file(path, &file)
}

pub fn map_to_file(f: &SpaceMap) -> MapFile {
    let same = f.domain() == f.codomain();
    MapFile {
        domain: SpaceRef::Inline(space_to_file(f.domain())),
        codomain: (!same).then(|| SpaceRef::Inline(space_to_file(f.codomain()))),
        images: (0..f.domain().point_count())
            .map(|p| (f.domain().name(p).to_string(), f.codomain().name(f.apply(p)).to_string()))
            .collect(),
    }
}

pub fn path_from_pieces(base: &Path, space: &Arc<FiniteSpace>, pieces: &[PieceFile]) -> Result<StepPath> {
    let mut out = Vec::with_capacity(pieces.len());
    for (k, p) in pieces.iter().enumerate() {
        let interval: Interval =
            p.interval.parse().map_err(|e| InputError::new(base, format!("pieces[{k}]: {e}")))?;
        let value = space
            .index_of(&p.value)
            .ok_or_else(|| InputError::new(base, format!("pieces[{k}]: unknown point {:?}", p.value)))?;
        out.push(Piece { interval, value });
    }
    StepPath::new(space.clone(), out).map_err(|e| InputError::new(base, e.to_string()))
}

pub fn pieces_to_file(alpha: &StepPath) -> Vec<PieceFile> {
    alpha
        .pieces()
        .iter()
        .map(|p| PieceFile { interval: p.interval.to_string(), value: alpha.space().name(p.value).to_string() })
        .collect()
}

pub fn path_to_file(alpha: &StepPath) -> PathFile {
    PathFile { space: SpaceRef::Inline(space_to_file(alpha.space())), pieces: pieces_to_file(alpha) }
}

pub fn load_path(path: &Path) -> Result<StepPath> {
    let file: PathFile = read_json(path)?;
    let space = resolve_space(path, &file.space)?;
    path_from_pieces(path, &space, &file.pieces)
}

/// A path file whose space must equal `space`.
pub fn load_path_in(path: &Path, space: &Arc<FiniteSpace>) -> Result<StepPath> {
    let alpha = load_path(path)?;
    if **alpha.space() != **space {
        return Err(InputError::new(path, "path lives in a different space"));
    }
    let pieces = alpha.pieces().to_vec();
    StepPath::new(space.clone(), pieces).map_err(|e| InputError::new(path, e.to_string()))
}

pub fn mode_of(base: &Path, m: u8) -> Result<Mode> {
    Mode::from_index(m).map_err(|e| InputError::new(base, e.to_string()))
}

/// Builds the table with every generator registered, in file order.
pub fn table_from_file(base: &Path, file: &TableFile, mode: Option<Mode>) -> Result<LoopTable> {
    let space = resolve_space(base, &file.space)?;
    let bp = space
        .index_of(&file.basepoint)
        .ok_or_else(|| InputError::new(base, format!("unknown basepoint {:?}", file.basepoint)))?;
    let mode = match mode {
        Some(m) => m,
        None => mode_of(base, file.mode)?,
    };
    let mut table = LoopTable::new(space.clone(), bp, mode).map_err(|e| InputError::new(base, e.to_string()))?;
    for g in &file.generators {
        let alpha = match (&g.file, &g.pieces) {
            (Some(f), None) => load_path_in(&resolve(base, f), &space)?,
            (None, Some(p)) => path_from_pieces(base, &space, p)?,
            _ => {
                return Err(InputError::new(
                    base,
                    format!("generator {:?} needs exactly one of \"file\" or \"pieces\"", g.name),
                ))
            }
        };
        table
            .register_loop(&g.name, alpha)
            .map_err(|e| InputError::new(base, format!("generator {:?}: {e}", g.name)))?;
    }
    Ok(table)
}

pub fn load_table(path: &Path, mode: Option<Mode>) -> Result<LoopTable> {
    let file: TableFile = read_json(path)?;
    table_from_file(path, &file, mode)
}

pub fn table_to_file(table: &LoopTable) -> TableFile {
    TableFile {
        space: SpaceRef::Inline(space_to_file(table.space())),
        basepoint: table.space().name(table.basepoint()).to_string(),
        mode: table.mode().index(),
        generators: table
            .generators()
            .iter()
            .map(|(name, alpha)| GeneratorFile { name: name.clone(), file: None, pieces: Some(pieces_to_file(alpha)) })
            .collect(),
    }
}

/// Resolved contents of a bundle file.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub space: Arc<FiniteSpace>,
    pub mode: Mode,
    pub rel: bool,
    pub paths: BTreeMap<String, StepPath>,
    pub maps: BTreeMap<String, PlMap>,
    pub certificate: Option<String>,
}

pub fn bundle_from_file(base: &Path, file: &BundleFile) -> Result<Bundle> {
    let space = resolve_space(base, &file.space)?;
    let mut paths = BTreeMap::new();
    for (name, pieces) in &file.paths {
        let p = path_from_pieces(base, &space, pieces)
            .map_err(|e| InputError::new(base, format!("paths.{name}: {}", e.message)))?;
        paths.insert(name.clone(), p);
    }
    let mut maps = BTreeMap::new();
    for (name, nodes) in &file.maps {
        let mut parsed = Vec::with_capacity(nodes.len());
        for [t, v] in nodes {
            let t = parse_rat(t).map_err(|e| InputError::new(base, format!("maps.{name}: {e}")))?;
            let v = parse_rat(v).map_err(|e| InputError::new(base, format!("maps.{name}: {e}")))?;
            parsed.push((t, v));
        }
        let rho = PlMap::new(parsed).map_err(|e| InputError::new(base, format!("maps.{name}: {e}")))?;
        maps.insert(name.clone(), rho);
    }
    Ok(Bundle { space, mode: mode_of(base, file.mode)?, rel: file.rel, paths, maps, certificate: file.certificate.clone() })
}

pub fn load_bundle(path: &Path) -> Result<Bundle> {
    let file: BundleFile = read_json(path)?;
    bundle_from_file(path, &file)
}

/// Parses `c`, `mt`, `c + mt` or `c - mt` with rational `c`, `m`; a bare
/// `t` means slope 1.
pub fn parse_affine(text: &str) -> std::result::Result<Affine, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty bound".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        if i > 0 && (ch == '+' || ch == '-') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut constant = semitop_core::interval::zero();
    let mut slope = semitop_core::interval::zero();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(term)),
        };
        let signed = |r: semitop_core::Rat| if sign < 0 { -r } else { r };
        if let Some(coef) = body.strip_suffix('t') {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = if coef.is_empty() { semitop_core::interval::one() } else { parse_rat(coef).map_err(|e| e.to_string())? };
            slope += signed(c);
        } else {
            constant += signed(parse_rat(body).map_err(|e| e.to_string())?);
        }
    }
    Ok(Affine::new(constant, slope))
}

pub fn slices_from_file(base: &Path, file: &SliceFile) -> Result<SliceFamily> {
    let space = resolve_space(base, &file.space)?;
    let mut bands = Vec::with_capacity(file.bands.len());
    for (i, b) in file.bands.iter().enumerate() {
        let t: Interval = b.t.parse().map_err(|e| InputError::new(base, format!("bands[{i}].t: {e}")))?;
        let bounds = b
            .bounds
            .iter()
            .enumerate()
            .map(|(k, s)| parse_affine(s).map_err(|e| InputError::new(base, format!("bands[{i}].bounds[{k}]: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut pieces = Vec::with_capacity(b.pieces.len());
        for (k, p) in b.pieces.iter().enumerate() {
            let value = space
                .index_of(&p.value)
                .ok_or_else(|| InputError::new(base, format!("bands[{i}].pieces[{k}]: unknown point {:?}", p.value)))?;
            pieces.push(BandPiece { value, lo_closed: p.lo_closed, hi_closed: p.hi_closed });
        }
        bands.push(Band { t, bounds, pieces });
    }
    SliceFamily::new(space, bands).map_err(|e| InputError::new(base, e.to_string()))
}

pub fn load_slices(path: &Path) -> Result<SliceFamily> {
    let file: SliceFile = read_json(path)?;
    slices_from_file(path, &file)
}

pub fn slices_to_file(h: &SliceFamily) -> SliceFile {
    let space = h.space();
    SliceFile {
        space: SpaceRef::Inline(space_to_file(space)),
        bands: h
            .bands()
            .iter()
            .map(|b| BandFile {
                t: b.t.to_string(),
                bounds: b.bounds.iter().map(|a| a.to_string()).collect(),
                pieces: b
                    .pieces
                    .iter()
                    .map(|p| BandPieceFile {
                        value: space.name(p.value).to_string(),
                        lo_closed: p.lo_closed,
                        hi_closed: p.hi_closed,
                    })
                    .collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use semitop_core::interval::rat;

    #[test]
    fn affine_syntax() {
        let a = parse_affine("1 - 1/2t").unwrap();
        assert_eq!((a.constant, a.slope), (rat(1, 1), rat(-1, 2)));
        let a = parse_affine("t").unwrap();
        assert_eq!((a.constant, a.slope), (rat(0, 1), rat(1, 1)));
        let a = parse_affine("-1/4 + 3*t").unwrap();
        assert_eq!((a.constant, a.slope), (rat(-1, 4), rat(3, 1)));
        assert!(parse_affine("").is_err());
        assert!(parse_affine("x").is_err());
        for s in ["0", "1/2", "1/4 + 1/2t", "1 - 1/2t", "-2t"] {
            let a = parse_affine(s).unwrap();
            assert_eq!(parse_affine(&a.to_string()).unwrap(), a);
        }
    }

    #[test]
    fn space_round_trip() {
        let file = SpaceFile {
            points: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            opens: vec![vec![], vec!["a".into()], vec!["a".into(), "b".into()], vec!["a".into(), "b".into(), "c".into(), "d".into()]],
        };
        let s = space_from_file(&file).unwrap();
        assert_eq!(space_to_file(&s), file);
        let bad = SpaceFile { points: vec!["a".into()], opens: vec![vec!["z".into()]] };
        assert!(space_from_file(&bad).unwrap_err().contains("unknown point"));
    }

    #[test]
    fn json_errors_carry_positions() {
        let e = parse_json::<SpaceFile>(Path::new("x.json"), "{\n  \"points\": [1]\n}").unwrap_err();
        assert_eq!(e.position.map(|p| p.0), Some(2));
        assert!(e.to_string().starts_with("x.json:2:"));
    }
}
