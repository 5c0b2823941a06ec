//! Text formats: barcode, map-chain, and grid inputs; diagram and
//! landscape outputs. All coordinate output goes through the exact
//! formatter, so identical inputs produce byte-identical files.

use crate::CliError;
use gpd_core::mapchain::Matrix;
use gpd_core::util::{format_coord, parse_coord};
use gpd_core::{Barcode, Coord, FieldSpec, Grid, GridInterval, MapChain, SignedDiagram};

/// A parsed input module: either front door.
pub enum ModuleInput {
    Barcode(Barcode),
    Chain(MapChain),
}

fn parse_err(name: &str, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse(format!("{name}:{line}: {}", msg.into()))
}

/// Strip comments and blank lines, keeping 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (i + 1, line)
        })
        .filter(|(_, line)| !line.is_empty())
        .collect()
}

/// Barcode file: whitespace-separated `birth death [multiplicity]` lines
/// with integer grid indices, `#` comments, and an optional `m <value>`
/// line pinning the grid size (otherwise m = max death − 1).
pub fn parse_barcode(name: &str, text: &str) -> Result<Barcode, CliError> {
    let mut declared_m: Option<usize> = None;
    let mut bars: Vec<(usize, usize, i64, usize)> = Vec::new();
    for (lineno, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "m" {
            if fields.len() != 2 {
                return Err(parse_err(name, lineno, "expected `m <grid size>`"));
            }
            let value = fields[1]
                .parse::<usize>()
                .map_err(|_| parse_err(name, lineno, "grid size must be a non-negative integer"))?;
            declared_m = Some(value);
            continue;
        }
        if fields.len() != 2 && fields.len() != 3 {
            return Err(parse_err(
                name,
                lineno,
                format!(
                    "expected `birth death [multiplicity]`, found {} fields",
                    fields.len()
                ),
            ));
        }
        let parse_idx = |s: &str| -> Result<usize, CliError> {
            s.parse::<usize>()
                .map_err(|_| parse_err(name, lineno, format!("`{s}` is not a grid index")))
        };
        let birth = parse_idx(fields[0])?;
        let death = parse_idx(fields[1])?;
        let mult = if fields.len() == 3 {
            fields[2].parse::<i64>().map_err(|_| {
                parse_err(
                    name,
                    lineno,
                    format!("`{}` is not a multiplicity", fields[2]),
                )
            })?
        } else {
            1
        };
        if birth >= death {
            return Err(parse_err(
                name,
                lineno,
                format!("bar [{birth},{death}) needs birth < death"),
            ));
        }
        if mult < 1 {
            return Err(parse_err(name, lineno, "multiplicity must be at least 1"));
        }
        bars.push((birth, death, mult, lineno));
    }
    let max_death = bars.iter().map(|&(_, d, _, _)| d).max().unwrap_or(1);
    let m = match declared_m {
        Some(m) => {
            if max_death > m + 1 {
                return Err(CliError::Parse(format!(
                    "{name}: declared m = {m} but a bar dies at {max_death} > m+1"
                )));
            }
            m
        }
        None => max_death - 1,
    };
    let mut bc = Barcode::empty(m);
    for (birth, death, mult, lineno) in bars {
        bc.add(GridInterval::new(birth, death).unwrap(), mult)
            .map_err(|e| parse_err(name, lineno, e.to_string()))?;
    }
    Ok(bc)
}

/// Map-chain file:
/// ```text
/// mapchain
/// m 3
/// field gf2            # or `field gf 5`, `field rational`
/// dims 2 2 2 1
/// map 0
/// 1 0
/// 0 1
/// map 1
/// ...
/// ```
/// Rows of each `map i` block are the d_{i+1} rows of a d_{i+1}×d_i matrix.
pub fn parse_mapchain(name: &str, text: &str) -> Result<MapChain, CliError> {
    let lines = content_lines(text);
    let mut pos = 0usize;
    let next = |pos: &mut usize| -> Option<(usize, &str)> {
        let out = lines.get(*pos).copied();
        *pos += 1;
        out
    };

    match next(&mut pos) {
        Some((_, "mapchain")) => {}
        Some((lineno, other)) => {
            return Err(parse_err(
                name,
                lineno,
                format!("expected `mapchain` header, found `{other}`"),
            ))
        }
        None => return Err(CliError::Parse(format!("{name}: empty map-chain file"))),
    }

    let (lineno, m_line) =
        next(&mut pos).ok_or_else(|| CliError::Parse(format!("{name}: missing `m` line")))?;
    let m: usize = m_line
        .strip_prefix("m ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(name, lineno, "expected `m <size>`"))?;

    let (lineno, field_line) =
        next(&mut pos).ok_or_else(|| CliError::Parse(format!("{name}: missing `field` line")))?;
    let field_words: Vec<&str> = field_line.split_whitespace().collect();
    let field = match field_words.as_slice() {
        ["field", "gf2"] => FieldSpec::Gf(2),
        ["field", "gf", p] => {
            let p: u64 = p
                .parse()
                .map_err(|_| parse_err(name, lineno, "modulus must be an integer"))?;
            FieldSpec::gf(p).map_err(|e| parse_err(name, lineno, e.to_string()))?
        }
        ["field", "rational"] | ["field", "q"] => FieldSpec::Rational,
        _ => {
            return Err(parse_err(
                name,
                lineno,
                "expected `field gf2|gf <p>|rational`",
            ))
        }
    };

    let (lineno, dims_line) =
        next(&mut pos).ok_or_else(|| CliError::Parse(format!("{name}: missing `dims` line")))?;
    let dims: Vec<usize> = dims_line
        .strip_prefix("dims")
        .map(|rest| {
            rest.split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()
        .ok()
        .flatten()
        .ok_or_else(|| parse_err(name, lineno, "expected `dims d0 d1 ... dm`"))?;
    if dims.len() != m + 1 {
        return Err(parse_err(
            name,
            lineno,
            format!("dims lists {} values, expected m+1 = {}", dims.len(), m + 1),
        ));
    }

    let mut maps = Vec::with_capacity(m);
    for i in 0..m {
        let (lineno, header) = next(&mut pos)
            .ok_or_else(|| CliError::Parse(format!("{name}: missing `map {i}` block")))?;
        if header != format!("map {i}") {
            return Err(parse_err(
                name,
                lineno,
                format!("expected `map {i}`, found `{header}`"),
            ));
        }
        let rows_needed = dims[i + 1];
        let cols = dims[i];
        let mut rows: Vec<Vec<Coord>> = Vec::with_capacity(rows_needed);
        for _ in 0..rows_needed {
            let (lineno, row_line) = next(&mut pos)
                .ok_or_else(|| CliError::Parse(format!("{name}: map {i} is missing rows")))?;
            let entries: Vec<Coord> = row_line
                .split_whitespace()
                .map(|w| {
                    parse_coord(w)
                        .ok_or_else(|| parse_err(name, lineno, format!("bad entry `{w}`")))
                })
                .collect::<Result<_, _>>()?;
            if entries.len() != cols {
                return Err(parse_err(
                    name,
                    lineno,
                    format!("map {i} row has {} entries, expected {cols}", entries.len()),
                ));
            }
            rows.push(entries);
        }
        let mut mat = Matrix::zeros(rows_needed, cols);
        for (r, row) in rows.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                mat.set(r, c, v);
            }
        }
        maps.push(mat);
    }
    if let Some((lineno, extra)) = lines.get(pos) {
        return Err(parse_err(
            name,
            *lineno,
            format!("unexpected trailing content `{extra}`"),
        ));
    }
    MapChain::new(dims, maps, field).map_err(|e| CliError::Parse(format!("{name}: {e}")))
}

/// Auto-detect: a `mapchain` header selects the chain parser, anything
/// else is a barcode.
pub fn parse_module(name: &str, text: &str) -> Result<ModuleInput, CliError> {
    let first = content_lines(text)
        .first()
        .map(|&(_, line)| line.to_string());
    match first.as_deref() {
        Some("mapchain") => Ok(ModuleInput::Chain(parse_mapchain(name, text)?)),
        _ => Ok(ModuleInput::Barcode(parse_barcode(name, text)?)),
    }
}

/// Grid file: one real value per line (integer, decimal, or `n/d`),
/// strictly increasing; must supply exactly m+2 values.
pub fn parse_grid(name: &str, text: &str, m: usize) -> Result<Grid, CliError> {
    let mut points = Vec::new();
    for (lineno, line) in content_lines(text) {
        for word in line.split_whitespace() {
            let v = parse_coord(word)
                .ok_or_else(|| parse_err(name, lineno, format!("`{word}` is not a coordinate")))?;
            points.push(v);
        }
    }
    if points.len() != m + 2 {
        return Err(CliError::Parse(format!(
            "{name}: grid has {} points but the module needs m+2 = {}",
            points.len(),
            m + 2
        )));
    }
    Grid::new(points).map_err(|e| CliError::Parse(format!("{name}: {e}")))
}

/// Render one diagram level: `birth death value` lines, sorted by
/// (birth, death); deaths at index m+1 render as `inf` when requested.
pub fn render_diagram(d: &SignedDiagram, grid: &Grid, inf_deaths: bool, out: &mut String) {
    let m = d.m();
    for (bar, v) in d.points() {
        let birth = format_coord(grid.value(bar.birth()));
        let death = if inf_deaths && bar.death() == m + 1 {
            "inf".to_string()
        } else {
            format_coord(grid.value(bar.death()))
        };
        out.push_str(&format!("{birth} {death} {v}\n"));
    }
}

pub fn diagram_json(d: &SignedDiagram, grid: &Grid, inf_deaths: bool) -> serde_json::Value {
    let m = d.m();
    let points: Vec<serde_json::Value> = d
        .points()
        .map(|(bar, v)| {
            serde_json::json!({
                "birth": format_coord(grid.value(bar.birth())),
                "death": if inf_deaths && bar.death() == m + 1 {
                    "inf".to_string()
                } else {
                    format_coord(grid.value(bar.death()))
                },
                "birth_index": bar.birth(),
                "death_index": bar.death(),
                "value": v,
            })
        })
        .collect();
    serde_json::Value::Array(points)
}
