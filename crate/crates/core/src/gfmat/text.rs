//! Line-oriented text formats.
//!
//! Block lists: header `# q=2 n=7 k=3`, then one block per line as
//! comma-separated column integers (`7,32,64`).
//!
//! Matrices: header `# q=2 n=7`, one row per line with space-separated
//! entries, consecutive matrices separated by a blank line.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gfmat::field::FieldOrder;
use crate::gfmat::matrix::FqMatrix;
use crate::gfmat::subspace::Subspace;

/// Parsed `key=value` pairs of a `#` header line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Header {
    pub q: Option<u32>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub t: Option<usize>,
}

impl Header {
    fn parse(line: &str) -> Option<Header> {
        let body = line.strip_prefix('#')?;
        let mut h = Header::default();
        let mut any = false;
        for tok in body.split_whitespace() {
            let Some((key, value)) = tok.split_once('=') else { continue };
            let value: usize = value.parse().ok()?;
            any = true;
            match key {
                "q" => h.q = Some(value as u32),
                "n" => h.n = Some(value),
                "k" => h.k = Some(value),
                "t" => h.t = Some(value),
                _ => {}
            }
        }
        any.then_some(h)
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Blocks file with its header. `path` is only used in error messages.
#[derive(Clone, Debug)]
pub struct BlockList {
    pub header: Header,
    pub q: FieldOrder,
    pub n: usize,
    pub k: usize,
    pub blocks: Vec<Subspace>,
}

pub fn parse_blocks(text: &str, path: &Path) -> Result<BlockList> {
    let mut header: Option<Header> = None;
    let mut rows: Vec<(usize, Vec<u64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() {
                header = Header::parse(line);
            }
            continue;
        }
        let ints = line
            .split(',')
            .map(|tok| tok.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(path, lineno, format!("bad integer: {e}")))?;
        rows.push((lineno, ints));
    }
    let header = header.ok_or_else(|| parse_err(path, 1, "missing header `# q=.. n=.. k=..`"))?;
    let q = FieldOrder::new(header.q.ok_or_else(|| parse_err(path, 1, "header lacks q"))?)
        .map_err(|e| parse_err(path, 1, e.to_string()))?;
    let n = header.n.ok_or_else(|| parse_err(path, 1, "header lacks n"))?;
    let k = header.k.ok_or_else(|| parse_err(path, 1, "header lacks k"))?;
    let mut blocks = Vec::with_capacity(rows.len());
    for (lineno, ints) in rows {
        if ints.len() != k {
            return Err(parse_err(path, lineno, format!("expected {k} integers, found {}", ints.len())));
        }
        let s = Subspace::decode_tuple(&ints, n, q).map_err(|e| parse_err(path, lineno, e.to_string()))?;
        blocks.push(s);
    }
    Ok(BlockList {
        header,
        q,
        n,
        k,
        blocks,
    })
}

pub fn format_blocks(q: FieldOrder, n: usize, k: usize, blocks: &[Subspace]) -> String {
    let mut out = format!("# q={q} n={n} k={k}\n");
    for b in blocks {
        let _ = writeln!(out, "{b}");
    }
    out
}

/// Parse a list of square matrices. Returns `(q, n, matrices)`.
pub fn parse_matrices(text: &str, path: &Path) -> Result<(FieldOrder, usize, Vec<FqMatrix>)> {
    let mut header: Option<Header> = None;
    let mut groups: Vec<Vec<(usize, Vec<u32>)>> = vec![Vec::new()];
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            if header.is_none() {
                header = Header::parse(line);
            }
            continue;
        }
        if line.is_empty() {
            if !groups.last().unwrap().is_empty() {
                groups.push(Vec::new());
            }
            continue;
        }
        let row = line
            .split_whitespace()
            .map(str::parse::<u32>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(path, lineno, format!("bad entry: {e}")))?;
        groups.last_mut().unwrap().push((lineno, row));
    }
    if groups.last().is_some_and(Vec::is_empty) {
        groups.pop();
    }
    let header = header.ok_or_else(|| parse_err(path, 1, "missing header `# q=.. n=..`"))?;
    let q = FieldOrder::new(header.q.ok_or_else(|| parse_err(path, 1, "header lacks q"))?)
        .map_err(|e| parse_err(path, 1, e.to_string()))?;
    let n = header.n.ok_or_else(|| parse_err(path, 1, "header lacks n"))?;
    let mut mats = Vec::with_capacity(groups.len());
    for g in groups {
        let first = g.first().map_or(1, |r| r.0);
        if g.len() != n {
            return Err(parse_err(path, first, format!("expected {n} rows, found {}", g.len())));
        }
        for (lineno, row) in &g {
            if row.len() != n {
                return Err(parse_err(path, *lineno, format!("expected {n} entries, found {}", row.len())));
            }
            if let Some(bad) = row.iter().find(|&&e| e >= q.get()) {
                return Err(parse_err(path, *lineno, format!("entry {bad} is not in F_{q}")));
            }
        }
        let rows: Vec<Vec<u32>> = g.into_iter().map(|(_, r)| r).collect();
        mats.push(FqMatrix::from_rows(q, &rows)?);
    }
    if mats.is_empty() {
        return Err(parse_err(path, 1, "no matrices"));
    }
    Ok((q, n, mats))
}

pub fn format_matrices(q: FieldOrder, n: usize, mats: &[FqMatrix]) -> String {
    let mut out = format!("# q={q} n={n}\n");
    let bodies: Vec<String> = mats.iter().map(|m| m.to_string()).collect();
    out.push_str(&bodies.join("\n"));
    out
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_round_trip() {
        let text = "# q=2 n=7 k=3\n7,32,64\n18,8,64\n";
        let list = parse_blocks(text, Path::new("x")).unwrap();
        assert_eq!(list.blocks.len(), 2);
        assert_eq!(list.blocks[1].encoding(), &[8, 18, 64]);
        let again = parse_blocks(&format_blocks(list.q, list.n, list.k, &list.blocks), Path::new("y")).unwrap();
        assert_eq!(again.blocks, list.blocks);
    }

    #[test]
    fn block_errors_name_the_line() {
        let text = "# q=2 n=4 k=3\n1,2,4\n3,1,2\n";
        let err = parse_blocks(text, Path::new("d.blocks")).unwrap_err();
        assert!(err.to_string().starts_with("d.blocks:3:"), "{err}");
        let err = parse_blocks("1,2\n", Path::new("d")).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn matrices_round_trip() {
        let text = "# q=2 n=2\n0 1\n1 0\n\n1 1\n0 1\n";
        let (q, n, mats) = parse_matrices(text, Path::new("g")).unwrap();
        assert_eq!((q.get(), n, mats.len()), (2, 2, 2));
        let (_, _, again) = parse_matrices(&format_matrices(q, n, &mats), Path::new("g")).unwrap();
        assert_eq!(again, mats);
    }

    #[test]
    fn matrix_entry_out_of_field() {
        let err = parse_matrices("# q=2 n=1\n2\n", Path::new("g")).unwrap_err();
        assert!(err.to_string().contains("g:2"));
    }
}
