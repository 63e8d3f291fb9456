//! Published designs, representative lists and generator matrices, embedded
//! from the repository's `fixtures/` directory.

use std::path::Path;

use crate::designs::Design;
use crate::error::{Error, Result};
use crate::gfmat::text::{parse_blocks, parse_matrices};
use crate::orbits::GroupGens;
use crate::Subspace;

macro_rules! fixture_files {
    ($($name:literal => $file:literal),* $(,)?) => {
        /// `(name, file name, contents)` of every embedded fixture.
        pub const FILES: &[(&str, &str, &str)] = &[
            $(($name, $file, include_str!(concat!("../../../fixtures/", $file)))),*
        ];
    };
}

fixture_files! {
    "p2_2_3_7" => "p2_2_3_7.blocks",
    "reps_n8" => "reps_n8.reps",
    "reps_n11" => "reps_n11.reps",
    "reps_n12" => "reps_n12.reps",
    "reps_n14" => "reps_n14.reps",
    "gen_n7" => "gen_n7.gens",
    "gen_n8" => "gen_n8.gens",
    "gen_n11" => "gen_n11.gens",
    "gen_n12" => "gen_n12.gens",
    "gen_n14" => "gen_n14.gens",
    "example_g4" => "example_g4.gens",
    "example_display" => "example_display.perm",
}

/// A parsed fixture.
#[derive(Clone, Debug)]
pub enum Fixture {
    Design(Design),
    Reps(Vec<Subspace>),
    Gens(GroupGens),
    Display(DisplayOrder),
}

/// Positions of the worked example's rows and columns in the printed
/// matrices: entry `i` is the canonical index shown at position `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayOrder {
    pub h_rows: Vec<usize>,
    pub h_cols: Vec<usize>,
    pub g_rows: Vec<usize>,
    pub g_cols: Vec<usize>,
}

fn lookup(name: &str) -> Result<(&'static str, &'static str)> {
    FILES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(_, file, text)| (file, text))
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

pub fn load_fixture(name: &str) -> Result<Fixture> {
    let (file, text) = lookup(name)?;
    let path = Path::new("fixtures").join(file);
    match Path::new(file).extension().and_then(|e| e.to_str()) {
        Some("blocks") => {
            let list = parse_blocks(text, &path)?;
            let t = list.header.t.unwrap_or(2);
            Ok(Fixture::Design(Design::new(list.q, list.n, t, list.k, list.blocks)?))
        }
        Some("reps") => Ok(Fixture::Reps(parse_blocks(text, &path)?.blocks)),
        Some("gens") => {
            let (q, n, mats) = parse_matrices(text, &path)?;
            Ok(Fixture::Gens(GroupGens::new(q, n, mats)?))
        }
        _ => Ok(Fixture::Display(parse_display(text, &path)?)),
    }
}

fn parse_display(text: &str, path: &Path) -> Result<DisplayOrder> {
    let mut out = DisplayOrder {
        h_rows: Vec::new(),
        h_cols: Vec::new(),
        g_rows: Vec::new(),
        g_cols: Vec::new(),
    };
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap_or_default();
        let values = tokens
            .map(|tok| tok.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        let slot = match key {
            "h_rows" => &mut out.h_rows,
            "h_cols" => &mut out.h_cols,
            "g_rows" => &mut out.g_rows,
            "g_cols" => &mut out.g_cols,
            other => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("unknown key `{other}`"),
                })
            }
        };
        *slot = values;
    }
    Ok(out)
}

pub fn design(name: &str) -> Result<Design> {
    match load_fixture(name)? {
        Fixture::Design(d) => Ok(d),
        _ => Err(Error::mismatch(format!("fixture `{name}` is not a design"))),
    }
}

pub fn reps(name: &str) -> Result<Vec<Subspace>> {
    match load_fixture(name)? {
        Fixture::Reps(r) => Ok(r),
        _ => Err(Error::mismatch(format!("fixture `{name}` is not a representative list"))),
    }
}

pub fn gens(name: &str) -> Result<GroupGens> {
    match load_fixture(name)? {
        Fixture::Gens(g) => Ok(g),
        _ => Err(Error::mismatch(format!("fixture `{name}` is not a generator list"))),
    }
}

pub fn display_order() -> Result<DisplayOrder> {
    match load_fixture("example_display")? {
        Fixture::Display(d) => Ok(d),
        _ => unreachable!("example_display is a permutation file"),
    }
}

/// Known bounds on the largest binary packing with `t = 2`, `k = 3`:
/// `(n, lower, upper)`. The `n = 9` upper value was published separately
/// and equals the packing bound.
pub const KNOWN_BOUNDS: &[(u32, u64, u64)] = &[
    (6, 77, 93),
    (7, 304, 381),
    (8, 1275, 1542),
    (9, 5694, 6205),
    (10, 21483, 24893),
    (11, 79833, 99718),
    (12, 315315, 399165),
    (13, 1597245, 1597245),
    (14, 4177665, 6390150),
];

/// A published design: `(n, previous lower bound, size, group description,
/// listed group order)`.
pub struct Record {
    pub n: u32,
    pub previous: u64,
    pub size: u64,
    pub group: &'static str,
    pub listed_order: u64,
}

pub const RECORDS: &[Record] = &[
    Record { n: 7, previous: 304, size: 329, group: "cyclic", listed_order: 15 },
    Record { n: 8, previous: 1275, size: 1312, group: "cyclic", listed_order: 217 },
    Record { n: 11, previous: 79833, size: 92411, group: "NS(10,2)x1", listed_order: 22517 },
    Record { n: 12, previous: 315315, size: 385515, group: "NS(12,2)", listed_order: 49140 },
    Record { n: 14, previous: 4177665, size: 5996178, group: "NS(14,2)", listed_order: 229362 },
];

/// The worked example over `GL(4,2)` as printed, in display order.
pub mod example {
    pub const A_H: [[u32; 13]; 7] = [
        [3, 0, 3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 3, 0, 3, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 1, 0, 1, 2, 0, 1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0, 1, 0, 2, 1, 1, 0, 0, 0],
        [1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 0],
        [0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 1, 3, 0, 0, 0, 0, 3, 0, 0],
    ];
    pub const A_H_SIZES: [u64; 13] = [3, 3, 3, 3, 1, 3, 3, 3, 3, 3, 3, 3, 1];
    pub const A_PRIME: [[u32; 9]; 7] = [
        [3, 3, 1, 0, 0, 0, 0, 0, 0],
        [3, 3, 1, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 1, 2, 2, 0, 0, 0],
        [1, 1, 0, 1, 2, 2, 0, 0, 0],
        [2, 0, 0, 0, 0, 2, 1, 2, 0],
        [0, 2, 0, 0, 2, 0, 1, 1, 1],
        [0, 0, 1, 3, 0, 0, 3, 0, 0],
    ];
    pub const A_G: [[u32; 9]; 5] = [
        [3, 3, 1, 0, 0, 0, 0, 0, 0],
        [1, 1, 0, 1, 2, 2, 0, 0, 0],
        [2, 0, 0, 0, 0, 2, 1, 2, 0],
        [0, 2, 0, 0, 2, 0, 1, 1, 1],
        [0, 0, 1, 3, 0, 0, 3, 0, 0],
    ];
    pub const A_G_SIZES: [u64; 9] = [6, 6, 1, 3, 6, 6, 3, 3, 1];
    pub const X: &str = "001000001";
    pub const Y: &str = "0000100000001";
    pub const Z: &str = "0000100001001";
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        for (name, _, _) in FILES {
            load_fixture(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(matches!(load_fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn sizes() {
        assert_eq!(design("p2_2_3_7").unwrap().len(), 329);
        assert_eq!(reps("reps_n8").unwrap().len(), 196);
        assert_eq!(reps("reps_n11").unwrap().len(), 11);
        assert_eq!(reps("reps_n12").unwrap().len(), 10);
        assert_eq!(reps("reps_n14").unwrap().len(), 28);
        assert_eq!(gens("gen_n11").unwrap().generators().len(), 2);
        let d = display_order().unwrap();
        assert_eq!((d.h_rows.len(), d.h_cols.len(), d.g_rows.len(), d.g_cols.len()), (7, 13, 5, 9));
    }
}
