//! Text formats for codes (`LRCMAT v1`) and configuration certificates
//! (`LRCCFG v1`), plus serde records used for the JSON mirrors.
//!
//! ```text
//! LRCMAT v1
//! q 2 3 11
//! n 12 k 6 r 3
//! H 6 12
//! 1 1 1 1 0 0 0 0 0 0 0 0
//! ...
//! groups 3
//! 0 1 2 3
//! ...
//! ```
//!
//! Certificates list one group per line. Points are comma-separated
//! coordinates; a (7, 2) line is written as its two basis vectors followed by
//! its three marked points:
//!
//! ```text
//! LRCCFG v1
//! family d7r2
//! q 2 2 7
//! lines 1
//! 1,0,0,0 0,1,0,0 | 1,0,0,0 0,1,0,0 1,1,0,0
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Family;
use crate::constructions::{D6R3Config, D7R2Config};
use crate::galois::Field;
use crate::linalg::Matrix;
use crate::lrc::LrcCode;
use crate::projgeom::{ProjPoint, ProjSpace};
use crate::search::Config;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-blank line with its 1-based number.
    fn next(&mut self) -> Result<(usize, &'a str), FormatError> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            if !l.trim().is_empty() {
                return Ok((i + 1, l.trim()));
            }
        }
        err(self.last + 1, "unexpected end of file")
    }

    fn finish(&mut self) -> Result<(), FormatError> {
        match self.inner.by_ref().find(|(_, l)| !l.trim().is_empty()) {
            Some((i, _)) => err(i + 1, "trailing content"),
            None => Ok(()),
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse().or_else(|_| err(line, format!("invalid {what} {tok:?}")))
}

/// Parses `key v1 [key2 v2 …]` with exactly the given keys.
fn keyed<T: std::str::FromStr>(line: usize, text: &str, keys: &[&str]) -> Result<Vec<T>, FormatError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 2 * keys.len() {
        return err(
            line,
            format!("expected `{}`", keys.iter().map(|k| format!("{k} <{k}>")).collect::<Vec<_>>().join(" ")),
        );
    }
    keys.iter()
        .enumerate()
        .map(|(i, k)| {
            if toks[2 * i] != *k {
                return err(line, format!("expected keyword {k:?}, found {:?}", toks[2 * i]));
            }
            parse_num(line, toks[2 * i + 1], k)
        })
        .collect()
}

fn field_header(f: &Field) -> String {
    format!("q {} {} {}", f.characteristic(), f.degree(), f.modulus_code())
}

fn parse_field(line: usize, text: &str) -> Result<Field, FormatError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "q" {
        return err(line, "expected `q <p> <m> <modulus-int>`");
    }
    let p = parse_num(line, toks[1], "characteristic")?;
    let m = parse_num(line, toks[2], "degree")?;
    let modulus = parse_num(line, toks[3], "modulus")?;
    Field::from_header(p, m, modulus).or_else(|e| err(line, e.to_string()))
}

fn expect_magic(lines: &mut Lines, magic: &str) -> Result<(), FormatError> {
    let (n, l) = lines.next()?;
    if l != magic {
        return err(n, format!("expected {magic:?}"));
    }
    Ok(())
}

pub fn write_lrcmat(code: &LrcCode) -> String {
    let h = code.parity_check();
    let mut s = String::new();
    writeln!(s, "LRCMAT v1").unwrap();
    writeln!(s, "{}", field_header(code.field())).unwrap();
    writeln!(s, "n {} k {} r {}", code.n(), code.k(), code.r()).unwrap();
    writeln!(s, "H {} {}", h.rows(), h.cols()).unwrap();
    for r in 0..h.rows() {
        writeln!(s, "{}", join(h.row(r))).unwrap();
    }
    writeln!(s, "groups {}", code.ell()).unwrap();
    for g in code.repair_groups() {
        writeln!(s, "{}", join(g)).unwrap();
    }
    s
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_row<T: std::str::FromStr>(line: usize, text: &str, len: usize, what: &str) -> Result<Vec<T>, FormatError> {
    let row: Vec<T> = text.split_whitespace().map(|t| parse_num(line, t, what)).collect::<Result<_, _>>()?;
    if row.len() != len {
        return err(line, format!("expected {len} entries, found {}", row.len()));
    }
    Ok(row)
}

/// Reads an `LRCMAT v1` file, recomputing k from H and checking it against
/// the header.
pub fn read_lrcmat(text: &str) -> Result<LrcCode, FormatError> {
    let mut lines = Lines::new(text);
    expect_magic(&mut lines, "LRCMAT v1")?;
    let (ln, l) = lines.next()?;
    let field = parse_field(ln, l)?;
    let (nk_line, l) = lines.next()?;
    let nkr: Vec<usize> = keyed(nk_line, l, &["n", "k", "r"])?;
    let (ln, l) = lines.next()?;
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "H" {
        return err(ln, "expected `H <rows> <cols>`");
    }
    let dims: [usize; 2] = [parse_num(ln, toks[1], "row count")?, parse_num(ln, toks[2], "column count")?];
    let (rows, cols) = (dims[0], dims[1]);
    if cols != nkr[0] {
        return err(ln, format!("H has {cols} columns but n = {}", nkr[0]));
    }
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, l) = lines.next()?;
        let row: Vec<u32> = parse_row(ln, l, cols, "element code")?;
        if let Some(bad) = row.iter().find(|&&x| !field.contains(x)) {
            return err(ln, format!("element code {bad} is outside GF({})", field.order()));
        }
        data.push(row);
    }
    let h = Matrix::from_rows(&field, &data).or_else(|e| err(ln, e.to_string()))?;
    let (ln, l) = lines.next()?;
    let ell: usize = keyed(ln, l, &["groups"])?[0];
    let mut groups = Vec::with_capacity(ell);
    for _ in 0..ell {
        let (ln, l) = lines.next()?;
        let g: Vec<usize> = parse_row(ln, l, nkr[2] + 1, "column index")?;
        groups.push(g);
    }
    lines.finish()?;
    let code = LrcCode::from_parts(h, groups, nkr[2]).or_else(|e| err(ln, e.to_string()))?;
    if code.k() != nkr[1] {
        return err(nk_line, format!("header says k = {} but H gives k = {}", nkr[1], code.k()));
    }
    Ok(code)
}

fn point_text(p: &[u32]) -> String {
    p.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_vector(line: usize, tok: &str, len: usize) -> Result<Vec<u32>, FormatError> {
    let v: Vec<u32> = tok.split(',').map(|t| parse_num(line, t, "coordinate")).collect::<Result<_, _>>()?;
    if v.len() != len {
        return err(line, format!("point {tok:?} has {} coordinates, expected {len}", v.len()));
    }
    Ok(v)
}

fn parse_point(space: &ProjSpace, line: usize, tok: &str) -> Result<ProjPoint, FormatError> {
    let v = parse_vector(line, tok, space.dim() + 1)?;
    space.canonical(&v).or_else(|e| err(line, e.to_string()))
}

pub fn write_config(cfg: &Config) -> String {
    let mut s = String::new();
    writeln!(s, "LRCCFG v1").unwrap();
    match cfg {
        Config::D6R3(c) => {
            writeln!(s, "family d6r3\n{}\ngroups {}", field_header(c.field()), c.ell()).unwrap();
            for g in c.groups() {
                let pts: Vec<String> = g.iter().map(|p| point_text(p.coords())).collect();
                writeln!(s, "{}", pts.join(" ")).unwrap();
            }
        }
        Config::D7R2(c) => {
            writeln!(s, "family d7r2\n{}\nlines {}", field_header(c.field()), c.ell()).unwrap();
            for (l, m) in c.lines().iter().zip(c.marks()) {
                let [b1, b2] = l.basis();
                let marks: Vec<String> = m.iter().map(|p| point_text(p.coords())).collect();
                writeln!(s, "{} {} | {}", point_text(b1), point_text(b2), marks.join(" ")).unwrap();
            }
        }
    }
    s
}

/// Reads an `LRCCFG v1` certificate. The configuration is parsed, not
/// verified; run the family verifier on the result.
pub fn read_config(text: &str) -> Result<Config, FormatError> {
    let mut lines = Lines::new(text);
    expect_magic(&mut lines, "LRCCFG v1")?;
    let (ln, l) = lines.next()?;
    let family: Family = match l.strip_prefix("family ") {
        Some(name) => name.trim().parse().or_else(|e: crate::bounds::BoundsError| err(ln, e.to_string()))?,
        None => return err(ln, "expected `family <d6r3|d7r2>`"),
    };
    let (ln, l) = lines.next()?;
    let field = parse_field(ln, l)?;
    let out = match family {
        Family::D6R3 => {
            let plane = ProjSpace::new(&field, 2).or_else(|e| err(ln, e.to_string()))?;
            let (ln, l) = lines.next()?;
            let ell: usize = keyed(ln, l, &["groups"])?[0];
            let mut groups = Vec::with_capacity(ell);
            for _ in 0..ell {
                let (ln, l) = lines.next()?;
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 4 {
                    return err(ln, format!("expected 4 points, found {}", toks.len()));
                }
                groups.push([
                    parse_point(&plane, ln, toks[0])?,
                    parse_point(&plane, ln, toks[1])?,
                    parse_point(&plane, ln, toks[2])?,
                    parse_point(&plane, ln, toks[3])?,
                ]);
            }
            Config::D6R3(D6R3Config::new(&field, groups))
        }
        Family::D7R2 => {
            let space = ProjSpace::new(&field, 3).or_else(|e| err(ln, e.to_string()))?;
            let (ln, l) = lines.next()?;
            let ell: usize = keyed(ln, l, &["lines"])?[0];
            let (mut ls, mut marks) = (Vec::with_capacity(ell), Vec::with_capacity(ell));
            for _ in 0..ell {
                let (ln, l) = lines.next()?;
                let Some((basis, marked)) = l.split_once('|') else {
                    return err(ln, "expected `<basis> <basis> | <mark> <mark> <mark>`");
                };
                let b: Vec<&str> = basis.split_whitespace().collect();
                let m: Vec<&str> = marked.split_whitespace().collect();
                if b.len() != 2 || m.len() != 3 {
                    return err(ln, "expected 2 basis vectors and 3 marked points");
                }
                let (b1, b2) = (parse_vector(ln, b[0], 4)?, parse_vector(ln, b[1], 4)?);
                ls.push(space.line_from_vectors(&b1, &b2).or_else(|e| err(ln, e.to_string()))?);
                marks.push([
                    parse_point(&space, ln, m[0])?,
                    parse_point(&space, ln, m[1])?,
                    parse_point(&space, ln, m[2])?,
                ]);
            }
            Config::D7R2(D7R2Config::new(&field, ls, marks))
        }
    };
    lines.finish()?;
    Ok(out)
}

/// JSON mirror of an `LRCMAT v1` file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrcMatRecord {
    pub p: u32,
    pub m: u32,
    pub modulus: u64,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub d: Option<usize>,
    pub h: Vec<Vec<u32>>,
    pub groups: Vec<Vec<usize>>,
}

impl LrcMatRecord {
    pub fn from_code(code: &LrcCode) -> Self {
        let f = code.field();
        LrcMatRecord {
            p: f.characteristic(),
            m: f.degree(),
            modulus: f.modulus_code(),
            n: code.n(),
            k: code.k(),
            r: code.r(),
            d: code.verified_d().and_then(|c| c.d),
            h: code.parity_check().to_rows(),
            groups: code.repair_groups().to_vec(),
        }
    }

    /// Rebuilds the code, recomputing k and checking it against the record.
    pub fn to_code(&self) -> Result<LrcCode, FormatError> {
        let field = Field::from_header(self.p, self.m, self.modulus).or_else(|e| err(0, e.to_string()))?;
        if let Some(bad) = self.h.iter().flatten().find(|&&x| !field.contains(x)) {
            return err(0, format!("element code {bad} is outside GF({})", field.order()));
        }
        let h = Matrix::from_rows(&field, &self.h).or_else(|e| err(0, e.to_string()))?;
        if h.cols() != self.n {
            return err(0, format!("H has {} columns but n = {}", h.cols(), self.n));
        }
        let code = LrcCode::from_parts(h, self.groups.clone(), self.r).or_else(|e| err(0, e.to_string()))?;
        if code.k() != self.k {
            return err(0, format!("record says k = {} but H gives k = {}", self.k, code.k()));
        }
        Ok(code)
    }
}

/// JSON mirror of an `LRCCFG v1` certificate. Points and basis vectors are
/// coordinate lists; for d6r3 `groups` holds the points and `lines` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub family: Family,
    pub p: u32,
    pub m: u32,
    pub modulus: u64,
    pub groups: Vec<Vec<Vec<u32>>>,
    pub lines: Vec<[Vec<u32>; 2]>,
}

impl ConfigRecord {
    pub fn from_config(cfg: &Config) -> Self {
        let coords = |ps: &[ProjPoint]| ps.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>();
        let (field, groups, lines) = match cfg {
            Config::D6R3(c) => (c.field(), c.groups().iter().map(|g| coords(g)).collect(), Vec::new()),
            Config::D7R2(c) => (
                c.field(),
                c.marks().iter().map(|m| coords(m)).collect(),
                c.lines().iter().map(|l| l.basis().clone()).collect(),
            ),
        };
        ConfigRecord {
            family: cfg.family(),
            p: field.characteristic(),
            m: field.degree(),
            modulus: field.modulus_code(),
            groups,
            lines,
        }
    }

    pub fn to_config(&self) -> Result<Config, FormatError> {
        let field = Field::from_header(self.p, self.m, self.modulus).or_else(|e| err(0, e.to_string()))?;
        let dim = match self.family {
            Family::D6R3 => 2,
            Family::D7R2 => 3,
        };
        let space = ProjSpace::new(&field, dim).or_else(|e| err(0, e.to_string()))?;
        let point = |v: &Vec<u32>| space.canonical(v).or_else(|e| err(0, e.to_string()));
        let points = |g: &Vec<Vec<u32>>, len: usize| -> Result<Vec<ProjPoint>, FormatError> {
            if g.len() != len {
                return err(0, format!("expected {len} points per group, found {}", g.len()));
            }
            g.iter().map(point).collect()
        };
        Ok(match self.family {
            Family::D6R3 => {
                let groups = self
                    .groups
                    .iter()
                    .map(|g| points(g, 4).map(|p| [p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()]))
                    .collect::<Result<_, _>>()?;
                Config::D6R3(D6R3Config::new(&field, groups))
            }
            Family::D7R2 => {
                if self.lines.len() != self.groups.len() {
                    return err(0, "lines and marked triples differ in number");
                }
                let lines = self
                    .lines
                    .iter()
                    .map(|[a, b]| space.line_from_vectors(a, b).or_else(|e| err(0, e.to_string())))
                    .collect::<Result<_, _>>()?;
                let marks = self
                    .groups
                    .iter()
                    .map(|g| points(g, 3).map(|p| [p[0].clone(), p[1].clone(), p[2].clone()]))
                    .collect::<Result<_, _>>()?;
                Config::D7R2(D7R2Config::new(&field, lines, marks))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::greedy_spread_d7r2;
    use crate::lrc::assemble_h_d6r3;

    fn small_code() -> LrcCode {
        let f = Field::with_order(8).unwrap();
        assemble_h_d6r3(
            &f,
            &[[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], [vec![1, 1, 1], vec![1, 2, 4], vec![1, 3, 5]]],
        )
        .unwrap()
    }

    #[test]
    fn lrcmat_round_trip() {
        let code = small_code();
        let text = write_lrcmat(&code);
        assert!(text.starts_with("LRCMAT v1\nq 2 3 11\nn 8 k 3 r 3\nH 5 8\n"));
        let back = read_lrcmat(&text).unwrap();
        assert_eq!(back, code);
        assert_eq!(write_lrcmat(&back), text);
    }

    #[test]
    fn lrcmat_errors_name_the_line() {
        let text = write_lrcmat(&small_code());
        let bad = text.replacen("n 8 k 3", "n 8 k 2", 1);
        assert_eq!(read_lrcmat(&bad).unwrap_err().line, 3);
        let bad = text.replacen("1 1 1 1 0 0 0 0", "1 1 1 9 0 0 0 0", 1);
        let e = read_lrcmat(&bad).unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.message.contains("outside GF(8)"));
        let e = read_lrcmat("LRCMAT v2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let truncated: String = text.lines().take(6).collect::<Vec<_>>().join("\n");
        assert!(read_lrcmat(&truncated).unwrap_err().message.contains("end of file"));
    }

    #[test]
    fn config_round_trip() {
        let f = Field::with_order(4).unwrap();
        let (cfg, _) = greedy_spread_d7r2(&f).unwrap();
        let c = Config::D7R2(cfg);
        let text = write_config(&c);
        assert_eq!(read_config(&text).unwrap(), c);

        let plane = ProjSpace::new(&f, 2).unwrap();
        let g = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].map(|v| plane.canonical(&v).unwrap());
        let c = Config::D6R3(D6R3Config::new(&f, vec![g]));
        let text = write_config(&c);
        assert_eq!(text, "LRCCFG v1\nfamily d6r3\nq 2 2 7\ngroups 1\n1,0,0 0,1,0 0,0,1 1,1,1\n");
        assert_eq!(read_config(&text).unwrap(), c);
        assert_eq!(ConfigRecord::from_config(&c).to_config().unwrap(), c);
    }

    #[test]
    fn record_round_trip() {
        let code = small_code();
        assert_eq!(LrcMatRecord::from_code(&code).to_code().unwrap(), code);
    }
}
