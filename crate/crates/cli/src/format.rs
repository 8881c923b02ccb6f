//! Line-oriented text formats for fans, cobordisms and chart ideals.
//!
//! ```text
//! # comment
//! rank 3
//! ray 1 0 0
//! ray 0 1 0
//! cone 0 1
//! action 0 0 1
//! ```
//!
//! Ray indices are zero-based and refer to the `ray` lines of the same file.
//! Listing maximal cones suffices; faces are added automatically. An ideal
//! file uses the same `rank` and `ray` lines followed by blocks of one
//! `chart i j ...` line and its `gen m_1 ... m_n` exponent lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use torific_core::fans::{Cone, Fan, FanError};
use torific_core::lattice::LatticeVector;
use torific_core::monomials::{MonomialError, MonomialIdeal};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `rank` line")]
    MissingRank,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

/// A fan as written in a file, optionally with an action vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    pub cones: Vec<Vec<usize>>,
    pub action: Option<LatticeVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFile {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    /// `(ray indices of the chart, exponent vectors)`, in file order.
    pub charts: Vec<(Vec<usize>, Vec<LatticeVector>)>,
}

struct Lines<'a> {
    items: Vec<(usize, &'a str, Vec<&'a str>)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let content = raw.split('#').next().unwrap_or("").trim();
                let mut words = content.split_whitespace();
                let keyword = words.next()?;
                Some((i + 1, keyword, words.collect()))
            })
            .collect();
        Lines { items }
    }
}

fn integers(line: usize, words: &[&str]) -> Result<Vec<BigInt>, ParseError> {
    words
        .iter()
        .map(|w| w.parse::<BigInt>().map_err(|_| syntax(line, format!("`{w}` is not an integer"))))
        .collect()
}

fn vector(line: usize, rank: usize, words: &[&str]) -> Result<LatticeVector, ParseError> {
    let entries = integers(line, words)?;
    if entries.len() != rank {
        return Err(syntax(line, format!("expected {rank} entries, found {}", entries.len())));
    }
    Ok(LatticeVector::new(entries))
}

fn indices(line: usize, count: usize, words: &[&str]) -> Result<Vec<usize>, ParseError> {
    words
        .iter()
        .map(|w| {
            let i: usize = w.parse().map_err(|_| syntax(line, format!("`{w}` is not a ray index")))?;
            if i >= count {
                return Err(syntax(line, format!("ray index {i} out of range (have {count} rays)")));
            }
            Ok(i)
        })
        .collect()
}

fn parse_rank(line: usize, words: &[&str]) -> Result<usize, ParseError> {
    match words {
        [w] => match w.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(syntax(line, format!("rank must be a positive integer, found `{w}`"))),
        },
        _ => Err(syntax(line, "expected `rank n`")),
    }
}

fn format_vector(v: &LatticeVector) -> String {
    v.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn format_indices(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

impl FanFile {
    pub fn parse(text: &str) -> Result<FanFile, ParseError> {
        let mut rank = None;
        let mut rays = Vec::new();
        let mut cones = Vec::new();
        let mut action = None;
        for (line, keyword, words) in Lines::new(text).items {
            match (keyword, rank) {
                ("rank", None) => rank = Some(parse_rank(line, &words)?),
                ("rank", Some(_)) => return Err(syntax(line, "duplicate `rank` line")),
                (_, None) => return Err(syntax(line, "`rank` must come first")),
                ("ray", Some(n)) => rays.push(vector(line, n, &words)?),
                ("cone", Some(_)) => cones.push(indices(line, rays.len(), &words)?),
                ("action", Some(n)) => {
                    if action.is_some() {
                        return Err(syntax(line, "duplicate `action` line"));
                    }
                    action = Some(vector(line, n, &words)?);
                }
                (other, _) => return Err(syntax(line, format!("unknown keyword `{other}`"))),
            }
        }
        Ok(FanFile { rank: rank.ok_or(ParseError::MissingRank)?, rays, cones, action })
    }

    /// Canonical form of a fan: rays in fan order, maximal cones as sorted
    /// index lists in cone order.
    pub fn from_fan(fan: &Fan, action: Option<&LatticeVector>) -> FanFile {
        let rays = fan.rays();
        let cones = fan
            .maximal_cones()
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                let mut idx: Vec<usize> =
                    c.rays().iter().map(|r| rays.iter().position(|s| s == r).expect("ray of the fan")).collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        FanFile { rank: fan.rank(), rays, cones, action: action.cloned() }
    }

    pub fn to_fan(&self) -> Result<Fan, FanError> {
        let mut cones = Vec::new();
        for idx in &self.cones {
            cones.push(Cone::new(self.rank, idx.iter().map(|&i| self.rays[i].clone()))?);
        }
        Fan::closure(self.rank, cones)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("rank {}\n", self.rank);
        for r in &self.rays {
            let _ = writeln!(out, "ray {}", format_vector(r));
        }
        for c in &self.cones {
            let _ = writeln!(out, "cone {}", format_indices(c));
        }
        if let Some(a) = &self.action {
            let _ = writeln!(out, "action {}", format_vector(a));
        }
        out
    }
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<IdealFile, ParseError> {
        let mut rank = None;
        let mut rays = Vec::new();
        let mut charts: Vec<(Vec<usize>, Vec<LatticeVector>)> = Vec::new();
        for (line, keyword, words) in Lines::new(text).items {
            match (keyword, rank) {
                ("rank", None) => rank = Some(parse_rank(line, &words)?),
                ("rank", Some(_)) => return Err(syntax(line, "duplicate `rank` line")),
                (_, None) => return Err(syntax(line, "`rank` must come first")),
                ("ray", Some(n)) => {
                    if !charts.is_empty() {
                        return Err(syntax(line, "`ray` lines must precede the charts"));
                    }
                    rays.push(vector(line, n, &words)?);
                }
                ("chart", Some(_)) => charts.push((indices(line, rays.len(), &words)?, Vec::new())),
                ("gen", Some(n)) => {
                    let v = vector(line, n, &words)?;
                    match charts.last_mut() {
                        Some((_, gens)) => gens.push(v),
                        None => return Err(syntax(line, "`gen` before any `chart`")),
                    }
                }
                (other, _) => return Err(syntax(line, format!("unknown keyword `{other}`"))),
            }
        }
        Ok(IdealFile { rank: rank.ok_or(ParseError::MissingRank)?, rays, charts })
    }

    pub fn from_ideals(rank: usize, ideals: &BTreeMap<Cone, MonomialIdeal>) -> IdealFile {
        let mut rays: Vec<LatticeVector> = Vec::new();
        for chart in ideals.keys() {
            for r in chart.rays() {
                if !rays.contains(r) {
                    rays.push(r.clone());
                }
            }
        }
        rays.sort();
        let charts = ideals
            .iter()
            .map(|(chart, ideal)| {
                let mut idx: Vec<usize> =
                    chart.rays().iter().map(|r| rays.iter().position(|s| s == r).expect("collected")).collect();
                idx.sort_unstable();
                (idx, ideal.generators().to_vec())
            })
            .collect();
        IdealFile { rank, rays, charts }
    }

    /// Ideals keyed by chart cone. A chart listed without `gen` lines
    /// carries the zero ideal.
    pub fn to_ideals(&self) -> Result<BTreeMap<Cone, MonomialIdeal>, MonomialError> {
        let mut out = BTreeMap::new();
        for (idx, gens) in &self.charts {
            let chart = Cone::new(self.rank, idx.iter().map(|&i| self.rays[i].clone()))?;
            let ideal = MonomialIdeal::new(&chart, gens.iter().cloned())?;
            out.insert(chart, ideal);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("rank {}\n", self.rank);
        for r in &self.rays {
            let _ = writeln!(out, "ray {}", format_vector(r));
        }
        for (idx, gens) in &self.charts {
            let _ = writeln!(out, "chart {}", format_indices(idx));
            for g in gens {
                let _ = writeln!(out, "gen {}", format_vector(g));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORTHANT: &str = "# the plane orthant\nrank 2\nray 1 0\nray 0 1\ncone 0 1\n";

    #[test]
    fn parses_and_closes_faces() {
        let f = FanFile::parse(ORTHANT).unwrap();
        let fan = f.to_fan().unwrap();
        assert_eq!(fan.len(), 4);
        assert_eq!(f.action, None);
    }

    #[test]
    fn canonical_files_round_trip() {
        let text = "rank 3\nray 0 0 1\nray 0 1 0\nray 1 0 0\nray 1 1 1\ncone 0 1 3\ncone 0 2 3\ncone 1 2 3\naction 1 -2 0\n";
        let f = FanFile::parse(text).unwrap();
        let canonical = FanFile::from_fan(&f.to_fan().unwrap(), f.action.as_ref());
        let again = FanFile::parse(&canonical.to_text()).unwrap();
        assert_eq!(again, canonical);
        assert_eq!(FanFile::from_fan(&again.to_fan().unwrap(), again.action.as_ref()), canonical);
    }

    #[test]
    fn reports_line_numbers() {
        let err = FanFile::parse("rank 2\nray 1 0\nray 0 x\n").unwrap_err();
        assert!(err.to_string().starts_with("line 3:"), "{err}");
        assert!(FanFile::parse("ray 1 0\n").is_err());
        assert!(FanFile::parse("rank 2\nray 1 0\ncone 0 1\n").is_err());
        assert!(matches!(FanFile::parse("# nothing\n"), Err(ParseError::MissingRank)));
        assert!(FanFile::parse("rank 2\nfacet 1 0\n").is_err());
    }

    #[test]
    fn ideal_files_round_trip() {
        let text = "rank 2\nray 1 0\nray 0 1\nchart 0 1\ngen 1 0\ngen 0 1\n";
        let f = IdealFile::parse(text).unwrap();
        let ideals = f.to_ideals().unwrap();
        assert_eq!(ideals.len(), 1);
        let back = IdealFile::from_ideals(2, &ideals);
        assert_eq!(IdealFile::parse(&back.to_text()).unwrap(), back);
        assert_eq!(back.to_ideals().unwrap(), ideals);
        assert!(IdealFile::parse("rank 2\ngen 1 0\n").is_err());
    }
}
