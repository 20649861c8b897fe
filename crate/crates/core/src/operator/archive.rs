//! Binary container for learned operators.
//!
//! Layout: the 8-byte magic `HELMOP01`, a little-endian `u64` header length,
//! a JSON header, then `W` (`M×N`) and optionally `A` (`Q×N`) as row-major
//! little-endian `f64` pairs (re, im).

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::learned::{BindTimings, LearnTimings, LearnedOperator, QueryOperator};
use crate::error::{Error, Result};
use crate::geometry::{PointRole, PointSet};
use crate::io::write_atomic;
use crate::lintik::ComplexMatrix;
use crate::point::Point2;

const MAGIC: &[u8; 8] = b"HELMOP01";
const MAX_HEADER: u64 = 1 << 31;

#[derive(Serialize, Deserialize)]
struct Header {
    k: f64,
    alpha: f64,
    m: usize,
    n: usize,
    #[serde(default)]
    q: usize,
    learn: LearnTimings,
    #[serde(default)]
    bind: Option<BindTimings>,
    sources: Vec<[f64; 2]>,
    collocation: Vec<[f64; 3]>,
    #[serde(default)]
    queries: Vec<[f64; 2]>,
}

/// A learned operator, optionally bound to a query set.
#[derive(Clone, Debug)]
pub struct OperatorArchive {
    pub learned: LearnedOperator,
    pub bound: Option<QueryOperator>,
}

impl OperatorArchive {
    pub fn write_to(&self, w: &mut dyn Write) -> Result<()> {
        let op = &self.learned;
        let coll = op.collocation();
        let weights = coll.weights().map(|w| w.to_vec()).unwrap_or_else(|| vec![0.0; coll.len()]);
        let header = Header {
            k: op.k(),
            alpha: op.alpha(),
            m: op.source_count(),
            n: op.collocation_count(),
            q: self.bound.as_ref().map_or(0, |b| b.queries().len()),
            learn: op.timings(),
            bind: self.bound.as_ref().map(|b| b.timings()),
            sources: op.sources().points().iter().map(|p| [p.x, p.y]).collect(),
            collocation: coll.points().iter().zip(&weights).map(|(p, w)| [p.x, p.y, *w]).collect(),
            queries: self
                .bound
                .as_ref()
                .map(|b| b.queries().points().iter().map(|p| [p.x, p.y]).collect())
                .unwrap_or_default(),
        };
        let json = serde_json::to_vec(&header)?;
        let io = |e| Error::io("<operator archive>", e);
        w.write_all(MAGIC).map_err(io)?;
        w.write_all(&(json.len() as u64).to_le_bytes()).map_err(io)?;
        w.write_all(&json).map_err(io)?;
        write_entries(w, op.matrix().as_slice()).map_err(io)?;
        if let Some(b) = &self.bound {
            write_entries(w, b.matrix().as_slice()).map_err(io)?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut dyn Read) -> Result<Self> {
        let io = |e| Error::io("<operator archive>", e);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != MAGIC {
            return Err(Error::Archive("bad magic".into()));
        }
        let mut len = [0u8; 8];
        r.read_exact(&mut len).map_err(io)?;
        let len = u64::from_le_bytes(len);
        if len > MAX_HEADER {
            return Err(Error::Archive(format!("header length {len} is implausible")));
        }
        let mut json = vec![0u8; len as usize];
        r.read_exact(&mut json).map_err(io)?;
        let h: Header = serde_json::from_slice(&json)?;
        if h.sources.len() != h.m || h.collocation.len() != h.n || h.queries.len() != h.q {
            return Err(Error::Archive("point counts disagree with dimensions".into()));
        }
        if h.m == 0 || h.n == 0 {
            return Err(Error::Archive("empty operator".into()));
        }

        let sources = PointSet::new(
            PointRole::Source,
            h.sources.iter().map(|p| Point2::new(p[0], p[1])).collect(),
        )?;
        let coll_pts = h.collocation.iter().map(|p| Point2::new(p[0], p[1])).collect();
        let weights: Vec<f64> = h.collocation.iter().map(|p| p[2]).collect();
        let collocation = if weights.iter().all(|w| *w > 0.0) {
            PointSet::with_weights(PointRole::Collocation, coll_pts, weights)?
        } else {
            PointSet::new(PointRole::Collocation, coll_pts)?
        };
        let w = ComplexMatrix::new(h.m, h.n, read_entries(r, h.m * h.n)?)?;
        let learned = LearnedOperator::from_parts(w, sources, collocation, h.k, h.alpha, h.learn)?;

        let bound = if h.q > 0 {
            let queries = PointSet::new(
                PointRole::Query,
                h.queries.iter().map(|p| Point2::new(p[0], p[1])).collect(),
            )?;
            let a = ComplexMatrix::new(h.q, h.n, read_entries(r, h.q * h.n)?)?;
            Some(QueryOperator::from_parts(a, queries, h.bind.unwrap_or_default())?)
        } else {
            None
        };
        let mut rest = [0u8; 1];
        if r.read(&mut rest).map_err(io)? != 0 {
            return Err(Error::Archive("trailing bytes after payload".into()));
        }
        Ok(Self { learned, bound })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, |w| self.write_to(w))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(&mut BufReader::new(file))
    }
}

fn write_entries(w: &mut dyn Write, data: &[Complex64]) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(16 * 4096);
    for chunk in data.chunks(4096) {
        buf.clear();
        for z in chunk {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_entries(r: &mut dyn Read, count: usize) -> Result<Vec<Complex64>> {
    let mut bytes = vec![0u8; count * 16];
    r.read_exact(&mut bytes)
        .map_err(|_| Error::Archive(format!("payload truncated (expected {count} entries)")))?;
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}
