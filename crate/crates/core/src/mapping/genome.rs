use std::io::{BufRead, Write};
use std::path::Path;

use ndarray::Array2;
use rand::Rng;

use super::{MappingError, Result};

/// Integer encoding of a mapping matrix: `genes[j] = i + 1` maps target
/// unit `i` onto source column `j`; `0` leaves column `j` empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genome {
    genes: Vec<u32>,
    p: usize,
}

impl Genome {
    pub fn new(genes: Vec<u32>, p: usize) -> Result<Self> {
        if let Some((index, &value)) = genes.iter().enumerate().find(|(_, &g)| g as usize > p) {
            return Err(MappingError::OutOfRange { index, value, max: p });
        }
        Ok(Self { genes, p })
    }

    /// Column `j` takes target unit `j` where one exists.
    pub fn identity(p: usize, q: usize) -> Self {
        let genes = (0..q).map(|j| if j < p { j as u32 + 1 } else { 0 }).collect();
        Self { genes, p }
    }

    /// Every gene uniform over `0..=p`.
    pub fn random<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> Self {
        let genes = (0..q).map(|_| rng.random_range(0..=p as u32)).collect();
        Self { genes, p }
    }

    pub fn genes(&self) -> &[u32] {
        &self.genes
    }

    pub(crate) fn genes_mut(&mut self) -> &mut [u32] {
        &mut self.genes
    }

    /// Target width.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Source width.
    pub fn q(&self) -> usize {
        self.genes.len()
    }

    /// `[self | other]` with `other`'s genes shifted past this genome's rows,
    /// i.e. the genome of the block-diagonal matrix.
    pub fn block_concat(&self, other: &Genome) -> Genome {
        let offset = self.p as u32;
        let genes = self
            .genes
            .iter()
            .copied()
            .chain(other.genes.iter().map(|&g| if g == 0 { 0 } else { g + offset }))
            .collect();
        Genome {
            genes,
            p: self.p + other.p,
        }
    }

    /// Column gather equivalent to `T × M`: output column `j` is target
    /// column `genes[j] − 1`, or zero. Works for any element type.
    pub fn gather<T: Copy + Default>(&self, t: &Array2<T>) -> Array2<T> {
        assert_eq!(t.ncols(), self.p, "target width must equal genome p");
        let mut out = Array2::from_elem((t.nrows(), self.q()), T::default());
        for (src_row, mut dst_row) in t.rows().into_iter().zip(out.rows_mut()) {
            for (j, &g) in self.genes.iter().enumerate() {
                if g > 0 {
                    dst_row[j] = src_row[g as usize - 1];
                }
            }
        }
        out
    }

    pub fn to_line(&self) -> String {
        self.genes.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn parse_line(line: &str, p: usize) -> Result<Self> {
        let genes = line
            .split(',')
            .map(|tok| {
                tok.trim().parse::<u32>().map_err(|e| MappingError::Parse {
                    line: 0,
                    reason: format!("{tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Genome::new(genes, p)
    }
}

/// One comma-separated genome per line.
pub fn write_genomes<W: Write>(mut w: W, genomes: &[Genome]) -> Result<()> {
    for g in genomes {
        writeln!(w, "{}", g.to_line())?;
    }
    Ok(())
}

pub fn read_genomes<R: BufRead>(r: R, p: usize) -> Result<Vec<Genome>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(Genome::parse_line(&line, p).map_err(|e| match e {
            MappingError::Parse { reason, .. } => MappingError::Parse { line: i + 1, reason },
            other => other,
        })?);
    }
    Ok(out)
}

/// Reads a genome checkpoint file.
pub fn read_genome_file(path: &Path, p: usize) -> Result<Vec<Genome>> {
    read_genomes(std::io::BufReader::new(std::fs::File::open(path)?), p)
}
