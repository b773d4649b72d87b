use super::{FitnessContext, GaError, GenerationStats, Result, SearchResult};
use crate::mapping::Genome;
use crate::par::{self, Exec};

/// Largest genome space `exhaustive_search` will enumerate.
pub const MAX_EXHAUSTIVE_SPACE: f64 = 1e6;

/// Genome at lexicographic position `index` in a space with `q` genes of radix p+1.
fn nth_genome(mut index: usize, p: usize, q: usize) -> Genome {
    let radix = p + 1;
    let mut genes = vec![0u32; q];
    for gene in genes.iter_mut().rev() {
        *gene = (index % radix) as u32;
        index /= radix;
    }
    Genome::new(genes, p).expect("digits below radix")
}

/// Scores every genome and returns the best, lowest genome on ties.
pub fn exhaustive_search(ctx: &FitnessContext, p: usize, q: usize) -> Result<SearchResult> {
    exhaustive_search_with(ctx, p, q, Exec::default())
}

pub fn exhaustive_search_with(ctx: &FitnessContext, p: usize, q: usize, exec: Exec) -> Result<SearchResult> {
    if p != ctx.p() || q != ctx.q() {
        return Err(GaError::DimensionMismatch(format!(
            "requested {p}x{q}, context is {}x{}",
            ctx.p(),
            ctx.q()
        )));
    }
    let size = ((p + 1) as f64).powi(q as i32);
    if size > MAX_EXHAUSTIVE_SPACE {
        return Err(GaError::SpaceTooLarge { size });
    }
    let n = size as usize;
    let scores = par::map_indexed(exec, n, |i| ctx.score(&nth_genome(i, p, q)));
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    let best_genome = nth_genome(best, p, q);
    let best_fitness = scores[best];
    let mean = scores.iter().sum::<f64>() / n as f64;
    let degree = if p == q {
        crate::mapping::adjustment_degree(&crate::mapping::MappingMatrix::from_genome(&best_genome)).ok()
    } else {
        None
    };
    Ok(SearchResult {
        report_accuracy: ctx.report_accuracy(&best_genome)?,
        best_genome,
        best_fitness,
        fitness_trace: vec![best_fitness],
        generations: vec![GenerationStats {
            best_fitness,
            mean_fitness: mean,
            adjustment_degree_of_best: degree,
        }],
        generations_run: 1,
        evaluations: n,
    })
}
