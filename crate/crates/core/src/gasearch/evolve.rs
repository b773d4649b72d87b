use std::collections::HashMap;
use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{FitnessContext, GaError, Result};
use crate::mapping::{adjustment_degree, Genome, MappingMatrix};
use crate::par::{self, Exec};
use crate::seeds::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub elite_fraction: f64,
    pub patience: usize,
    /// Per-gene resampling probability; `None` means 1/q.
    pub mutation_rate: Option<f64>,
    pub max_generations: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            elite_fraction: 0.2,
            patience: 200,
            mutation_rate: None,
            max_generations: 2000,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

impl GaConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(GaError::InvalidConfig(format!(
                "population_size {} < 2",
                self.population_size
            )));
        }
        if !(self.elite_fraction > 0.0 && self.elite_fraction < 1.0) {
            return Err(GaError::InvalidConfig(format!(
                "elite_fraction {} outside (0,1)",
                self.elite_fraction
            )));
        }
        if let Some(r) = self.mutation_rate {
            if !(0.0..=1.0).contains(&r) {
                return Err(GaError::InvalidConfig(format!("mutation_rate {r} outside [0,1]")));
            }
        }
        if self.max_generations == 0 {
            return Err(GaError::InvalidConfig("max_generations must be positive".into()));
        }
        Ok(())
    }

    pub fn elite_count(&self) -> usize {
        ((self.elite_fraction * self.population_size as f64).ceil() as usize).clamp(1, self.population_size)
    }

    pub fn mutation_rate_for(&self, q: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / q.max(1) as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Only defined for square mappings.
    pub adjustment_degree_of_best: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_genome: Genome,
    pub best_fitness: f64,
    /// Best fitness after each generation, generation 0 included.
    pub fitness_trace: Vec<f64>,
    pub generations: Vec<GenerationStats>,
    pub generations_run: usize,
    pub report_accuracy: f64,
    /// Distinct genomes scored.
    pub evaluations: usize,
}

impl SearchResult {
    pub fn best_mapping(&self) -> MappingMatrix {
        MappingMatrix::from_genome(&self.best_genome)
    }

    /// Index of the first generation whose best fitness reached `level`.
    pub fn first_generation_reaching(&self, level: f64) -> Option<usize> {
        self.fitness_trace.iter().position(|&f| f >= level)
    }
}

fn degree_of(genome: &Genome) -> Option<f64> {
    (genome.p() == genome.q())
        .then(|| adjustment_degree(&MappingMatrix::from_genome(genome)).ok())
        .flatten()
}

/// Runs the search with the identity genome seeded into a uniformly random
/// initial population.
pub fn evolve(ctx: &FitnessContext, config: &GaConfig) -> Result<SearchResult> {
    let (p, q) = (ctx.p(), ctx.q());
    evolve_seeded(
        ctx,
        config,
        &[Genome::identity(p, q)],
        |r| Genome::random(p, q, r),
        |_, _, _| Ok(()),
    )
}

/// Full control over the initial population and per-generation observation.
///
/// The population starts as `seeds` (truncated to the population size) and
/// is filled with `filler`. `observe` receives the generation index, the
/// population sorted best first and the matching fitness values.
pub fn evolve_seeded<F, O>(
    ctx: &FitnessContext,
    config: &GaConfig,
    seeds: &[Genome],
    mut filler: F,
    mut observe: O,
) -> Result<SearchResult>
where
    F: FnMut(&mut ChaCha8Rng) -> Genome,
    O: FnMut(usize, &[Genome], &[f64]) -> Result<()>,
{
    config.validate()?;
    let (p, q) = (ctx.p(), ctx.q());
    if q == 0 {
        return Err(GaError::Empty("source code"));
    }
    for g in seeds {
        if g.p() != p || g.q() != q {
            return Err(GaError::DimensionMismatch(format!(
                "seed genome is {}x{}, expected {p}x{q}",
                g.p(),
                g.q()
            )));
        }
    }
    let mut rng = rng(config.seed);
    let pop_size = config.population_size;
    let n_elite = config.elite_count();
    let rate = config.mutation_rate_for(q);
    let ranks = WeightedIndex::new((0..pop_size).map(|r| (pop_size - r) as f64)).expect("positive weights");

    let mut population: Vec<Genome> = seeds.iter().take(pop_size).cloned().collect();
    while population.len() < pop_size {
        let g = filler(&mut rng);
        if g.p() != p || g.q() != q {
            return Err(GaError::DimensionMismatch(
                "filler produced a genome of the wrong shape".into(),
            ));
        }
        population.push(g);
    }

    let mut cache: HashMap<Genome, f64> = HashMap::new();
    let mut trace = Vec::new();
    let mut stats = Vec::new();
    let mut best_so_far = f64::NEG_INFINITY;
    let mut stale = 0usize;
    let mut generation = 0usize;

    loop {
        let mut fresh: Vec<Genome> = Vec::new();
        for g in &population {
            if !cache.contains_key(g) && !fresh.contains(g) {
                fresh.push(g.clone());
            }
        }
        let scores = par::map_slice(config.exec, &fresh, |g| ctx.score(g));
        cache.extend(fresh.into_iter().zip(scores));

        let mut scored: Vec<(f64, Genome)> = population.drain(..).map(|g| (cache[&g], g)).collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let fits: Vec<f64> = scored.iter().map(|s| s.0).collect();
        population = scored.into_iter().map(|s| s.1).collect();

        let best = fits[0];
        trace.push(best);
        stats.push(GenerationStats {
            best_fitness: best,
            mean_fitness: fits.iter().sum::<f64>() / fits.len() as f64,
            adjustment_degree_of_best: degree_of(&population[0]),
        });
        observe(generation, &population, &fits)?;

        if best > best_so_far {
            best_so_far = best;
            stale = 0;
        } else {
            stale += 1;
        }
        generation += 1;
        if stale >= config.patience || generation >= config.max_generations {
            break;
        }

        let mut next: Vec<Genome> = population[..n_elite].to_vec();
        while next.len() < pop_size {
            let a = &population[ranks.sample(&mut rng)];
            let b = &population[ranks.sample(&mut rng)];
            let mut child = a.clone();
            let genes = child.genes_mut();
            for (j, gene) in genes.iter_mut().enumerate() {
                if rng.random_bool(0.5) {
                    *gene = b.genes()[j];
                }
                if rate > 0.0 && rng.random_bool(rate) {
                    *gene = rng.random_range(0..=p as u32);
                }
            }
            next.push(child);
        }
        population = next;
    }

    let best_genome = population[0].clone();
    let report_accuracy = ctx.report_accuracy(&best_genome)?;
    Ok(SearchResult {
        best_fitness: trace[trace.len() - 1],
        best_genome,
        fitness_trace: trace,
        generations: stats,
        generations_run: generation,
        report_accuracy,
        evaluations: cache.len(),
    })
}

/// Writes the per-generation trace as CSV.
pub fn write_trace_csv<W: Write>(mut w: W, result: &SearchResult) -> Result<()> {
    writeln!(w, "generation,best_fitness,mean_fitness,adjustment_degree_of_best")?;
    for (i, s) in result.generations.iter().enumerate() {
        let degree = s.adjustment_degree_of_best.map(|d| d.to_string()).unwrap_or_default();
        writeln!(w, "{i},{},{},{degree}", s.best_fitness, s.mean_fitness)?;
    }
    Ok(())
}
