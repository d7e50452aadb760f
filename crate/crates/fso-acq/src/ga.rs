//! Real-coded genetic algorithm over the subregion radii.
//!
//! The free variables are the inner radii `r_1 < ... < r_{N-1}` (the
//! outermost radius is pinned to the region). Candidates are kept feasible by
//! repair (ascending sort, clamping, minimum gap) rather than by penalties,
//! so every evaluation is a valid partition. Selection is by tournament,
//! crossover is BLX-alpha blending, mutation adds Gaussian noise, and a small
//! elite carries over unchanged, which makes the best objective monotone over
//! generations. All randomness is drawn from per-individual substreams
//! derived from the seed, so results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adaptive_spiral::{event_probs, SpiralTimeStats};
use crate::error::{Error, Result};
use crate::region::{LocationModel, Partition, ScanGeometry};

/// What the search minimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Mean acquisition time (seconds).
    Mean,
    /// P(T > tau) at a fixed time threshold.
    Ccdf { tau: f64 },
}

/// Hyper-parameters of the search.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// BLX blending width as a fraction of the parent interval.
    pub blend_alpha: f64,
    pub mutation_rate: f64,
    /// Gaussian mutation spread as a fraction of the region radius.
    pub mutation_scale: f64,
    pub elite_count: usize,
    /// Stop after this many generations without improvement.
    pub stall_generations: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 200,
            tournament_size: 3,
            crossover_rate: 0.9,
            blend_alpha: 0.5,
            mutation_rate: 0.1,
            mutation_scale: 0.05,
            elite_count: 2,
            stall_generations: 30,
            seed: 7,
        }
    }
}

impl GaConfig {
    fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::config("population size must be positive"));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::config(
                "elite count must be below the population size",
            ));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return Err(Error::config("tournament size out of range"));
        }
        for (name, rate) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::config(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.blend_alpha < 0.0 || self.mutation_scale < 0.0 {
            return Err(Error::config(
                "blend alpha and mutation scale must be non-negative",
            ));
        }
        Ok(())
    }
}

/// Why the search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitReason {
    /// No improvement for `stall_generations` in a row.
    Stalled,
    /// Ran the full generation budget.
    GenerationLimit,
    /// Nothing to optimize (a single subregion has no free radii).
    NoFreeVariables,
}

/// Objective statistics of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
}

/// Outcome of an optimization run.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    /// Optimized partition (all N radii, outermost equal to the region radius).
    pub partition: Partition,
    pub objective_value: f64,
    pub history: Vec<GenerationStats>,
    /// Total objective evaluations performed.
    pub evaluations: u64,
    pub exit: ExitReason,
}

/// Minimum spacing between radii, as a fraction of the region radius.
const MIN_GAP_FRACTION: f64 = 1e-3;

/// Sort-clamp-gap repair of a genome of inner radii, in place.
///
/// Idempotent: repairing a repaired genome changes nothing.
fn repair(genome: &mut [f64], region_radius: f64) {
    let gap = MIN_GAP_FRACTION * region_radius;
    genome.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for g in genome.iter_mut() {
        *g = g.clamp(gap, region_radius - gap);
    }
    // forward pass: enforce ascending gaps
    for i in 1..genome.len() {
        if genome[i] < genome[i - 1] + gap {
            genome[i] = genome[i - 1] + gap;
        }
    }
    // backward pass: pull everything below the rim
    let n = genome.len();
    if n > 0 {
        genome[n - 1] = genome[n - 1].min(region_radius - gap);
        for i in (0..n - 1).rev() {
            if genome[i] > genome[i + 1] - gap {
                genome[i] = genome[i + 1] - gap;
            }
        }
    }
}

/// Evaluate an objective at a full radii vector (outermost entry equal to the
/// region radius). The vector is repaired first, so any permutation of the
/// same radii evaluates identically.
pub fn evaluate_objective(
    radii: &[f64],
    objective: Objective,
    geom: &ScanGeometry,
    p_d: f64,
    model: &LocationModel,
) -> Result<f64> {
    if radii.is_empty() {
        return Err(Error::domain("radii vector must be non-empty"));
    }
    let mut inner: Vec<f64> = radii.to_vec();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let last = inner.pop().unwrap();
    if (last - geom.region_radius).abs() > 1e-9 * geom.region_radius {
        return Err(Error::domain("largest radius must equal the region radius"));
    }
    repair(&mut inner, geom.region_radius);
    evaluate_genome(&inner, objective, geom, p_d, model)
}

fn evaluate_genome(
    inner: &[f64],
    objective: Objective,
    geom: &ScanGeometry,
    p_d: f64,
    model: &LocationModel,
) -> Result<f64> {
    let mut radii = inner.to_vec();
    radii.push(geom.region_radius);
    let partition = Partition::new(radii, geom)?;
    let probs = event_probs(&partition, p_d, model)?;
    let stats = SpiralTimeStats::new(&partition, &probs, geom)?;
    Ok(match objective {
        Objective::Mean => stats.mean_s(),
        Objective::Ccdf { tau } => stats.ccdf(tau),
    })
}

/// Deterministic per-individual RNG substream.
fn substream(seed: u64, generation: u64, individual: u64) -> ChaCha8Rng {
    // splitmix64 mix of (seed, generation, individual)
    let mut z = seed ^ generation.rotate_left(24) ^ individual.rotate_left(48);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Minimize an objective over the inner subregion radii.
///
/// Deterministic for a fixed config; the uniform layout is seeded into the
/// initial population, so with elitism the result can never be worse than the
/// uniform baseline.
pub fn optimize(
    objective: Objective,
    n_regions: usize,
    geom: &ScanGeometry,
    p_d: f64,
    model: &LocationModel,
    cfg: &GaConfig,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    if n_regions == 0 {
        return Err(Error::config("need at least one subregion"));
    }
    if let Objective::Ccdf { tau } = objective {
        if tau < 0.0 {
            return Err(Error::domain("tau must be non-negative"));
        }
    }
    let dim = n_regions - 1;
    if dim == 0 {
        let partition = Partition::uniform(1, geom)?;
        let value = evaluate_genome(&[], objective, geom, p_d, model)?;
        return Ok(OptimizationResult {
            partition,
            objective_value: value,
            history: Vec::new(),
            evaluations: 1,
            exit: ExitReason::NoFreeVariables,
        });
    }

    let region = geom.region_radius;
    let gap = MIN_GAP_FRACTION * region;
    let pop_size = cfg.population_size;
    let mut evaluations = 0u64;

    let mut eval = |genome: &[f64]| -> Result<f64> {
        evaluations += 1;
        evaluate_genome(genome, objective, geom, p_d, model)
    };

    // initial population: the uniform layout first, the rest random
    let mut population: Vec<Vec<f64>> = Vec::with_capacity(pop_size);
    let uniform: Vec<f64> = (1..n_regions)
        .map(|i| region * i as f64 / n_regions as f64)
        .collect();
    population.push(uniform);
    for idx in 1..pop_size {
        let mut rng = substream(cfg.seed, 0, idx as u64);
        let mut genome: Vec<f64> = (0..dim).map(|_| rng.gen_range(gap..region - gap)).collect();
        repair(&mut genome, region);
        population.push(genome);
    }
    let mut fitness: Vec<f64> = Vec::with_capacity(pop_size);
    for genome in &population {
        fitness.push(eval(genome)?);
    }

    let mut history: Vec<GenerationStats> = Vec::with_capacity(cfg.generations);
    let mut order: Vec<usize> = (0..pop_size).collect();
    order.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap());
    let mut best = fitness[order[0]];
    push_stats(&mut history, 0, &fitness, &order);

    let mut stall = 0usize;
    let mut exit = ExitReason::GenerationLimit;
    for generation in 1..=cfg.generations {
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(pop_size);
        // elites survive verbatim
        for &idx in order.iter().take(cfg.elite_count) {
            next.push(population[idx].clone());
        }
        for child_idx in cfg.elite_count..pop_size {
            let mut rng = substream(cfg.seed, generation as u64, child_idx as u64);
            let a = tournament(&mut rng, &fitness, cfg.tournament_size);
            let b = tournament(&mut rng, &fitness, cfg.tournament_size);
            let mut child = if rng.gen::<f64>() < cfg.crossover_rate {
                blx_crossover(&mut rng, &population[a], &population[b], cfg.blend_alpha)
            } else {
                population[a].clone()
            };
            for gene in child.iter_mut() {
                if rng.gen::<f64>() < cfg.mutation_rate {
                    let noise: f64 = rng.sample(rand_distr::StandardNormal);
                    *gene += noise * cfg.mutation_scale * region;
                }
            }
            repair(&mut child, region);
            next.push(child);
        }
        population = next;
        fitness.clear();
        for genome in &population {
            fitness.push(eval(genome)?);
        }
        order = (0..pop_size).collect();
        order.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap());
        push_stats(&mut history, generation, &fitness, &order);
        let gen_best = fitness[order[0]];
        if gen_best < best {
            best = gen_best;
            stall = 0;
        } else {
            stall += 1;
            if stall >= cfg.stall_generations {
                exit = ExitReason::Stalled;
                break;
            }
        }
    }

    let winner = &population[order[0]];
    let mut radii = winner.clone();
    radii.push(region);
    let partition = Partition::new(radii, geom)?;
    Ok(OptimizationResult {
        partition,
        objective_value: fitness[order[0]],
        history,
        evaluations,
        exit,
    })
}

fn push_stats(
    history: &mut Vec<GenerationStats>,
    generation: usize,
    fitness: &[f64],
    order: &[usize],
) {
    let mean = fitness.iter().sum::<f64>() / fitness.len() as f64;
    history.push(GenerationStats {
        generation,
        best: fitness[order[0]],
        mean,
        worst: fitness[*order.last().unwrap()],
    });
}

fn tournament<R: Rng>(rng: &mut R, fitness: &[f64], size: usize) -> usize {
    let mut winner = rng.gen_range(0..fitness.len());
    for _ in 1..size {
        let challenger = rng.gen_range(0..fitness.len());
        if fitness[challenger] < fitness[winner] {
            winner = challenger;
        }
    }
    winner
}

fn blx_crossover<R: Rng>(rng: &mut R, a: &[f64], b: &[f64], alpha: f64) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let span = (hi - lo).max(1e-12);
            rng.gen_range(lo - alpha * span..hi + alpha * span)
        })
        .collect()
}

/// Write an optimization trace as CSV (generation, best, mean, worst).
pub fn write_trace_csv<W: std::io::Write>(result: &OptimizationResult, mut out: W) -> Result<()> {
    writeln!(out, "generation,best,mean,worst")?;
    for s in &result.history {
        writeln!(
            out,
            "{},{:.8e},{:.8e},{:.8e}",
            s.generation, s.best, s.mean, s.worst
        )?;
    }
    Ok(())
}
