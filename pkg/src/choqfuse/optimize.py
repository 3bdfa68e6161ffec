"""Global minimization with best/1 differential evolution, binomial crossover.

Every candidate is mutated around the population's current best vector,
perturbed by a scaled difference of two other members, recombined with its
target coordinate-wise, and kept only if it does not lose to the target.
Selection is generation-synchronous: all trials of a generation compare
against the generation's incoming population, and the best vector is
recomputed once per generation.

Random-draw order is fixed so a seed always reproduces the same run: the
initial population comes from one uniform block (individuals in index
order, the coordinates of each individual consecutive), then every
generation draws, per target in index order, the two parent indices, the
guaranteed crossover coordinate, and one uniform per coordinate for the
crossover mask, before any trial is evaluated. Fitness evaluations may
therefore run concurrently without changing results.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteFitnessError

__all__ = [
    "DEConfig",
    "DEHistory",
    "DEResult",
    "differential_evolution",
    "init_population",
    "draw_parent_indices",
    "mutant_vector",
    "mutate",
    "binomial_crossover",
    "select_trial",
]


@dataclass
class DEConfig:
    """Box-bounded run configuration.

    Parameters
    ----------
    dimension : int
        Number of coordinates per candidate vector.
    lower_bound, upper_bound : array-like of shape (dimension,) or scalar
        Box bounds; scalars broadcast. Strictly ``lower < upper`` per
        coordinate.
    population_size : int, default 15
        Number of candidates per generation, at least 4 so the best plus
        two distinct others and a target remain selectable.
    scale_factor : float, default 0.5
        Difference-vector multiplier in [0, 1].
    crossover_rate : float, default 0.9
        Per-coordinate probability in [0, 1] of taking the mutant value.
    max_generations : int, default 100
        Number of evolution rounds after the initial population.
    seed : int, default 0
        Seed for the deterministic 64-bit generator.
    """

    dimension: int
    lower_bound: np.ndarray
    upper_bound: np.ndarray
    population_size: int = 15
    scale_factor: float = 0.5
    crossover_rate: float = 0.9
    max_generations: int = 100
    seed: int = 0

    def __post_init__(self):
        self.dimension = int(self.dimension)
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")
        self.lower_bound = self._bound(self.lower_bound, "lower_bound")
        self.upper_bound = self._bound(self.upper_bound, "upper_bound")
        if not np.all(self.lower_bound < self.upper_bound):
            raise ValueError("lower_bound must be strictly below upper_bound "
                             "in every coordinate")
        self.population_size = int(self.population_size)
        if self.population_size < 4:
            raise ValueError(
                f"population_size must be at least 4, got {self.population_size}")
        self.scale_factor = float(self.scale_factor)
        if not 0.0 <= self.scale_factor <= 1.0:
            raise ValueError(f"scale_factor must lie in [0, 1], got {self.scale_factor}")
        self.crossover_rate = float(self.crossover_rate)
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError(
                f"crossover_rate must lie in [0, 1], got {self.crossover_rate}")
        self.max_generations = int(self.max_generations)
        if self.max_generations < 1:
            raise ValueError(
                f"max_generations must be positive, got {self.max_generations}")
        self.seed = int(self.seed)

    def _bound(self, value, name):
        arr = np.asarray(value, dtype=float)
        if arr.ndim == 0:
            arr = np.full(self.dimension, float(arr))
        if arr.shape != (self.dimension,):
            raise ValueError(f"{name} must have shape ({self.dimension},), "
                             f"got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{name} must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        return arr


@dataclass
class DEHistory:
    """Best fitness and best vector per generation, generation zero included."""

    best_fitness: np.ndarray
    best_vector: np.ndarray

    def __len__(self):
        return len(self.best_fitness)


@dataclass
class DEResult:
    """Final best vector, its fitness, and the per-generation history."""

    x: np.ndarray
    fun: float
    history: DEHistory


def init_population(config, rng):
    """Draw the generation-zero population uniformly inside the box."""
    span = config.upper_bound - config.lower_bound
    unit = rng.random((config.population_size, config.dimension))
    return config.lower_bound + span * unit


def _draw_excluding(rng, n, excluded):
    """One uniform index in [0, n) skipping the ascending excluded indices."""
    k = int(rng.integers(n - len(excluded)))
    for e in excluded:
        if k >= e:
            k += 1
    return k


def draw_parent_indices(rng, population_size, best_index):
    """Two distinct population indices, both different from the best."""
    r1 = _draw_excluding(rng, population_size, (best_index,))
    r2 = _draw_excluding(rng, population_size, tuple(sorted((best_index, r1))))
    return r1, r2


def mutant_vector(best, donor_a, donor_b, scale_factor, lower, upper):
    """best + F * (a - b), clipped back into the box."""
    return np.clip(best + scale_factor * (donor_a - donor_b), lower, upper)


def mutate(population, best_index, scale_factor, lower, upper, rng):
    """Draw the two parents and form one clipped best/1 mutant."""
    r1, r2 = draw_parent_indices(rng, len(population), best_index)
    return mutant_vector(population[best_index], population[r1], population[r2],
                         scale_factor, lower, upper)


def binomial_crossover(target, mutant, crossover_rate, rng):
    """Mix mutant coordinates into the target; one coordinate always crosses."""
    d = target.shape[0]
    j_rand = int(rng.integers(d))
    mask = rng.random(d) < crossover_rate
    mask[j_rand] = True
    return np.where(mask, mutant, target)


def select_trial(target_fitness, trial_fitness):
    """True when the trial replaces its target; ties promote the trial."""
    for value in (target_fitness, trial_fitness):
        if not np.isfinite(value):
            raise NonFiniteFitnessError(f"fitness comparison saw {value!r}")
    return trial_fitness <= target_fitness


def _evaluate_all(objective, vectors):
    out = np.empty(len(vectors))
    for i, v in enumerate(vectors):
        value = float(objective(v.copy()))
        if not np.isfinite(value):
            raise NonFiniteFitnessError(
                f"objective returned {value!r} at {v.tolist()}")
        out[i] = value
    return out


def differential_evolution(objective, config):
    """Minimize ``objective`` over the configured box.

    Parameters
    ----------
    objective : callable
        Maps a 1-D float array of length ``config.dimension`` to a finite
        float. Must be deterministic; non-finite values raise
        `NonFiniteFitnessError`.
    config : DEConfig

    Returns
    -------
    DEResult
        Best vector found, its fitness, and a history holding
        ``max_generations + 1`` records whose best fitness never increases.
    """
    rng = np.random.default_rng(config.seed)
    population = init_population(config, rng)
    fitness = _evaluate_all(objective, population)
    best = int(np.argmin(fitness))
    history_fitness = [fitness[best]]
    history_vector = [population[best].copy()]
    for _ in range(config.max_generations):
        trials = np.empty_like(population)
        for j in range(config.population_size):
            mutant = mutate(population, best, config.scale_factor,
                            config.lower_bound, config.upper_bound, rng)
            trials[j] = binomial_crossover(population[j], mutant,
                                           config.crossover_rate, rng)
        trial_fitness = _evaluate_all(objective, trials)
        for j in range(config.population_size):
            if select_trial(fitness[j], trial_fitness[j]):
                population[j] = trials[j]
                fitness[j] = trial_fitness[j]
        best = int(np.argmin(fitness))
        history_fitness.append(fitness[best])
        history_vector.append(population[best].copy())
    history = DEHistory(np.asarray(history_fitness), np.asarray(history_vector))
    return DEResult(population[best].copy(), float(fitness[best]), history)
