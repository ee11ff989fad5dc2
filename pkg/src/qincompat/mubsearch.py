"""Search for mutually unbiased partners by maximizing measurement
incompatibility.

The quantifier equals 1 exactly when every squared overlap between the two
eigenbases is 1/d, so driving it to its maximum over the unitary group is
a MUB search. Candidate bases are parameterized by exponential coordinates
over the SU(d) generators; the ascent uses finite-difference gradients
with a backtracking line search and seeded random restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import GeneratorSet, build_generators
from .core import ObservableBasis, _require_same_dim, transition_matrix
from .measures import measurement_incompatibility

GRADIENT_STEP = 1e-6
STEP_FLOOR = 1e-12
STALL_ITERATIONS = 10
MOMENTUM = 0.9


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the incompatibility ascent.

    ``tol_obj`` is the stall tolerance on objective improvements;
    ``tol_mub`` the unbiasedness certificate tolerance, kept separate
    because certifying overlaps is much more demanding than stalling.
    """

    dim: int
    restarts: int = 20
    max_iters: int = 300
    step_init: float = 0.5
    tol_obj: float = 1e-12
    tol_mub: float = 1e-8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol_mub < 1e-10:
            raise ValueError(f"tol_mub must be >= 1e-10, got {self.tol_mub}")


@dataclass(frozen=True)
class SearchResult:
    """Best basis found, its objective, and the full ascent history.

    ``trajectory`` concatenates the per-restart histories; the iteration
    counter resets to zero at each restart and the objective is monotone
    nondecreasing within each restart.
    """

    best_basis: ObservableBasis
    objective: float
    certified_mub: bool
    trajectory: tuple[tuple[int, float], ...]
    restarts_used: int


def parameterize_basis(coeffs: np.ndarray, gens: GeneratorSet) -> ObservableBasis:
    """Basis whose eigenvectors are the columns of exp(i sum a_k G_k).

    The exponential is taken through the eigendecomposition of the
    Hermitian generator combination, so the columns are orthonormal to
    machine precision. Zero coefficients give the computational basis.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    n = gens.dim * gens.dim - 1
    if coeffs.shape != (n,):
        raise ValueError(f"expected {n} coefficients, got shape {coeffs.shape}")
    hermitian = np.tensordot(coeffs, gens.generators, axes=1)
    vals, vecs = np.linalg.eigh(hermitian)
    unitary = (vecs * np.exp(1j * vals)) @ vecs.conj().T
    return ObservableBasis(unitary)


def mub_certificate(
    first: ObservableBasis, second: ObservableBasis, tol: float
) -> tuple[bool, float]:
    """Check unbiasedness: is every squared overlap within ``tol`` of 1/d?

    Returns the verdict together with the worst overlap deviation.
    """
    _require_same_dim(first.dim, second.dim)
    deviations = np.abs(transition_matrix(first, second) - 1.0 / first.dim)
    max_deviation = float(deviations.max())
    return max_deviation <= tol, max_deviation


class _OverlapObjective:
    """Batched evaluator of the squared-overlap incompatibility form.

    Computes exactly the formula ``measurement_incompatibility`` returns,
    vectorized over many coefficient vectors at once so the finite
    differences do not pay per-probe Python overhead. Accepted points are
    still scored through the canonical function, which keeps the recorded
    objective consistent with the measures module.
    """

    def __init__(self, fixed: ObservableBasis, gens: GeneratorSet) -> None:
        self.fixed_dagger = fixed.vectors.conj().T
        self.generators = gens.generators
        self.dim = gens.dim

    def __call__(self, coeff_rows: np.ndarray) -> np.ndarray:
        d = self.dim
        hermitians = np.tensordot(coeff_rows, self.generators, axes=1)
        vals, vecs = np.linalg.eigh(hermitians)
        phases = np.exp(1j * vals)
        unitaries = (vecs * phases[:, None, :]) @ vecs.conj().transpose(0, 2, 1)
        overlaps = np.abs(np.einsum("ab,mbc->mac", self.fixed_dagger, unitaries)) ** 2
        return (d - np.einsum("mjk,mjk->m", overlaps, overlaps)) / (d - 1)


def maximize_incompatibility(fixed: ObservableBasis, config: SearchConfig) -> SearchResult:
    """Ascend the incompatibility against a fixed basis.

    Central finite differences (step 1e-6) supply the gradient; the ascent
    direction blends the gradient with the previous accepted displacement
    (a momentum term, which cuts through the narrow valleys this landscape
    develops for d >= 4), falling back to the bare gradient when the
    blended direction fails. A backtracking line search halves the step
    until the objective improves, down to a floor of 1e-12; the accepted
    step is carried over (doubled, capped at ``step_init``) to seed the
    next search. A restart triggers after ten consecutive iterations with
    improvements below ``tol_obj``. The first start is the origin (the
    computational basis); subsequent starts draw coefficients uniformly
    from [-pi, pi]. Runs are deterministic for a given seed, and remaining
    restarts are skipped once the objective is within ``tol_obj`` of its
    maximum. The returned basis is the best across restarts, ties resolved
    toward the earlier restart.
    """
    _require_same_dim(fixed.dim, config.dim)
    gens = build_generators(config.dim)
    rng = np.random.default_rng(config.seed)
    n = config.dim * config.dim - 1
    probe = _OverlapObjective(fixed, gens)

    def objective(coeffs: np.ndarray) -> float:
        return measurement_incompatibility(fixed, parameterize_basis(coeffs, gens))

    best_value = -1.0
    best_coeffs = np.zeros(n)
    trajectory: list[tuple[int, float]] = []
    restarts_used = 0

    for restart in range(config.restarts):
        if best_value >= 1.0 - config.tol_obj:
            break
        restarts_used += 1
        if restart == 0:
            coeffs = np.zeros(n)
        else:
            coeffs = rng.uniform(-np.pi, np.pi, n)
        current = objective(coeffs)
        trajectory.append((0, current))
        stall = 0
        step_seed = config.step_init
        displacement = np.zeros(n)

        for iteration in range(1, config.max_iters + 1):
            gradient = _central_gradient(probe, coeffs)
            directions = [gradient]
            disp_norm = np.linalg.norm(displacement)
            if disp_norm > 0.0:
                blended = gradient + (
                    MOMENTUM * np.linalg.norm(gradient) / disp_norm
                ) * displacement
                directions.insert(0, blended)

            improved = 0.0
            for direction in directions:
                step = step_seed
                accepted = False
                while step >= STEP_FLOOR:
                    candidate = coeffs + step * direction
                    if probe(candidate[None, :])[0] > current:
                        value = objective(candidate)
                        if value > current:
                            improved = value - current
                            displacement = candidate - coeffs
                            coeffs, current = candidate, value
                            step_seed = min(2.0 * step, config.step_init)
                            accepted = True
                            break
                    step /= 2.0
                if accepted:
                    break
            trajectory.append((iteration, current))
            stall = stall + 1 if improved < config.tol_obj else 0
            if stall >= STALL_ITERATIONS:
                break

        if current > best_value:
            best_value = current
            best_coeffs = coeffs

    best_basis = parameterize_basis(best_coeffs, gens)
    certified, _ = mub_certificate(fixed, best_basis, config.tol_mub)
    return SearchResult(
        best_basis=best_basis,
        objective=best_value,
        certified_mub=certified,
        trajectory=tuple(trajectory),
        restarts_used=restarts_used,
    )


def _central_gradient(probe: _OverlapObjective, coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs)
    bumped = np.repeat(coeffs[None, :], 2 * n, axis=0)
    idx = np.arange(n)
    bumped[idx, idx] += GRADIENT_STEP
    bumped[n + idx, idx] -= GRADIENT_STEP
    values = probe(bumped)
    return (values[:n] - values[n:]) / (2.0 * GRADIENT_STEP)
