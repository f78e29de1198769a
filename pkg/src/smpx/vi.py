"""Variational-inequality problems, stochastic oracles and error measures.

A problem couples a geometry with a monotone operator F and the regularity
constants (L, M) of ||F(z) - F(z')||_* <= L ||z - z'|| + M.  The residual
of a candidate z is max_u <F(u), z - u>; since the exact maximum is
intractable in general, ``err_vi_lower`` reports the certified lower bound
over a finite probe set.  For saddle-point instances the functional (Nash)
error is the exact duality gap and is computed from the instance's closed
forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import InputError
from .geometry import ProxSetup, inner
from .rng import RandomStream


@dataclass(frozen=True)
class VIProblem:
    """Domain setup plus exact operator and its regularity constants."""

    setup: ProxSetup
    operator: Callable
    lip_l: float = 0.0
    var_m: float = 0.0
    kind: str = "generic"  # generic | saddle | nash


@dataclass(frozen=True)
class StochasticOracle:
    """Seeded sampler returning a random estimate of F(z).

    bias_mu bounds ||E{sample - F(z)}||_*, noise_m bounds the second moment
    of the deviation in the conjugate norm; subgaussian marks oracles whose
    deviation satisfies the exponential moment condition at level noise_m.
    """

    sampler: Callable  # (point, RandomStream) -> dual vector
    bias_mu: float = 0.0
    noise_m: float = 0.0
    subgaussian: bool = False

    def sample(self, z, stream: RandomStream):
        return self.sampler(z, stream)


def exact_oracle(problem: VIProblem) -> StochasticOracle:
    """Oracle that returns F itself: zero bias, zero noise, trivially subgaussian."""
    return StochasticOracle(
        sampler=lambda z, stream: problem.operator(z),
        bias_mu=0.0,
        noise_m=0.0,
        subgaussian=True,
    )


@dataclass(frozen=True)
class SaddleInstance:
    """Saddle-point problem with exact primal and dual value functions.

    primal_value(x) is the inner maximum over y, dual_value(y) the inner
    minimum over x; weak duality makes their difference a nonnegative gap.
    """

    problem: VIProblem
    primal_value: Callable
    dual_value: Callable
    meta: dict = field(default_factory=dict)


def err_vi_lower(problem: VIProblem, z, probes: Sequence) -> float:
    """Certified lower bound max over probes of <F(u), z - u>.

    Any weak solution scores <= 0 against every probe set; the bound is
    reported alongside the probe count by the harness.
    """
    probes = list(probes)
    if not probes:
        raise InputError("probe set is empty")
    best = -float("inf")
    op = problem.operator
    for u in probes:
        best = max(best, inner(op(u), z - u))
    return best


class ProbeSet:
    """Fixed probe family with pre-evaluated operator values.

    Evaluating F at the probes once makes repeated residual lower bounds
    cheap along a trajectory.
    """

    def __init__(self, problem: VIProblem, probes: Sequence):
        probes = list(probes)
        if not probes:
            raise InputError("probe set is empty")
        self.probes = probes
        self._values = [problem.operator(u) for u in probes]

    def __len__(self):
        return len(self.probes)

    def lower_bound(self, z) -> float:
        return max(inner(f, z - u) for f, u in zip(self._values, self.probes))


def default_probes(problem: VIProblem, seed: int = 0, n_random: int = 100) -> ProbeSet:
    """Center, extreme points and seeded random feasible points."""
    stream = RandomStream(seed)
    return ProbeSet(problem, problem.setup.probe_points(stream, n_random))


def err_nash_saddle(inst: SaddleInstance, z) -> float:
    """Duality gap primal_value(x) - dual_value(y) of z = (x, y)."""
    return float(inst.primal_value(z.x) - inst.dual_value(z.y))


def oracle_stats(
    oracle: StochasticOracle,
    problem: VIProblem,
    z,
    n_samples: int,
    seed: int,
):
    """Monte-Carlo estimates of the oracle bias and second moment at z.

    Returns (||mean deviation||_*, mean ||deviation||_*^2); deterministic
    for a fixed seed.
    """
    if n_samples < 1:
        raise InputError("need at least one sample")
    stream = RandomStream(seed)
    fz = problem.operator(z)
    dual_norm = problem.setup.dual_norm
    acc = None
    m2 = 0.0
    for _ in range(n_samples):
        d = oracle.sample(z, stream) - fz
        m2 += dual_norm(d) ** 2
        acc = d if acc is None else acc + d
    bias = dual_norm((1.0 / n_samples) * acc)
    return bias, m2 / n_samples


def estimate_noise_level(
    oracle: StochasticOracle,
    problem: VIProblem,
    n_points: int = 6,
    n_samples: int = 3000,
    seed: int = 0,
    safety: float = 1.2,
) -> float:
    """Empirical oracle noise level for stepsize tuning.

    Takes the largest sampled root-mean-square deviation over the center
    and seeded random points, inflated by the safety factor.  Deterministic
    for a fixed seed; used when the worst-case noise constants are too
    conservative to give informative stepsizes.
    """
    stream = RandomStream(seed)
    points = [problem.setup.center] + [
        problem.setup.random_point(stream) for _ in range(max(n_points - 1, 0))
    ]
    worst = 0.0
    for i, z in enumerate(points):
        _, m2 = oracle_stats(oracle, problem, z, n_samples, seed + 1 + i)
        worst = max(worst, math.sqrt(m2))
    return safety * worst


def spot_check_regularity(
    problem: VIProblem, n_pairs: int = 1000, seed: int = 0
):
    """Sampled monotonicity and (L, M)-regularity margins.

    Returns (worst_monotonicity, worst_lipschitz_excess): the first should
    be >= -tol for a monotone operator, the second <= tol when the declared
    constants are valid.
    """
    stream = RandomStream(seed)
    setup = problem.setup
    op = problem.operator
    worst_mono = float("inf")
    worst_lip = -float("inf")
    for _ in range(n_pairs):
        z = setup.random_point(stream)
        u = setup.random_point(stream)
        fz, fu = op(z), op(u)
        worst_mono = min(worst_mono, inner(fz - fu, z - u))
        gap = setup.dual_norm(fz - fu) - (
            problem.lip_l * setup.norm(z - u) + problem.var_m
        )
        worst_lip = max(worst_lip, gap)
    return worst_mono, worst_lip
