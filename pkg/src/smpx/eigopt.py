"""Eigenvalue minimization over the simplex via a randomized bilinear oracle.

The problem is min over the simplex of lambda_max(A_0 + x_1 A_1 + ... +
x_n A_n) with block-diagonal symmetric data.  Its saddle reformulation on
simplex x spectahedron has the bilinear operator

    F(x, y) = [ (Tr(y A_1), ..., Tr(y A_n)) ; -(A_0 + sum_j x_j A_j) ]

which the single-sample oracle estimates by drawing one index from x and
one block index from the block traces of y: the y-part uses the sampled
matrix -(A_0 + A_j), the x-part the traces against the normalized sampled
block.  Averaging k independent samples cuts the noise level by sqrt(k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import symmat
from .errors import ConfigError, InputError, NumericalError
from .geometry import Pair, ProductSetup, SimplexSetup, SpectahedronSetup
from .rng import inverse_cdf_index
from .symmat import BlockStructure, BlockSymMatrix
from .vi import SaddleInstance, StochasticOracle, VIProblem

_TRACE_SLACK = 1e-12


@dataclass(frozen=True)
class EigInstance:
    """Data matrices A_0..A_n on a common block structure.

    a_inf is the largest spectral norm among A_1..A_n (A_0 excluded).
    Stacked per-block tensors are precomputed so operator and oracle calls
    cost one vectorized pass.
    """

    structure: BlockStructure
    a0: BlockSymMatrix
    mats: tuple  # A_1..A_n as BlockSymMatrix
    a_inf: float = field(init=False)
    _stacks: tuple = field(init=False, repr=False)  # per block: (n, p, p)
    _flats: tuple = field(init=False, repr=False)  # per block: (n, p * p)

    def __post_init__(self):
        if len(self.mats) < 2:
            raise ConfigError("need n >= 2 data matrices")
        for m in self.mats:
            if m.structure != self.structure:
                raise InputError("matrix does not match the instance structure")
        if self.a0.structure != self.structure:
            raise InputError("offset matrix does not match the instance structure")
        object.__setattr__(
            self, "a_inf", max(symmat.spectral_norm(m) for m in self.mats)
        )
        stacks = tuple(
            np.stack([m.blocks[i] for m in self.mats])
            for i in range(len(self.structure.block_sizes))
        )
        object.__setattr__(self, "_stacks", stacks)
        object.__setattr__(
            self, "_flats", tuple(s.reshape(len(self.mats), -1) for s in stacks)
        )

    @property
    def n(self) -> int:
        return len(self.mats)

    @property
    def p_total(self) -> int:
        return self.structure.total_dim

    def combination(self, x: np.ndarray) -> BlockSymMatrix:
        """A_0 + sum_j x_j A_j."""
        x = np.asarray(x, dtype=float)
        blocks = [
            a0b + (x @ flat).reshape(a0b.shape)
            for a0b, flat in zip(self.a0.blocks, self._flats)
        ]
        return BlockSymMatrix(self.structure, blocks, _validate=False)

    def trace_vector(self, y: BlockSymMatrix) -> np.ndarray:
        """(Tr(y A_1), ..., Tr(y A_n))."""
        out = np.zeros(self.n)
        for flat, yb in zip(self._flats, y.blocks):
            out += flat @ yb.ravel()
        return out


class RegularityConstants(NamedTuple):
    """Operator and oracle constants for the randomized-oracle setup.

    lip is the literal bound 2 ln(n) + 4 ln(p); the effective constant used
    for stepsizes carries the extra a_inf factor (see ``effective_lipschitz``).
    norm_weights are the denominators (2 ln n, 4 ln p) of the weighted
    product norm under which the constants were derived.
    """

    lip: float
    noise: float
    norm_weights: tuple


def regularity_constants(inst: EigInstance, k: int) -> RegularityConstants:
    """Constants for the k-averaged oracle; requires n >= 3 and p >= 3."""
    if k < 1:
        raise ConfigError("averaging width k must be >= 1")
    n, p1 = inst.n, inst.p_total
    if n < 3 or p1 < 3:
        raise ConfigError("constants need n >= 3 and total block dimension >= 3")
    lip = 2.0 * math.log(n) + 4.0 * math.log(p1)
    noise = 27.0 * (math.log(n) + math.log(p1)) * inst.a_inf / math.sqrt(k)
    return RegularityConstants(lip, noise, (2.0 * math.log(n), 4.0 * math.log(p1)))


def effective_lipschitz(inst: EigInstance) -> float:
    """(2 ln n + 4 ln p) * a_inf: the literal constant scaled by the data size."""
    n, p1 = inst.n, inst.p_total
    return (2.0 * math.log(n) + 4.0 * math.log(p1)) * inst.a_inf


def sample_deviation_bound(inst: EigInstance) -> float:
    """Almost-sure bound on ||Xi - F||_* for the single-sample oracle.

    Both oracle parts deviate by at most 2 a_inf in their sup norms, so in
    the product dual norm the deviation is at most
    2 a_inf sqrt(2 ln n + 2 ln p).  Bounded deviations make the oracle
    subgaussian at this level, and the bound also caps the second moment.
    """
    n, p1 = inst.n, inst.p_total
    return 2.0 * inst.a_inf * math.sqrt(2.0 * math.log(n) + 2.0 * math.log(p1))


def operator_sup_bound(inst: EigInstance) -> float:
    """Upper bound on sup_z ||F(z)||_* over the product domain."""
    n, p1 = inst.n, inst.p_total
    a0_inf = symmat.spectral_norm(inst.a0)
    return math.sqrt(
        2.0 * math.log(n) * inst.a_inf**2
        + 2.0 * math.log(p1) * (a0_inf + inst.a_inf) ** 2
    )


def build_setup(inst: EigInstance) -> ProductSetup:
    """Simplex-times-spectahedron product geometry for the instance."""
    return ProductSetup(SimplexSetup(inst.n), SpectahedronSetup(inst.structure))


def exact_operator(inst: EigInstance, z: Pair) -> Pair:
    """The bilinear saddle operator; Lipschitz with M = 0."""
    x, y = z.x, z.y
    if len(x) != inst.n:
        raise InputError("x-dimension mismatch")
    if y.structure != inst.structure:
        raise InputError("y block structure mismatch")
    return Pair(inst.trace_vector(y), -inst.combination(x))


def _block_probabilities(y: BlockSymMatrix) -> np.ndarray:
    nu = y.block_traces()
    if np.any(nu < -_TRACE_SLACK):
        raise NumericalError("block trace drifted negative beyond tolerance")
    nu = np.maximum(nu, 0.0)
    total = nu.sum()
    if total <= 0.0:
        raise NumericalError("block traces sum to zero")
    return nu / total


def _xi_from_indices(inst: EigInstance, y: BlockSymMatrix, j: int, i: int) -> Pair:
    """Oracle value for sampled matrix index j and block index i."""
    tr = float(np.trace(y.blocks[i]))
    ybar = y.blocks[i] / max(tr, 1e-300)
    xi_x = inst._flats[i] @ ybar.ravel()
    xi_y = BlockSymMatrix(
        inst.structure,
        [-(a0b + mb) for a0b, mb in zip(inst.a0.blocks, inst.mats[j].blocks)],
        _validate=False,
    )
    return Pair(xi_x, xi_y)


def sample_xi(inst: EigInstance, z: Pair, stream) -> Pair:
    """One draw of the randomized oracle: two inverse-CDF index draws.

    The matrix index follows the x-coordinates read as a probability
    vector, the block index follows the block traces of y (clamped at zero
    and renormalized against round-off).  Cost is one pass over the data
    restricted to the sampled block plus one block copy.
    """
    x, y = z.x, z.y
    j = inverse_cdf_index(np.cumsum(x), stream.uniform())
    nu = _block_probabilities(y)
    i = inverse_cdf_index(np.cumsum(nu), stream.uniform())
    return _xi_from_indices(inst, y, j, i)


def averaged_oracle(inst: EigInstance, k: int) -> StochasticOracle:
    """Oracle averaging k independent draws; noise level shrinks by sqrt(k)."""
    if k < 1:
        raise ConfigError("averaging width k must be >= 1")
    if k == 1:
        sampler = lambda z, stream: sample_xi(inst, z, stream)
    else:
        def sampler(z, stream):
            acc = sample_xi(inst, z, stream)
            for _ in range(k - 1):
                acc = acc + sample_xi(inst, z, stream)
            return (1.0 / k) * acc

    n, p1 = inst.n, inst.p_total
    noise = 27.0 * (math.log(n) + math.log(p1)) * inst.a_inf / math.sqrt(k)
    return StochasticOracle(sampler=sampler, bias_mu=0.0, noise_m=noise, subgaussian=True)


def enumerate_expectation(inst: EigInstance, z: Pair) -> Pair:
    """Full enumeration of E{Xi(z)} over both sampled indices; test oracle."""
    x, y = z.x, z.y
    nu = _block_probabilities(y)
    acc = None
    for j in range(inst.n):
        for i in range(len(nu)):
            w = float(x[j]) * float(nu[i])
            if w == 0.0:
                continue
            term = w * _xi_from_indices(inst, y, j, i)
            acc = term if acc is None else acc + term
    if acc is None:
        raise NumericalError("all outcomes have zero probability")
    return acc


def objective_and_gap(inst: EigInstance, z: Pair):
    """(f(x), duality gap) with both sides evaluated exactly.

    f(x) = lambda_max(A_0 + sum x_j A_j); the dual value at y is
    <A_0, y> + min_j <A_j, y>, and the gap is their difference.
    """
    x, y = z.x, z.y
    f_value = symmat.lambda_max(inst.combination(x))
    lower = symmat.frob_inner(inst.a0, y) + float(inst.trace_vector(y).min())
    return f_value, f_value - lower


def primal_value(inst: EigInstance, x: np.ndarray) -> float:
    return symmat.lambda_max(inst.combination(x))


def dual_value(inst: EigInstance, y: BlockSymMatrix) -> float:
    return symmat.frob_inner(inst.a0, y) + float(inst.trace_vector(y).min())


def build_saddle(inst: EigInstance) -> SaddleInstance:
    """Saddle instance with the exact operator and closed-form values.

    The declared Lipschitz constant is the effective one (literal constant
    times a_inf); the exact operator has no stochastic part (M = 0).
    """
    setup = build_setup(inst)
    problem = VIProblem(
        setup=setup,
        operator=lambda z: exact_operator(inst, z),
        lip_l=effective_lipschitz(inst),
        var_m=0.0,
        kind="saddle",
    )
    return SaddleInstance(
        problem=problem,
        primal_value=lambda x: primal_value(inst, x),
        dual_value=lambda y: dual_value(inst, y),
    )
