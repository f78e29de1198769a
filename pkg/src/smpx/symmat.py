"""Block-diagonal symmetric matrix algebra.

Matrices are stored as dense per-block arrays; the full N x N matrix is
never materialized.  Spectral computations go through numpy's symmetric
eigensolver, with eigenvalues reported in descending order.  Objects carry
an optional cached eigendecomposition so that chained entropy-map / matrix-
log calls (the spectahedron prox) pay for one decomposition, not two.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, InputError

_SYM_RTOL = 1e-12
_LOG_FLOOR = 1e-300  # eigenvalue clamp before logarithms


class BlockStructure:
    """Sizes (p_1, ..., p_m) of the diagonal blocks."""

    __slots__ = ("block_sizes", "total_dim", "max_block", "sum_sq")

    def __init__(self, block_sizes):
        sizes = tuple(int(p) for p in block_sizes)
        if not sizes or any(p < 1 for p in sizes):
            raise ConfigError(f"block sizes must be positive integers, got {sizes!r}")
        self.block_sizes = sizes
        self.total_dim = sum(sizes)
        self.max_block = max(sizes)
        self.sum_sq = sum(p * p for p in sizes)

    def __eq__(self, other):
        return isinstance(other, BlockStructure) and self.block_sizes == other.block_sizes

    def __hash__(self):
        return hash(self.block_sizes)

    def __repr__(self):
        return f"BlockStructure{self.block_sizes}"


class BlockSymMatrix:
    """Immutable block-diagonal symmetric matrix.

    Each block must be symmetric to within 1e-12 relative tolerance; blocks
    are exactly symmetrized on construction so downstream identities hold to
    round-off.
    """

    __slots__ = ("structure", "blocks", "_eig")

    def __init__(self, structure: BlockStructure, blocks, _validate: bool = True):
        self.structure = structure
        if _validate:
            blocks = [np.asarray(b, dtype=float) for b in blocks]
            if len(blocks) != len(structure.block_sizes):
                raise InputError(
                    f"expected {len(structure.block_sizes)} blocks, got {len(blocks)}"
                )
            fixed = []
            for b, p in zip(blocks, structure.block_sizes):
                if b.shape != (p, p):
                    raise InputError(f"block shape {b.shape} does not match size {p}")
                if not np.all(np.isfinite(b)):
                    raise InputError("non-finite entries in block")
                scale = np.max(np.abs(b)) if b.size else 0.0
                if np.max(np.abs(b - b.T)) > _SYM_RTOL * (1.0 + scale):
                    raise InputError("block is not symmetric within tolerance")
                fixed.append(0.5 * (b + b.T))
            blocks = fixed
        self.blocks = tuple(blocks)
        self._eig = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, structure: BlockStructure) -> "BlockSymMatrix":
        return cls(structure, [np.zeros((p, p)) for p in structure.block_sizes],
                   _validate=False)

    @classmethod
    def identity(cls, structure: BlockStructure, scale: float = 1.0) -> "BlockSymMatrix":
        return cls(structure, [scale * np.eye(p) for p in structure.block_sizes],
                   _validate=False)

    @classmethod
    def from_diag(cls, structure: BlockStructure, entries) -> "BlockSymMatrix":
        entries = np.asarray(entries, dtype=float)
        out, k = [], 0
        for p in structure.block_sizes:
            out.append(np.diag(entries[k:k + p]))
            k += p
        return cls(structure, out, _validate=False)

    # -- arithmetic (all return new objects) ---------------------------

    def _like(self, blocks) -> "BlockSymMatrix":
        return BlockSymMatrix(self.structure, blocks, _validate=False)

    def __add__(self, other):
        self._check(other)
        return self._like([a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check(other)
        return self._like([a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return self._like([-a for a in self.blocks])

    def __mul__(self, c):
        return self._like([float(c) * a for a in self.blocks])

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, BlockSymMatrix) or other.structure != self.structure:
            raise InputError("block structure mismatch")

    # -- basic queries -------------------------------------------------

    def trace(self) -> float:
        return float(sum(np.trace(b) for b in self.blocks))

    def block_traces(self) -> np.ndarray:
        return np.array([np.trace(b) for b in self.blocks])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(b)) for b in self.blocks)

    def dense(self) -> np.ndarray:
        """Full matrix; test/debug helper only."""
        n = self.structure.total_dim
        out = np.zeros((n, n))
        k = 0
        for b, p in zip(self.blocks, self.structure.block_sizes):
            out[k:k + p, k:k + p] = b
            k += p
        return out

    def __repr__(self):
        return f"BlockSymMatrix(sizes={self.structure.block_sizes})"


def eigh(a: BlockSymMatrix):
    """Per-block spectral decomposition, eigenvalues descending.

    Returns a list of (eigenvalues, eigenvectors) pairs; columns of the
    eigenvector matrix are orthonormal and a = Q diag(lam) Q^T per block.
    Equal-size blocks share one batched LAPACK call.
    """
    if not a.is_finite():
        raise InputError("non-finite entries")
    m = len(a.blocks)
    out = [None] * m
    by_size: dict[int, list[int]] = {}
    for i, b in enumerate(a.blocks):
        by_size.setdefault(b.shape[0], []).append(i)
    for _, idxs in by_size.items():
        if len(idxs) == 1:
            i = idxs[0]
            vals, vecs = np.linalg.eigh(a.blocks[i])
            out[i] = (vals[::-1].copy(), vecs[:, ::-1].copy())
        else:
            stack = np.stack([a.blocks[i] for i in idxs])
            vals, vecs = np.linalg.eigh(stack)
            for j, i in enumerate(idxs):
                out[i] = (vals[j, ::-1].copy(), vecs[j][:, ::-1].copy())
    return out


def cached_eigh(a: BlockSymMatrix):
    """Like :func:`eigh` but memoized on the matrix object."""
    if a._eig is None:
        a._eig = eigh(a)
    return a._eig


def _attach(a: BlockSymMatrix, decomp) -> BlockSymMatrix:
    a._eig = decomp
    return a


def eigenvalues(a: BlockSymMatrix) -> np.ndarray:
    """All eigenvalues, concatenated over blocks (each block descending)."""
    return np.concatenate([vals for vals, _ in cached_eigh(a)])


def entropy_map(b: BlockSymMatrix) -> BlockSymMatrix:
    """Normalized matrix exponential exp(b) / Tr(exp(b)).

    The largest eigenvalue across all blocks is subtracted before
    exponentiating, so the map stays finite for spectral ranges up to ~700.
    The result is PSD with unit total trace and carries its decomposition.
    """
    decomp = cached_eigh(b)
    shift = max(vals[0] for vals, _ in decomp)
    ws = [np.exp(vals - shift) for vals, _ in decomp]
    total = sum(float(w.sum()) for w in ws)
    blocks, newdec = [], []
    for (vals, q), w in zip(decomp, ws):
        lam = w / total
        blocks.append((q * lam) @ q.T)
        newdec.append((lam, q))
    out = BlockSymMatrix(b.structure, blocks, _validate=False)
    return _attach(out, newdec)


def matrix_log(a: BlockSymMatrix) -> BlockSymMatrix:
    """Principal logarithm through the eigendecomposition.

    Eigenvalues are clamped below at 1e-300 before the log, the same
    boundary guard the entropy geometry uses.
    """
    decomp = cached_eigh(a)
    blocks = []
    for vals, q in decomp:
        lam = np.log(np.maximum(vals, _LOG_FLOOR))
        blocks.append((q * lam) @ q.T)
    return BlockSymMatrix(a.structure, blocks, _validate=False)


def lambda_max(a: BlockSymMatrix) -> float:
    """Largest eigenvalue across blocks."""
    if a._eig is not None:
        return float(max(vals[0] for vals, _ in a._eig))
    return float(max(np.linalg.eigvalsh(b)[-1] for b in a.blocks))


def lambda_min(a: BlockSymMatrix) -> float:
    if a._eig is not None:
        return float(min(vals[-1] for vals, _ in a._eig))
    return float(min(np.linalg.eigvalsh(b)[0] for b in a.blocks))


def trace_norm(a: BlockSymMatrix) -> float:
    """Sum of absolute eigenvalues over all blocks."""
    return float(sum(np.abs(vals).sum() for vals, _ in cached_eigh(a)))


def spectral_norm(a: BlockSymMatrix) -> float:
    """Largest absolute eigenvalue; the norm conjugate to the trace norm."""
    if a._eig is not None:
        return float(max(max(abs(vals[0]), abs(vals[-1])) for vals, _ in a._eig))
    out = 0.0
    for b in a.blocks:
        vals = np.linalg.eigvalsh(b)
        out = max(out, abs(float(vals[0])), abs(float(vals[-1])))
    return out


def frob_inner(a: BlockSymMatrix, b: BlockSymMatrix) -> float:
    """Frobenius inner product Tr(a b)."""
    a._check(b)
    return float(sum(np.sum(x * y) for x, y in zip(a.blocks, b.blocks)))
