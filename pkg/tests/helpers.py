"""Shared test utilities, including the independent prox argmin oracle."""

import numpy as np


def project_simplex_l2(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > css)[0][-1]
    theta = css[rho] / float(rho + 1)
    return np.maximum(v - theta, 0.0)


def simplex_prox_argmin(z: np.ndarray, xi: np.ndarray, n_iters: int = 10_000,
                        step_c: float = 0.2) -> np.ndarray:
    """Generic numerical argmin of omega(u) + <xi - omega'(z), u> over the simplex.

    Projected subgradient with step c / sqrt(k), entirely independent of the
    closed-form path: entropy gradient plus Euclidean simplex projection.
    """
    z = np.asarray(z, dtype=float)
    xi = np.asarray(xi, dtype=float)
    lin = xi - (1.0 + np.log(z))
    u = np.full(len(z), 1.0 / len(z))
    floor = 1e-12
    for k in range(1, n_iters + 1):
        g = 1.0 + np.log(np.maximum(u, floor)) + lin
        u = project_simplex_l2(u - (step_c / np.sqrt(k)) * g)
    return u


def mild_simplex_point(setup, stream) -> np.ndarray:
    """Random interior simplex point bounded away from the boundary.

    The subgradient argmin oracle needs the prox target's coordinates above
    ~1e-3 to settle within its iteration budget, so cross-check instances
    mix a uniform floor into the draw.
    """
    g = setup.random_point(stream)
    g = g + 0.1
    return g / g.sum()


def rel_err(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / (1.0 + np.max(np.abs(b))))
