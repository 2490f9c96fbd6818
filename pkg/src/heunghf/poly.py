"""Complex polynomial arithmetic, root finding and interpolation.

Polynomials are stored as ascending-degree coefficient arrays (``coeffs[k]``
multiplies ``x**k``).  Everything works in complex binary64; the supported
range is degree <= 12, beyond which :attr:`Poly.ill_conditioned` is set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_RELIABLE_DEGREE = 12


class RootFindingError(RuntimeError):
    """Raised when simultaneous iteration fails to converge.

    ``best`` holds the last iterate and ``residual`` its scaled residuals.
    """

    def __init__(self, message: str, best: np.ndarray, residual: np.ndarray):
        super().__init__(message)
        self.best = best
        self.residual = residual


@dataclass(frozen=True)
class Poly:
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        if self.coeffs.size == 1 and self.coeffs[0] == 0:
            return -1
        return self.coeffs.size - 1

    @property
    def ill_conditioned(self) -> bool:
        return self.degree > MAX_RELIABLE_DEGREE

    def __call__(self, x):
        return eval_poly(self, x)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=complex)
        a[: self.coeffs.size] += self.coeffs
        a[: other.coeffs.size] += other.coeffs
        return Poly(a)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly(np.convolve(self.coeffs, other.coeffs))
        return Poly(self.coeffs * other)

    __rmul__ = __mul__

    def monic(self) -> "Poly":
        return Poly(self.coeffs / self.coeffs[-1])

    def derivative(self) -> "Poly":
        if self.coeffs.size == 1:
            return Poly([0])
        return Poly(self.coeffs[1:] * np.arange(1, self.coeffs.size))


def as_poly(p) -> Poly:
    return p if isinstance(p, Poly) else Poly(p)


def eval_poly(p, x):
    """Horner evaluation; ``x`` may be a scalar or an array."""
    c = as_poly(p).coeffs
    x = np.asarray(x, dtype=complex)
    acc = np.full(x.shape, c[-1], dtype=complex)
    for ck in c[-2::-1]:
        acc = acc * x + ck
    return acc[()] if acc.ndim == 0 else acc


def _abs_scale(c: np.ndarray, x):
    # Running-error bound of Horner: sum |c_k| |x|^k.
    return eval_poly(np.abs(c), np.abs(x)).real


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    n = c.size - 1
    # Fujiwara-style radius bound, points offset from the real axis.
    ratios = np.abs(c[:-1] / c[-1]) ** (1.0 / np.arange(n, 0, -1))
    radius = max(2.0 * ratios.max(), 1e-3)
    k = np.arange(n)
    return 0.5 * radius * np.exp(1j * (2 * np.pi * k / n + 0.4))


def _aberth(c: np.ndarray, tol: float, max_iter: int):
    n = c.size - 1
    dc = c[1:] * np.arange(1, n + 1)
    z = _initial_guesses(c)
    converged = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        pv = eval_poly(c, z)
        dv = eval_poly(dc, z)
        converged = np.abs(pv) <= tol * _abs_scale(c, z)
        if converged.all():
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(converged | ~np.isfinite(corr), 0.0, corr)
        z = z - corr
    return z, converged


def _polish(c: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    dc = c[1:] * np.arange(1, c.size)
    for _ in range(steps):
        dv = eval_poly(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = eval_poly(c, z) / dv
        ok = np.isfinite(step)
        znew = np.where(ok, z - step, z)
        better = np.abs(eval_poly(c, znew)) < np.abs(eval_poly(c, z))
        z = np.where(better, znew, z)
    return z


def roots_of_poly(p, tol: float = 1e-12, max_iter: int = 500) -> np.ndarray:
    """All complex roots (with multiplicity) by Aberth-Ehrlich iteration.

    A root ``r`` is accepted once ``|p(r)| <= tol * sum_k |c_k| |r|^k``.
    If the simultaneous iteration stalls, the companion-matrix eigenvalues
    are Newton-polished and tried instead; if those also fail the
    residual test, :class:`RootFindingError` is raised.
    """
    p = as_poly(p)
    if p.degree < 1:
        raise ValueError("roots_of_poly needs degree >= 1")
    c = p.coeffs / p.coeffs[-1]
    # Exact zero roots split off first.
    nzero = int(np.argmax(c != 0))
    c = c[nzero:]
    found = [np.zeros(nzero, dtype=complex)]
    if c.size > 1:
        z, ok = _aberth(c, tol, max_iter)
        if ok.all():
            z = _polish(c, z)
        else:
            z = _polish(c, np.roots(c[::-1]).astype(complex))
            resid = np.abs(eval_poly(c, z)) / _abs_scale(c, z)
            if not (resid <= max(tol, 1e-10)).all():
                raise RootFindingError(
                    f"root iteration did not converge for degree {c.size - 1}",
                    z,
                    resid,
                )
        found.append(z)
    return np.concatenate(found)


def cluster_roots(roots: Sequence[complex], rel_tol: float = 1e-5):
    """Group nearly coincident roots; returns ``[(mean_root, multiplicity)]``.

    Two roots merge when closer than ``rel_tol * max(1, |r|)``.
    """
    remaining = list(np.asarray(roots, dtype=complex))
    out = []
    while remaining:
        r0 = remaining.pop(0)
        group = [r0]
        keep = []
        for r in remaining:
            if abs(r - r0) <= rel_tol * max(1.0, abs(r0)):
                group.append(r)
            else:
                keep.append(r)
        remaining = keep
        out.append((complex(np.mean(group)), len(group)))
    return out


def poly_from_roots(roots: Sequence[complex]) -> Poly:
    c = np.ones(1, dtype=complex)
    for r in roots:
        c = np.convolve(c, [-complex(r), 1.0])
    return Poly(c)


def interpolate_poly(nodes: Sequence[complex], values: Sequence[complex]) -> Poly:
    """Interpolating polynomial of degree < len(nodes).

    Solved as a Vandermonde system in the rescaled variable x / max|node|,
    which is unitary up to scaling for nodes spread on a circle.
    """
    x = np.asarray(nodes, dtype=complex)
    y = np.asarray(values, dtype=complex)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValueError("nodes and values must be equal-length 1-d sequences")
    dist = np.abs(x[:, None] - x[None, :]) + np.eye(x.size)
    if (dist == 0).any():
        raise ValueError("interpolation nodes must be pairwise distinct")
    scale = max(np.abs(x).max(), 1e-300)
    if x.size == 1:
        return Poly(y)
    V = np.vander(x / scale, increasing=True)
    c = np.linalg.solve(V, y)
    return Poly(c / scale ** np.arange(x.size))
