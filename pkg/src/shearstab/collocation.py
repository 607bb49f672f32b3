"""Chebyshev collocation for the Orr-Sommerfeld generalized eigenproblem.

Used as an independent check of the asymptotic dispersion relation.  The
half line is truncated at Y and mapped by y = L (1 - x) / (1 + x + 2L/Y), which
puts half the nodes in [0, L] and keeps the wall end densely resolved.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig

__all__ = ["cheb", "mapped_operators", "collocation_spectrum", "CollocationResult"]


def cheb(n: int):
    """Chebyshev-Gauss-Lobatto nodes x_j = cos(pi j / n) and the differentiation matrix."""
    x = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    d -= np.diag(d.sum(axis=1))
    return x, d


def mapped_operators(n: int, y_max: float, length: float):
    """Nodes y_j (y_0 = 0) and d/dy on the mapped Chebyshev grid."""
    x, dx = cheb(n)
    b = 2.0 * length / y_max
    y = length * (1 - x) / (1 + x + b)
    dydx = -length * (2 + b) / (1 + x + b) ** 2
    return y, dx / dydx[:, None]


@dataclass
class CollocationResult:
    eigenvalues: np.ndarray  # phase speeds c, sorted by decreasing Im c
    n: int
    y_max: float
    length: float

    @property
    def most_unstable(self) -> complex:
        if self.eigenvalues.size == 0:
            raise ValueError("no converged eigenvalues")
        return complex(self.eigenvalues[0])


def _raw(profile, alpha, nu, n, y_max, length):
    # second-order split: omega = (d^2 - alpha^2) psi,
    # U omega - U'' psi - eps (d^2 - alpha^2) omega = c omega
    y, d1 = mapped_operators(n, y_max, length)
    m = n + 1
    eye = np.eye(m)
    lap = d1 @ d1 - alpha**2 * eye
    eps = nu / (1j * alpha)
    u = np.real(profile.eval(y))
    u2 = np.real(profile.deriv2(y))
    a = np.zeros((2 * m, 2 * m), dtype=complex)
    b = np.zeros((2 * m, 2 * m), dtype=complex)
    a[:m, :m] = lap
    a[:m, m:] = -eye
    a[m:, :m] = -np.diag(u2)
    a[m:, m:] = np.diag(u) - eps * lap
    b[m:, m:] = eye
    # psi = 0 and psi' = 0 at both ends replace the boundary rows of each block
    for row, vec in ((0, eye[0]), (m - 1, eye[n]), (m, d1[0]), (2 * m - 1, d1[n])):
        a[row] = 0.0
        a[row, :m] = vec
        b[row] = 0.0
    w = eig(a, b, right=False)
    w = w[np.isfinite(w)]
    return w[np.abs(w) < 10 * abs(profile.u_plus) + 1]


def collocation_spectrum(profile, alpha: float, nu: float, n: int = 200, y_max: float | None = None,
                         length: float | None = None, match_tol: float = 1e-6) -> CollocationResult:
    """Eigenvalues c of OS psi = 0 (phase speeds) kept only when an n -> 2n refinement reproduces them.

    Defaults: Y = 10/alpha (at least 30) and L = 1.  The mode count is the
    coarse resolution n; agreement is absolute in c.
    """
    if not 64 <= n <= 1024:
        raise ValueError("n must lie in [64, 1024]")
    if alpha <= 0 or nu <= 0:
        raise ValueError("alpha and nu must be positive")
    profile.require_analytic("collocation")
    y_max = max(30.0, 10.0 / alpha) if y_max is None else y_max
    length = 1.0 if length is None else length
    try:
        coarse = _raw(profile, alpha, nu, n, y_max, length)
        fine = _raw(profile, alpha, nu, 2 * n, y_max, length)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"generalized eigensolver failed: {exc}") from exc
    keep = [c for c in coarse if fine.size and np.min(np.abs(fine - c)) <= match_tol]
    vals = np.array(sorted(keep, key=lambda c: -c.imag), dtype=complex)
    return CollocationResult(vals, n, y_max, length)
