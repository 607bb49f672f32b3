"""Sampled complex functions on half-line grids, with CSV round-tripping."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["GridSpec", "GridFunction", "uniform_grid", "clustered_grid", "ResolutionError"]


class ResolutionError(ValueError):
    """The grid cannot resolve a requested scale."""


@dataclass(frozen=True)
class GridSpec:
    """Description of a half-line grid [0, y_max].

    ``mapping`` is ``"uniform"`` or ``"clustered"``; the clustered grid puts
    ``n_points`` nodes with spacing growing away from the wall at ``y = 0``.
    """

    y_max: float = 30.0
    n_points: int = 2048
    mapping: str = "uniform"
    cluster: float = 1.0

    def nodes(self) -> np.ndarray:
        if self.mapping == "uniform":
            return uniform_grid(self.y_max, self.n_points)
        if self.mapping == "clustered":
            return clustered_grid(self.y_max, self.n_points, self.cluster)
        raise ValueError(f"unknown grid mapping {self.mapping!r}")


def uniform_grid(y_max: float, n_points: int) -> np.ndarray:
    if y_max <= 0 or n_points < 2:
        raise ValueError("need y_max > 0 and at least two points")
    return np.linspace(0.0, y_max, n_points)


def clustered_grid(y_max: float, n_points: int, width: float) -> np.ndarray:
    """sinh-stretched grid, roughly uniform with spacing ~width/n near the wall."""
    if y_max <= 0 or n_points < 2 or width <= 0:
        raise ValueError("need y_max > 0, width > 0 and at least two points")
    s = np.linspace(0.0, 1.0, n_points)
    b = np.arcsinh(y_max / width)
    y = width * np.sinh(b * s)
    y[-1] = y_max
    return y


@dataclass
class GridFunction:
    """Complex samples ``values[j] = f(y[j])`` with optional wavenumber metadata."""

    y: np.ndarray
    values: np.ndarray
    alpha: float | None = None
    spec: GridSpec | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.y.shape != self.values.shape or self.y.ndim != 1:
            raise ValueError("y and values must be 1-D arrays of equal length")

    def __len__(self) -> int:
        return self.y.size

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.y, values, self.alpha, self.spec, dict(self.meta))

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def derivative(self, order: int = 1) -> "GridFunction":
        """Second-order finite-difference derivative on the (possibly non-uniform) grid."""
        v = self.values
        for _ in range(order):
            v = np.gradient(v, self.y, edge_order=2)
        return self.with_values(v)

    def l2(self) -> float:
        return float(np.sqrt(np.trapezoid(np.abs(self.values) ** 2, self.y)))

    def to_csv(self, path=None, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            for line in header.splitlines():
                buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["y", "re", "im"])
        for yy, vv in zip(self.y, self.values):
            w.writerow([repr(float(yy)), repr(float(vv.real)), repr(float(vv.imag))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "GridFunction":
        text = Path(source).read_text() if isinstance(source, (str, Path)) and Path(str(source)).exists() else str(source)
        rows = [r for r in csv.reader(line for line in text.splitlines() if not line.startswith("#"))]
        data = np.array([[float(x) for x in r] for r in rows[1:]])
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2])
