"""Fourier representation of periodic fields on the unit torus.

Fields live on an n-by-n uniform grid over [0,1)^2 (row index = y, column
index = x). All differential operators are exact Fourier multipliers with
angular wavenumbers 2*pi*k for integer k in {-n/2, ..., n/2-1}. Real fields
are transformed with rfft2; the half-spectrum x-axis carries k in {0..n/2}
with the Nyquist column standing in for k = -n/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GridSpec:
    """Uniform n x n grid on the unit torus with integer wavenumbers."""

    n: int
    period: float = 1.0

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 8:
            raise ValueError(f"grid n must be even and >= 8, got {self.n}")
        if self.period != 1.0:
            raise ValueError("only the unit period is supported")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer frequencies in FFT order: 0..n/2-1, -n/2..-1."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(np.int64)

    @cached_property
    def kx_int(self) -> np.ndarray:
        """Half-spectrum x frequencies 0..n/2 (row vector)."""
        return np.fft.rfftfreq(self.n, d=1.0 / self.n)

    @cached_property
    def ky_int(self) -> np.ndarray:
        """Full-spectrum y frequencies (column vector)."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n)[:, None]

    @cached_property
    def ikx(self) -> np.ndarray:
        """First-derivative multiplier i*2*pi*kx, Nyquist column zeroed."""
        m = 1j * TWO_PI * self.kx_int
        m[self.n // 2] = 0.0
        return m

    @cached_property
    def iky(self) -> np.ndarray:
        """First-derivative multiplier i*2*pi*ky, Nyquist row zeroed."""
        m = 1j * TWO_PI * self.ky_int.copy()
        m[self.n // 2, 0] = 0.0
        return m

    @cached_property
    def k_sq(self) -> np.ndarray:
        """|2*pi*k|^2 on the half-spectrum layout (Nyquist included)."""
        return (TWO_PI ** 2) * (self.kx_int ** 2 + self.ky_int ** 2)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Two-thirds rule: keep modes with max(|k1|,|k2|) <= n/3."""
        cutoff = self.n / 3.0
        return (np.abs(self.kx_int) <= cutoff) & (np.abs(self.ky_int) <= cutoff)

    @cached_property
    def parseval_weight(self) -> np.ndarray:
        """Multiplicity of each half-spectrum column in the full spectrum."""
        w = np.full(self.n // 2 + 1, 2.0)
        w[0] = 1.0
        w[self.n // 2] = 1.0
        return w

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid (X, Y) of physical node coordinates, row index = y."""
        x = np.arange(self.n) * self.h
        return np.meshgrid(x, x)


def forward(values: np.ndarray) -> np.ndarray:
    """Real FFT of one field or a stack of fields (last two axes)."""
    return np.fft.rfft2(values, axes=(-2, -1))


def inverse(spec: np.ndarray, n: int) -> np.ndarray:
    """Inverse of `forward`, back to n x n physical samples."""
    return np.fft.irfft2(spec, s=(n, n), axes=(-2, -1))


@dataclass
class ScalarField:
    """Real periodic scalar field sampled on a GridSpec."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.n, self.grid.n):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def hat(self) -> np.ndarray:
        return forward(self.values)

    def mean(self) -> float:
        return float(self.values.mean())


@dataclass
class VectorField2:
    """Two-component vector field; both components share one grid."""

    x: ScalarField
    y: ScalarField

    def __post_init__(self):
        if self.x.grid != self.y.grid:
            raise ValueError("vector components must share one grid")

    @property
    def grid(self) -> GridSpec:
        return self.x.grid

    @property
    def components(self) -> tuple[ScalarField, ScalarField]:
        return (self.x, self.y)

    def stack(self) -> np.ndarray:
        """(2, n, n) array view of the component values."""
        return np.stack([self.x.values, self.y.values])

    @classmethod
    def from_arrays(cls, grid: GridSpec, vx: np.ndarray, vy: np.ndarray) -> "VectorField2":
        return cls(ScalarField(grid, vx), ScalarField(grid, vy))

    @classmethod
    def zero(cls, grid: GridSpec) -> "VectorField2":
        z = np.zeros((grid.n, grid.n))
        return cls.from_arrays(grid, z, z.copy())


@dataclass
class TensorField2:
    """2x2 tensor field with entries T_ij, i = row/component, j = column."""

    xx: ScalarField
    xy: ScalarField
    yx: ScalarField
    yy: ScalarField

    def __post_init__(self):
        grids = {f.grid for f in (self.xx, self.xy, self.yx, self.yy)}
        if len(grids) != 1:
            raise ValueError("tensor entries must share one grid")

    @property
    def grid(self) -> GridSpec:
        return self.xx.grid

    def entry(self, i: int, j: int) -> ScalarField:
        return ((self.xx, self.xy), (self.yx, self.yy))[i][j]

    @classmethod
    def from_arrays(cls, grid, txx, txy, tyx, tyy) -> "TensorField2":
        return cls(*(ScalarField(grid, a) for a in (txx, txy, tyx, tyy)))


def _axis_multiplier(grid: GridSpec, axis: str, order: int) -> np.ndarray:
    if axis == "x":
        mult = (1j * TWO_PI * grid.kx_int) ** order
        if order % 2 == 1:
            mult = mult.copy()
            mult[grid.n // 2] = 0.0
    elif axis == "y":
        mult = (1j * TWO_PI * grid.ky_int) ** order
        if order % 2 == 1:
            mult = mult.copy()
            mult[grid.n // 2, 0] = 0.0
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return mult


def derivative(f: ScalarField, axis: str, order: int = 1) -> ScalarField:
    """order-th spectral partial derivative along x or y.

    Odd orders zero the Nyquist mode, whose multiplier i*2*pi*k is not
    conjugate-symmetric for real fields.
    """
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    spec = f.hat() * _axis_multiplier(f.grid, axis, order)
    return ScalarField(f.grid, inverse(spec, f.grid.n))


def gradient(f: ScalarField) -> VectorField2:
    """(d/dx f, d/dy f)."""
    return VectorField2(derivative(f, "x", 1), derivative(f, "y", 1))


def laplacian(f: ScalarField) -> ScalarField:
    """Fourier multiplier -|2*pi*k|^2."""
    return ScalarField(f.grid, inverse(-f.grid.k_sq * f.hat(), f.grid.n))


def divergence(u: VectorField2) -> ScalarField:
    """d/dx u_x + d/dy u_y."""
    g = u.grid
    spec = g.ikx * forward(u.x.values) + g.iky * forward(u.y.values)
    return ScalarField(g, inverse(spec, g.n))


def divergence_tensor(t: TensorField2) -> VectorField2:
    """Row divergence (div T)_i = sum_j d_j T_ij."""
    g = t.grid
    out = []
    for row in ((t.xx, t.xy), (t.yx, t.yy)):
        spec = g.ikx * forward(row[0].values) + g.iky * forward(row[1].values)
        out.append(inverse(spec, g.n))
    return VectorField2.from_arrays(g, out[0], out[1])


def leray_project_hat(grid: GridSpec, uhat: np.ndarray) -> np.ndarray:
    """In-place-free Leray projection of a (2, n, n/2+1) spectrum stack.

    Removes the gradient part mode-by-mode and zeroes the mean mode.
    """
    kx, ky = grid.kx_int, grid.ky_int
    ksq = kx ** 2 + ky ** 2
    ksq_safe = np.where(ksq == 0.0, 1.0, ksq)
    kdotu = kx * uhat[0] + ky * uhat[1]
    out = np.empty_like(uhat)
    out[0] = uhat[0] - kx * kdotu / ksq_safe
    out[1] = uhat[1] - ky * kdotu / ksq_safe
    out[:, 0, 0] = 0.0
    return out


def leray_project(u: VectorField2) -> VectorField2:
    """Divergence-free part of u with the mean mode removed."""
    g = u.grid
    uhat = forward(u.stack())
    phys = inverse(leray_project_hat(g, uhat), g.n)
    return VectorField2.from_arrays(g, phys[0], phys[1])


def dealias(f: ScalarField) -> ScalarField:
    """Zero all modes with max(|k1|,|k2|) > n/3 (two-thirds rule)."""
    g = f.grid
    return ScalarField(g, inverse(f.hat() * g.dealias_mask, g.n))


def sobolev_norm(f: ScalarField | VectorField2, s: float) -> float:
    """Spectral H^s norm with the inhomogeneous weight (1+|2*pi*k|^2)^s.

    Fourier coefficients are normalized so that s=0 reproduces the L2(Q)
    norm; vector fields sum the squared norms of their components.
    """
    if s < 0:
        raise ValueError("Sobolev order s must be >= 0")
    fields = f.components if isinstance(f, VectorField2) else (f,)
    g = fields[0].grid
    weight = g.parseval_weight * (1.0 + g.k_sq) ** s
    total = 0.0
    for comp in fields:
        chat = comp.hat() / g.n ** 2
        total += float(np.sum(weight * (chat.real ** 2 + chat.imag ** 2)))
    return float(np.sqrt(total))


def l2_norm(f: ScalarField | VectorField2) -> float:
    return sobolev_norm(f, 0.0)


def max_divergence(u: VectorField2) -> float:
    """Max norm of the spectral divergence of u (physical samples)."""
    return float(np.max(np.abs(divergence(u).values)))
