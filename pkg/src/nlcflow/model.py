"""Physics of the coupled velocity/director system.

Momentum balance: v_t + (v.grad)v - nu*lap(v) = -lam * div[ sigma + K ]
with the elastic stress sigma_ij = sum_m d_i d_m . d_j d_m and the kinematic
stress K_ij = alpha*G_i d_j - (1-alpha)*d_i G_j, where G = lap(d) - f(d) is
the molecular field and f is the unit-length penalty. Director transport:
d_t + (v.grad)d - alpha*(grad v)d + (1-alpha)*(grad^T v)d = gamma*G.

Pressure is never formed: every momentum right-hand side is Leray-projected.
Velocity-gradient convention: (grad v)_ij = dv_i/dx_j, which makes the
alpha = 1/2 kinematic transport purely corotational.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import (
    GridSpec,
    ScalarField,
    TensorField2,
    VectorField2,
    dealias,
    derivative,
    divergence_tensor,
    forward,
    inverse,
    laplacian,
    leray_project,
    leray_project_hat,
    max_divergence,
    sobolev_norm,
)


@dataclass(frozen=True)
class ModelParams:
    """Material parameters. alpha and eta have no defaults and must be given."""

    alpha: float
    eta: float
    nu: float = 1.0
    lam: float = 1.0
    gamma: float = 1.0
    dealias: bool = True

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not (0.0 < self.eta <= 1.0):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        for name in ("nu", "gamma"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        # lam = 0 decouples the director force from the flow; the exact
        # Taylor-Green decay oracle relies on that limit
        if self.lam < 0.0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")


@dataclass
class State:
    """Divergence-free velocity and director field at one instant."""

    v: VectorField2
    d: VectorField2
    t: float = 0.0

    @property
    def grid(self) -> GridSpec:
        return self.v.grid


def validate_state(state: State, div_tol: float = 1e-10, mean_tol: float = 1e-12) -> None:
    """Check the State invariants: divergence-free, mean-zero velocity."""
    scale = max(1.0, float(np.max(np.abs(state.v.stack()))))
    if max_divergence(state.v) > div_tol * scale:
        raise ValueError("velocity field is not divergence-free")
    if abs(state.v.x.mean()) > mean_tol * scale or abs(state.v.y.mean()) > mean_tol * scale:
        raise ValueError("velocity field must have zero mean")


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy components and instantaneous dissipation rates."""

    kinetic: float
    elastic: float
    penalty: float
    total: float
    visc_dissipation: float
    rot_dissipation: float
    quantity_a: float


def penalty_f(d: VectorField2, eta: float, use_dealias: bool = False) -> VectorField2:
    """Unit-length penalty force f(d) = eta^-2 (|d|^2 - 1) d, pointwise."""
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    dx, dy = d.x.values, d.y.values
    s = (dx ** 2 + dy ** 2 - 1.0) / eta ** 2
    out = VectorField2.from_arrays(d.grid, s * dx, s * dy)
    if use_dealias:
        out = VectorField2(dealias(out.x), dealias(out.y))
    return out


def potential_F(d: VectorField2, eta: float) -> ScalarField:
    """Penalty density F(d) = (4 eta^2)^-1 (|d|^2 - 1)^2, pointwise."""
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    sq = d.x.values ** 2 + d.y.values ** 2 - 1.0
    return ScalarField(d.grid, sq ** 2 / (4.0 * eta ** 2))


def molecular_field(d: VectorField2, eta: float, use_dealias: bool = False) -> VectorField2:
    """G = lap(d) - f(d); vanishes at equilibria of the director."""
    f = penalty_f(d, eta, use_dealias)
    return VectorField2.from_arrays(
        d.grid,
        laplacian(d.x).values - f.x.values,
        laplacian(d.y).values - f.y.values,
    )


def ericksen_stress(d: VectorField2, use_dealias: bool = False) -> TensorField2:
    """Elastic stress with entries sigma_ij = sum_m (d_i d_m)(d_j d_m)."""
    gx = [derivative(c, "x", 1).values for c in d.components]
    gy = [derivative(c, "y", 1).values for c in d.components]
    txx = gx[0] ** 2 + gx[1] ** 2
    txy = gx[0] * gy[0] + gx[1] * gy[1]
    tyy = gy[0] ** 2 + gy[1] ** 2
    t = TensorField2.from_arrays(d.grid, txx, txy, txy.copy(), tyy)
    if use_dealias:
        t = TensorField2(*(dealias(e) for e in (t.xx, t.xy, t.yx, t.yy)))
    return t


def kinematic_stress(d: VectorField2, g: VectorField2, alpha: float) -> TensorField2:
    """Transport stress K_ij = alpha*g_i d_j - (1-alpha)*d_i g_j.

    Antisymmetric at alpha = 1/2 (pure corotational coupling).
    """
    dv, gv = d.stack(), g.stack()
    entries = [
        alpha * gv[i] * dv[j] - (1.0 - alpha) * dv[i] * gv[j]
        for i in (0, 1)
        for j in (0, 1)
    ]
    return TensorField2.from_arrays(d.grid, *entries)


def _advection(u: VectorField2, w: VectorField2) -> np.ndarray:
    """(u.grad)w as a (2, n, n) array of pointwise products."""
    wx = [derivative(c, "x", 1).values for c in w.components]
    wy = [derivative(c, "y", 1).values for c in w.components]
    ux, uy = u.x.values, u.y.values
    return np.stack([ux * wx[0] + uy * wy[0], ux * wx[1] + uy * wy[1]])


def momentum_explicit_rhs(state: State, params: ModelParams) -> VectorField2:
    """All momentum terms except the implicit nu*lap(v), Leray-projected.

    Composed from the public operators; the integrator uses the fused
    spectral evaluation in `explicit_rhs_hat`, which must agree with this.
    """
    g = state.grid
    adv = _advection(state.v, state.v)
    mol = molecular_field(state.d, params.eta, params.dealias)
    sig = ericksen_stress(state.d)
    kin = kinematic_stress(state.d, mol, params.alpha)
    entries = []
    for name in ("xx", "xy", "yx", "yy"):
        e = ScalarField(g, getattr(sig, name).values + getattr(kin, name).values)
        entries.append(dealias(e) if params.dealias else e)
    stress_div = divergence_tensor(TensorField2(*entries))
    if params.dealias:
        adv = np.stack([dealias(ScalarField(g, a)).values for a in adv])
    rhs = VectorField2.from_arrays(
        g,
        -adv[0] - params.lam * stress_div.x.values,
        -adv[1] - params.lam * stress_div.y.values,
    )
    return leray_project(rhs)


def director_explicit_rhs(state: State, params: ModelParams) -> VectorField2:
    """All director terms except the implicit gamma*lap(d)."""
    g = state.grid
    adv = _advection(state.v, state.d)
    vx = [derivative(c, "x", 1).values for c in state.v.components]
    vy = [derivative(c, "y", 1).values for c in state.v.components]
    d0, d1 = state.d.x.values, state.d.y.values
    f = penalty_f(state.d, params.eta, params.dealias)
    a, b = params.alpha, 1.0 - params.alpha
    # ((grad v) d)_i = sum_j (d_j v_i) d_j ; ((grad^T v) d)_i = sum_j (d_i v_j) d_j
    stretch = np.stack([vx[0] * d0 + vy[0] * d1, vx[1] * d0 + vy[1] * d1])
    co = np.stack([vx[0] * d0 + vx[1] * d1, vy[0] * d0 + vy[1] * d1])
    rhs = -adv + a * stretch - b * co - params.gamma * f.stack()
    if params.dealias:
        rhs = np.stack([dealias(ScalarField(g, r)).values for r in rhs])
    return VectorField2.from_arrays(g, rhs[0], rhs[1])


def explicit_rhs_hat(
    grid: GridSpec,
    params: ModelParams,
    vh: np.ndarray,
    dh: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Fused spectral evaluation of both explicit right-hand sides.

    Takes and returns (2, n, n/2+1) spectrum stacks; transforms are batched
    so one step costs two FFT rounds plus pointwise work. Must match the
    composed operators above to rounding error (see tests).
    """
    n = grid.n
    batch = np.concatenate(
        [vh, grid.ikx * vh, grid.iky * vh, dh, grid.ikx * dh, grid.iky * dh, -grid.k_sq * dh]
    )
    phys = inverse(batch, n)
    v, vx, vy = phys[0:2], phys[2:4], phys[4:6]
    d, dx, dy = phys[6:8], phys[8:10], phys[10:12]
    lap_d = phys[12:14]

    s = (d[0] ** 2 + d[1] ** 2 - 1.0) / params.eta ** 2
    f = s * d
    if params.dealias:
        f = inverse(forward(f) * grid.dealias_mask, n)
    g_mol = lap_d - f

    a, b = params.alpha, 1.0 - params.alpha
    txx = dx[0] ** 2 + dx[1] ** 2 + a * g_mol[0] * d[0] - b * d[0] * g_mol[0]
    txy = dx[0] * dy[0] + dx[1] * dy[1] + a * g_mol[0] * d[1] - b * d[0] * g_mol[1]
    tyx = dx[0] * dy[0] + dx[1] * dy[1] + a * g_mol[1] * d[0] - b * d[1] * g_mol[0]
    tyy = dy[0] ** 2 + dy[1] ** 2 + a * g_mol[1] * d[1] - b * d[1] * g_mol[1]

    adv = np.stack([v[0] * vx[0] + v[1] * vy[0], v[0] * vx[1] + v[1] * vy[1]])
    rhs_d = np.stack(
        [
            -(v[0] * dx[0] + v[1] * dy[0])
            + a * (vx[0] * d[0] + vy[0] * d[1])
            - b * (vx[0] * d[0] + vx[1] * d[1])
            - params.gamma * f[0],
            -(v[0] * dx[1] + v[1] * dy[1])
            + a * (vx[1] * d[0] + vy[1] * d[1])
            - b * (vy[0] * d[0] + vy[1] * d[1])
            - params.gamma * f[1],
        ]
    )

    hats = forward(np.concatenate([adv, np.stack([txx, txy, tyx, tyy]), rhs_d]))
    if params.dealias:
        hats = hats * grid.dealias_mask
    adv_h, t_h, rhs_d_h = hats[0:2], hats[2:6], hats[6:8]

    nv = np.empty_like(vh)
    nv[0] = -adv_h[0] - params.lam * (grid.ikx * t_h[0] + grid.iky * t_h[1])
    nv[1] = -adv_h[1] - params.lam * (grid.ikx * t_h[2] + grid.iky * t_h[3])
    return leray_project_hat(grid, nv), rhs_d_h


def state_to_hat(state: State) -> tuple[np.ndarray, np.ndarray]:
    return forward(state.v.stack()), forward(state.d.stack())


def hat_to_state(grid: GridSpec, vh: np.ndarray, dh: np.ndarray, t: float) -> State:
    v = inverse(vh, grid.n)
    d = inverse(dh, grid.n)
    return State(
        VectorField2.from_arrays(grid, v[0], v[1]),
        VectorField2.from_arrays(grid, d[0], d[1]),
        t,
    )


def energy(state: State, params: ModelParams) -> EnergyBreakdown:
    """Energy components and dissipation rates by grid quadrature h^2*sum."""
    g = state.grid
    quad = g.h ** 2

    kinetic = 0.5 * quad * float(np.sum(state.v.stack() ** 2))

    grad_d_sq = 0.0
    for c in state.d.components:
        grad_d_sq += float(np.sum(derivative(c, "x", 1).values ** 2))
        grad_d_sq += float(np.sum(derivative(c, "y", 1).values ** 2))
    elastic = 0.5 * params.lam * quad * grad_d_sq

    penalty = params.lam * quad * float(np.sum(potential_F(state.d, params.eta).values))

    grad_v_sq = 0.0
    for c in state.v.components:
        grad_v_sq += float(np.sum(derivative(c, "x", 1).values ** 2))
        grad_v_sq += float(np.sum(derivative(c, "y", 1).values ** 2))
    grad_v_sq *= quad

    mol = molecular_field(state.d, params.eta, params.dealias)
    mol_sq = quad * float(np.sum(mol.stack() ** 2))

    return EnergyBreakdown(
        kinetic=kinetic,
        elastic=elastic,
        penalty=penalty,
        total=kinetic + elastic + penalty,
        visc_dissipation=params.nu * grad_v_sq,
        rot_dissipation=params.lam * params.gamma * mol_sq,
        quantity_a=grad_v_sq + mol_sq,
    )


def state_norms(state: State) -> tuple[float, float]:
    """(|v|_H1, |d|_H2) spectral Sobolev norms used in diagnostics rows."""
    return sobolev_norm(state.v, 1.0), sobolev_norm(state.d, 2.0)
