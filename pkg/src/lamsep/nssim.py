"""Unsteady incompressible Navier-Stokes on an annular sector.

Staggered (MAC) grid in polar coordinates (theta, rho): tangential velocity on
theta-faces, radial velocity on rho-faces, pressure at cell centers.  The
solver advances with explicit advection-diffusion followed by a pressure
projection (first order in time, second order in space, quadratic ghost cells
at the radial walls).  Internally the flow runs in the +theta direction; the
wall-arc coordinate is s = delta * theta, so +theta is the wall-tangent
direction e1 of the arc geometry.

Boundary conditions: no-slip at the inner wall, the initial profile pinned at
the outer radius, the shear profile at the inflow plane, convective outflow.
The t = 0 diagnostic pressure anchors the theta-boundary values to two exact
properties of the initial field: the wall pressure gradient
nu*(a1/delta - a2) along the wall, and the centripetal radial balance
dp/drho = h(rho-delta)**2/rho.  The measured interior tangential gradient is
reported next to the wall-anchored formula, never asserted equal to it.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.integrate
import scipy.sparse
import scipy.sparse.linalg

from .errors import ConfigError, Diverged, ProbeOutsideGrid
from .field import LaminarParams, profile_h
from .geometry import ArcBoundary

POISSON_TOL = 1e-10


@dataclass(frozen=True)
class SimConfig:
    arc: ArcBoundary
    params: LaminarParams
    sector_angle: float = 0.5
    r_out: float | None = None       # default 2 * boundary-layer thickness
    n_s: int = 32
    n_r: int = 32
    dt: float | None = None          # default 0.4 of the stability limit
    t_end: float = 0.05
    outer_bc: str = "dirichlet_profile"
    inflow_bc: str = "laminar_profile"
    outflow_bc: str = "convective"
    nu_override: float | None = None  # test mode: >= 0 overrides params.nu

    @property
    def R_out(self) -> float:
        return 2.0 * self.params.bl if self.r_out is None else self.r_out

    @property
    def nu(self) -> float:
        return self.params.nu if self.nu_override is None else self.nu_override

    @property
    def effective_dt(self) -> float:
        return stable_dt(self) if self.dt is None else self.dt

    def validate(self) -> None:
        problems = []
        if self.n_s < 16 or self.n_r < 16:
            problems.append(f"grid must be at least 16x16, got {self.n_s}x{self.n_r}")
        if not np.isfinite(self.R_out) or self.R_out <= 0:
            problems.append(f"R_out must be finite and positive, got {self.R_out}")
        elif np.isfinite(self.params.bl) and self.R_out < 2.0 * self.params.bl:
            problems.append(f"R_out = {self.R_out} < 2*bl = {2 * self.params.bl}")
        if self.sector_angle <= 0:
            problems.append("sector_angle must be positive")
        if self.outer_bc != "dirichlet_profile" or self.inflow_bc != "laminar_profile":
            problems.append("only dirichlet_profile outer and laminar_profile inflow supported")
        if self.outflow_bc != "convective":
            problems.append("only convective outflow supported")
        if not problems:
            cfl = self.cfl()
            if cfl > 0.5:
                problems.append(f"CFL = {cfl:.3f} exceeds 0.5")
        if problems:
            raise ConfigError("; ".join(problems))

    def cfl(self) -> float:
        g = _grid(self)
        umax = float(np.max(np.abs(profile_h(self.params, g.rho_c - self.arc.delta))))
        return umax * self.effective_dt / min(self.arc.delta * g.dth, g.drh)

    def to_json(self) -> str:
        return json.dumps({
            "arc": json.loads(self.arc.to_json()),
            "params": json.loads(self.params.to_json()),
            "sector_angle": self.sector_angle,
            "r_out": self.r_out,
            "n_s": self.n_s,
            "n_r": self.n_r,
            "dt": self.dt,
            "t_end": self.t_end,
            "outer_bc": self.outer_bc,
            "inflow_bc": self.inflow_bc,
            "outflow_bc": self.outflow_bc,
        })

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        obj = json.loads(text)
        return cls(
            arc=ArcBoundary.from_json(json.dumps(obj["arc"])),
            params=LaminarParams.from_json(json.dumps(obj["params"])),
            sector_angle=float(obj.get("sector_angle", 0.5)),
            r_out=obj.get("r_out"),
            n_s=int(obj.get("n_s", 32)),
            n_r=int(obj.get("n_r", 32)),
            dt=obj.get("dt"),
            t_end=float(obj.get("t_end", 0.05)),
            outer_bc=obj.get("outer_bc", "dirichlet_profile"),
            inflow_bc=obj.get("inflow_bc", "laminar_profile"),
            outflow_bc=obj.get("outflow_bc", "convective"),
        )


def stable_dt(cfg: SimConfig) -> float:
    """0.4 of the explicit advective/viscous stability limit."""
    g = _grid(cfg)
    umax = float(np.max(np.abs(profile_h(cfg.params, g.rho_c - cfg.arc.delta))))
    h_min = min(cfg.arc.delta * g.dth, g.drh)
    dt_adv = h_min / umax if umax > 0 else math.inf
    nu = cfg.nu
    dt_visc = 0.25 * h_min**2 / nu if nu > 0 else math.inf
    return 0.4 * min(dt_adv, dt_visc)


@dataclass(frozen=True)
class SimState:
    us: np.ndarray   # (n_s + 1, n_r) tangential velocity at theta-faces
    ur: np.ndarray   # (n_s, n_r + 1) radial velocity at rho-faces
    p: np.ndarray    # (n_s, n_r) pressure at cell centers
    t: float
    # fixed wall-anchored background pressure driving the momentum update;
    # the projection potential only corrects divergence on top of it
    p_anchor: np.ndarray | None = None


class _Grid:
    def __init__(self, cfg: SimConfig):
        self.delta = cfg.arc.delta
        self.dth = cfg.sector_angle / cfg.n_s
        self.drh = cfg.R_out / cfg.n_r
        self.rho_f = self.delta + self.drh * np.arange(cfg.n_r + 1)
        self.rho_c = self.delta + self.drh * (np.arange(cfg.n_r) + 0.5)
        self.theta_f = self.dth * np.arange(cfg.n_s + 1)
        self.theta_c = self.dth * (np.arange(cfg.n_s) + 0.5)


@lru_cache(maxsize=16)
def _grid(cfg: SimConfig) -> _Grid:
    return _Grid(cfg)


# ----------------------------------------------------------------------------
# ghost cells (quadratic through the boundary value: second-order walls)
# ----------------------------------------------------------------------------


def _us_with_radial_ghosts(cfg: SimConfig, us: np.ndarray) -> np.ndarray:
    """Append ghost columns below the wall (value 0) and above the outer radius."""
    outer = profile_h(cfg.params, cfg.R_out)
    ghost_wall = -2.0 * us[:, 0] + us[:, 1] / 3.0
    ghost_out = (8.0 / 3.0) * outer - 2.0 * us[:, -1] + us[:, -2] / 3.0
    return np.concatenate([ghost_wall[:, None], us, ghost_out[:, None]], axis=1)


def _ur_with_theta_ghosts(cfg: SimConfig, ur: np.ndarray) -> np.ndarray:
    """Prepend the inflow ghost (u_r = 0 on the plane), append outflow zero-gradient."""
    ghost_in = -2.0 * ur[0, :] + ur[1, :] / 3.0
    ghost_out = ur[-1, :]
    return np.concatenate([ghost_in[None, :], ur, ghost_out[None, :]], axis=0)


def wall_noslip_residual(cfg: SimConfig, state: SimState) -> float:
    """Tangential wall velocity implied by the ghost construction (0 to roundoff)."""
    usg = _us_with_radial_ghosts(cfg, state.us)
    wall = (3.0 * usg[:, 0] + 6.0 * usg[:, 1] - usg[:, 2]) / 8.0
    return float(np.max(np.abs(wall)))


# ----------------------------------------------------------------------------
# discrete operators
# ----------------------------------------------------------------------------


def _tangential_rhs(cfg: SimConfig, us: np.ndarray, ur: np.ndarray):
    """(-advection, viscous) tangential terms at interior theta-faces i=1..n_s-1."""
    g = _grid(cfg)
    usg = _us_with_radial_ghosts(cfg, us)           # (n_s+1, n_r+2)
    rc = g.rho_c[None, :]
    us_i = us[1:-1, :]                               # interior faces

    dus_dr = (usg[1:-1, 2:] - usg[1:-1, :-2]) / (2 * g.drh)
    dus_dth = (us[2:, :] - us[:-2, :]) / (2 * g.dth)
    # radial velocity averaged to the us nodes
    ur_c = 0.5 * (ur[:, :-1] + ur[:, 1:])            # (n_s, n_r) at theta-centers
    ur_at_us = 0.5 * (ur_c[:-1, :] + ur_c[1:, :])    # (n_s-1, n_r) at interior faces
    adv = ur_at_us * dus_dr + us_i / rc * dus_dth + ur_at_us * us_i / rc

    lap_r = (
        g.rho_f[None, 1:] * (usg[1:-1, 2:] - usg[1:-1, 1:-1])
        - g.rho_f[None, :-1] * (usg[1:-1, 1:-1] - usg[1:-1, :-2])
    ) / (rc * g.drh**2)
    lap_th = (us[2:, :] - 2 * us_i + us[:-2, :]) / (rc**2 * g.dth**2)
    dur_dth = (ur_c[1:, :] - ur_c[:-1, :]) / g.dth
    visc = lap_r + lap_th - us_i / rc**2 + 2.0 / rc**2 * dur_dth
    return -adv, visc


def _radial_rhs(cfg: SimConfig, us: np.ndarray, ur: np.ndarray):
    """(-advection, viscous) radial terms at interior rho-faces j=1..n_r-1."""
    g = _grid(cfg)
    urg = _ur_with_theta_ghosts(cfg, ur)             # (n_s+2, n_r+1)
    rf = g.rho_f[None, 1:-1]
    ur_i = ur[:, 1:-1]

    dur_dr = (ur[:, 2:] - ur[:, :-2]) / (2 * g.drh)
    dur_dth = (urg[2:, 1:-1] - urg[:-2, 1:-1]) / (2 * g.dth)
    # tangential velocity averaged to the ur nodes
    us_f = 0.5 * (us[:, :-1] + us[:, 1:])            # (n_s+1, n_r-1) at rho-faces
    us_at_ur = 0.5 * (us_f[:-1, :] + us_f[1:, :])    # (n_s, n_r-1)
    adv = ur_i * dur_dr + us_at_ur / rf * dur_dth - us_at_ur**2 / rf

    lap_r = (
        g.rho_c[None, 1:] * (ur[:, 2:] - ur_i)
        - g.rho_c[None, :-1] * (ur_i - ur[:, :-2])
    ) / (rf * g.drh**2)
    lap_th = (urg[2:, 1:-1] - 2 * ur_i + urg[:-2, 1:-1]) / (rf**2 * g.dth**2)
    dus_dth = (us_f[1:, :] - us_f[:-1, :]) / g.dth
    visc = lap_r + lap_th - ur_i / rf**2 - 2.0 / rf**2 * dus_dth
    return -adv, visc


def divergence(cfg: SimConfig, us: np.ndarray, ur: np.ndarray) -> np.ndarray:
    g = _grid(cfg)
    rad = (g.rho_f[None, 1:] * ur[:, 1:] - g.rho_f[None, :-1] * ur[:, :-1]) / (
        g.rho_c[None, :] * g.drh
    )
    tan = (us[1:, :] - us[:-1, :]) / (g.rho_c[None, :] * g.dth)
    return rad + tan


# ----------------------------------------------------------------------------
# pressure solves
# ----------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _poisson_neumann(cfg: SimConfig):
    """Flux-form Laplacian with Neumann on every boundary (projection operator)."""
    return _assemble(cfg, dirichlet_theta=False)


@lru_cache(maxsize=16)
def _poisson_dirichlet_theta(cfg: SimConfig):
    """Flux-form Laplacian with Dirichlet theta-planes, Neumann radial walls."""
    return _assemble(cfg, dirichlet_theta=True)


def _assemble(cfg: SimConfig, dirichlet_theta: bool):
    g = _grid(cfg)
    n_s, n_r = cfg.n_s, cfg.n_r
    n = n_s * n_r

    def k(i, j):
        return i * n_r + j

    rows, cols, vals = [], [], []
    diag = np.zeros(n)

    def couple(ka, kb, c):
        rows.append(ka)
        cols.append(kb)
        vals.append(-c)
        diag[ka] += c

    for i in range(n_s):
        for j in range(n_r):
            me = k(i, j)
            if j + 1 < n_r:
                couple(me, k(i, j + 1), g.rho_f[j + 1] * g.dth / g.drh)
            if j > 0:
                couple(me, k(i, j - 1), g.rho_f[j] * g.dth / g.drh)
            c_th = g.drh / (g.rho_c[j] * g.dth)
            if i + 1 < n_s:
                couple(me, k(i + 1, j), c_th)
            elif dirichlet_theta:
                diag[me] += 2.0 * c_th
            if i > 0:
                couple(me, k(i - 1, j), c_th)
            elif dirichlet_theta:
                diag[me] += 2.0 * c_th

    rows.extend(range(n))
    cols.extend(range(n))
    vals.extend(diag)
    mat = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    precond = scipy.sparse.diags(1.0 / mat.diagonal())
    return mat, precond


def _cg_solve(mat, precond, b: np.ndarray) -> np.ndarray:
    x, info = scipy.sparse.linalg.cg(
        mat, b, rtol=0.0, atol=POISSON_TOL * max(1.0, float(np.linalg.norm(b))),
        maxiter=20000, M=precond,
    )
    if info != 0:
        raise Diverged(f"pressure CG failed to converge (info={info})")
    return x


def _centripetal_head(cfg: SimConfig, rho) -> np.ndarray:
    """F(rho) = integral_delta^rho h(r'-delta)^2 / r' dr': the radial pressure head."""
    delta = cfg.arc.delta

    def integrand(t):
        return profile_h(cfg.params, t - delta) ** 2 / t

    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    out = np.zeros_like(rho)
    order = np.argsort(rho)
    prev_rho, prev_val = delta, 0.0
    for idx in order:
        val, _ = scipy.integrate.quad(integrand, prev_rho, rho[idx], epsabs=1e-13, epsrel=1e-12)
        out[idx] = prev_val + val
        prev_rho, prev_val = rho[idx], out[idx]
    return out


def initial_pressure(cfg: SimConfig, us: np.ndarray, ur: np.ndarray) -> np.ndarray:
    """Diagnostic t = 0 pressure on the sector.

    Radial walls carry the momentum-consistent Neumann data (centripetal at
    t = 0); the theta-planes carry Dirichlet values built from the exact wall
    gradient nu*(a1/delta - a2) and the exact radial balance of the circular
    initial field.
    """
    g = _grid(cfg)
    n_s, n_r = cfg.n_s, cfg.n_r
    nu = cfg.nu
    kwall = nu * (cfg.params.alpha1 / g.delta - cfg.params.alpha2)

    # radial momentum data of the circular initial state (u_r = 0, theta-uniform,
    # so only the centripetal term survives on the radial faces)
    us_at_rf = np.zeros(n_r + 1)
    us_at_rf[1:-1] = 0.5 * (us[0, :-1] + us[0, 1:])
    us_at_rf[0] = 0.0
    us_at_rf[-1] = profile_h(cfg.params, cfg.R_out)
    # R = nu*lap(u) - (u.grad)u: the radial part is the centrifugal u_theta^2/rho
    r_rho = us_at_rf**2 / g.rho_f

    # net R-flux through the interior radial faces; the prescribed wall/outer
    # Neumann data equals the boundary R-flux, so those faces drop out, and the
    # theta-face contributions of a theta-uniform column cancel.
    flux_out = np.zeros(n_r)
    flux_out[:-1] += g.rho_f[1:-1] * r_rho[1:-1] * g.dth
    flux_out[1:] -= g.rho_f[1:-1] * r_rho[1:-1] * g.dth
    b = np.tile(-flux_out, (n_s, 1))

    # Dirichlet data on the theta-planes
    head = _centripetal_head(cfg, g.rho_c)
    p_in = head
    p_out = head + kwall * g.delta * cfg.sector_angle
    c_th = g.drh / (g.rho_c * g.dth)
    b[0, :] += 2.0 * c_th * p_in
    b[-1, :] += 2.0 * c_th * p_out

    mat, precond = _poisson_dirichlet_theta(cfg)
    return _cg_solve(mat, precond, b.ravel()).reshape(n_s, n_r)


def init_sim(cfg: SimConfig) -> SimState:
    """Sample the shear profile on the grid and run the t = 0 pressure solve."""
    cfg.validate()
    g = _grid(cfg)
    us = np.tile(profile_h(cfg.params, g.rho_c - g.delta), (cfg.n_s + 1, 1))
    ur = np.zeros((cfg.n_s, cfg.n_r + 1))
    p = initial_pressure(cfg, us, ur)
    return SimState(us=us, ur=ur, p=p, t=0.0, p_anchor=p)


def step(state: SimState, cfg: SimConfig) -> SimState:
    """Advance one time step: explicit advection-diffusion against the anchored
    background pressure, then a projection for incompressibility."""
    g = _grid(cfg)
    dt = cfg.effective_dt
    nu = cfg.nu
    us, ur = state.us, state.ur

    neg_adv_t, visc_t = _tangential_rhs(cfg, us, ur)
    neg_adv_r, visc_r = _radial_rhs(cfg, us, ur)

    us_star = us.copy()
    us_star[1:-1, :] += dt * (neg_adv_t + nu * visc_t)
    if state.p_anchor is not None:
        pa = state.p_anchor
        us_star[1:-1, :] -= dt * (pa[1:, :] - pa[:-1, :]) / (g.rho_c[None, :] * g.dth)
    # the inflow face (us[0]) is never updated: it keeps its initial profile;
    # the outflow face is advected out
    c_out = np.maximum(us[-1, :], 0.0)
    us_star[-1, :] = us[-1, :] - dt * c_out / (g.rho_c * g.dth) * (us[-1, :] - us[-2, :])

    ur_star = ur.copy()
    ur_star[:, 1:-1] += dt * (neg_adv_r + nu * visc_r)
    if state.p_anchor is not None:
        pa = state.p_anchor
        ur_star[:, 1:-1] -= dt * (pa[:, 1:] - pa[:, :-1]) / g.drh
    ur_star[:, 0] = 0.0
    ur_star[:, -1] = 0.0

    # global mass balance before the all-Neumann projection
    flux_in = float(np.sum(us_star[0, :])) * g.drh
    flux_out = float(np.sum(us_star[-1, :])) * g.drh
    us_star[-1, :] += (flux_in - flux_out) / (cfg.n_r * g.drh)

    div = divergence(cfg, us_star, ur_star)
    vol = (g.rho_c * g.dth * g.drh)[None, :]
    b = div * vol / dt
    b -= b.mean()
    mat, precond = _poisson_neumann(cfg)
    phi = _cg_solve(mat, precond, -b.ravel()).reshape(cfg.n_s, cfg.n_r)
    phi -= phi.mean()

    us_new = us_star.copy()
    us_new[1:-1, :] -= dt * (phi[1:, :] - phi[:-1, :]) / (g.rho_c[None, :] * g.dth)
    ur_new = ur_star.copy()
    ur_new[:, 1:-1] -= dt * (phi[:, 1:] - phi[:, :-1]) / g.drh

    umax0 = float(np.max(np.abs(profile_h(cfg.params, g.rho_c - g.delta))))
    if float(np.max(np.abs(us_new))) > 10.0 * max(umax0, 1e-30):
        raise Diverged(f"max tangential velocity exceeded 10x the initial maximum at t={state.t}")
    p_total = phi if state.p_anchor is None else state.p_anchor + phi
    return SimState(us=us_new, ur=ur_new, p=p_total, t=state.t + dt,
                    p_anchor=state.p_anchor)


# ----------------------------------------------------------------------------
# probes and the experiment driver
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeSample:
    r: float
    u_t: float
    visc_t: float
    gradp_t: float
    wall_anchor_gradp_t: float
    ratio: float


def _probe_index(cfg: SimConfig, r: float) -> int:
    g = _grid(cfg)
    if not 0.0 < r < cfg.R_out:
        raise ProbeOutsideGrid(f"probe r = {r} outside (0, {cfg.R_out})")
    return int(np.clip(round(r / g.drh - 0.5), 0, cfg.n_r - 1))


def probe_diagnostics(state: SimState, cfg: SimConfig, r_probe_list) -> list[ProbeSample]:
    """Discrete tangential budget at mid-sector: viscous term, pressure gradient,
    and their material-derivative ratio against the local speed."""
    g = _grid(cfg)
    nu = cfg.nu
    i_mid = cfg.n_s // 2
    _, visc_t = _tangential_rhs(cfg, state.us, state.ur)
    kwall = nu * (cfg.params.alpha1 / g.delta - cfg.params.alpha2)
    out = []
    for r in r_probe_list:
        j = _probe_index(cfg, r)
        r_node = float(g.rho_c[j] - g.delta)
        visc = nu * float(visc_t[i_mid - 1, j])
        gradp = float(state.p[i_mid, j] - state.p[i_mid - 1, j]) / (g.rho_c[j] * g.dth)
        u0 = float(state.us[i_mid, j])
        out.append(ProbeSample(
            r=r_node, u_t=u0, visc_t=visc, gradp_t=gradp,
            wall_anchor_gradp_t=kwall * g.delta / (g.delta + r_node),
            ratio=(visc - gradp) / u0,
        ))
    return out


def measure_ratio(state: SimState, cfg: SimConfig, r_probe_list) -> list[tuple[float, float]]:
    """Discrete <nu*lap(u) - grad p, t_hat> / <u0, t_hat> at each probe radius."""
    return [(p.r, p.ratio) for p in probe_diagnostics(state, cfg, r_probe_list)]


def kinetic_energy(state: SimState, cfg: SimConfig) -> float:
    g = _grid(cfg)
    us_c = 0.5 * (state.us[:-1, :] + state.us[1:, :])
    ur_c = 0.5 * (state.ur[:, :-1] + state.ur[:, 1:])
    vol = (g.rho_c * g.dth * g.drh)[None, :]
    return float(0.5 * np.sum((us_c**2 + ur_c**2) * vol))


@dataclass(frozen=True)
class ExperimentReport:
    probe_r: list
    t0_samples: list
    times: np.ndarray
    u_t: np.ndarray                  # (n_times, n_probes)
    kinetic_energy: np.ndarray
    first_reversal: list             # per probe: time or None
    final_state: SimState | None = None

    def rows(self):
        """Long-format rows (t, probe_r, u_t, ratio); ratio is the t=0 value."""
        t0_ratio = {s.r: s.ratio for s in self.t0_samples}
        for k, t in enumerate(self.times):
            for col, r in enumerate(self.probe_r):
                yield t, r, self.u_t[k, col], t0_ratio.get(r, float("nan"))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "probe_r", "u_t", "ratio"])
            for t, r, u, ratio in self.rows():
                writer.writerow([f"{t:.17g}", f"{r:.17g}", f"{u:.17g}", f"{ratio:.17g}"])


def run_experiment(cfg: SimConfig, r_probe_list=None, record_every: int = 1) -> ExperimentReport:
    """Step the sector flow to t_end, recording near-wall tangential velocity."""
    if r_probe_list is None:
        scale = min(cfg.params.bl, cfg.arc.delta)
        r_probe_list = [0.05 * scale, 0.1 * scale, 0.2 * scale]
    state = init_sim(cfg)
    # probes snap to grid nodes; drop duplicates a coarse grid may produce
    probe_idx = list(dict.fromkeys(_probe_index(cfg, r) for r in r_probe_list))
    g = _grid(cfg)
    probe_r = [float(g.rho_c[j] - g.delta) for j in probe_idx]
    t0_samples = probe_diagnostics(state, cfg, probe_r)
    i_mid = cfg.n_s // 2

    times = [0.0]
    series = [[float(state.us[i_mid, j]) for j in probe_idx]]
    energy = [kinetic_energy(state, cfg)]
    n_steps = max(1, int(round(cfg.t_end / cfg.effective_dt)))
    for k in range(n_steps):
        state = step(state, cfg)
        if (k + 1) % record_every == 0 or k == n_steps - 1:
            times.append(state.t)
            series.append([float(state.us[i_mid, j]) for j in probe_idx])
            energy.append(kinetic_energy(state, cfg))

    u_t = np.array(series)
    first_rev = []
    for col in range(u_t.shape[1]):
        hits = np.nonzero(u_t[:, col] < 0.0)[0]
        first_rev.append(float(times[hits[0]]) if hits.size else None)
    return ExperimentReport(
        probe_r=probe_r,
        t0_samples=t0_samples,
        times=np.array(times),
        u_t=u_t,
        kinetic_energy=np.array(energy),
        first_reversal=first_rev,
        final_state=state,
    )


def dump_field_csv(state: SimState, cfg: SimConfig, path) -> None:
    """Cell-centered field dump: s, r, x, y, u_t, u_r, p."""
    from .geometry import to_cartesian

    g = _grid(cfg)
    us_c = 0.5 * (state.us[:-1, :] + state.us[1:, :])
    ur_c = 0.5 * (state.ur[:, :-1] + state.ur[:, 1:])
    s0 = cfg.arc.s_range[0]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "r", "x", "y", "u_t", "u_r", "p"])
        for i in range(cfg.n_s):
            s = s0 + g.delta * g.theta_c[i]
            for j in range(cfg.n_r):
                r = g.rho_c[j] - g.delta
                x, y = to_cartesian(cfg.arc, (s, r))
                writer.writerow([
                    f"{s:.17g}", f"{r:.17g}", f"{x:.17g}", f"{y:.17g}",
                    f"{us_c[i, j]:.17g}", f"{ur_c[i, j]:.17g}", f"{state.p[i, j]:.17g}",
                ])
