"""Phase-portrait machinery in the ramified s coordinate: the theta
function, the quotient vector field chi, trajectory tracing, region
classification and the bifurcation curves.

The field chi(s) = ((s^2 - mu)^2 - eps) / (4 s^2) is even in s; its real
trajectories for rotated times omega (|arg omega| < eta) carve the s plane
into inner regions (connections s1 -> s2) and outer regions (connections
s1 -> -s1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .algebra import BranchedLog, ramified_sqrt


class OnCut(ValueError):
    """theta evaluated within tolerance of one of its cut segments [0, s_i]."""


class PoleAtZero(ZeroDivisionError):
    """chi evaluated at its pole s = 0."""


# ---------------------------------------------------------------------------
# ramified parameter points


@dataclass(frozen=True)
class RamifiedPoint:
    """A parameter point (mu, eps) with tracked branch data.

    Carries sqrt(eps) on its sheet, the two roots s1, s2 with
    s1^2 = mu + sqrt(eps), s2^2 = mu - sqrt(eps), and branch-tracked
    logarithms of n_i = s_i/sqrt(eps), a = (n1 - n2)/2, b = (n1 + n2)/2
    used by the connection-coefficient formulas.  The continuation maps
    sigma (one turn of mu around sqrt(eps)) and rho (simultaneous turn of
    mu and eps) act by exact argument arithmetic.
    """

    mu: BranchedLog
    eps: BranchedLog
    sqrt_eps: complex
    s1: complex
    s2: complex
    log_n1: complex = 0.0
    log_n2: complex = 0.0
    log_a: complex = 0.0
    log_b: complex = 0.0

    @classmethod
    def from_values(cls, mu: complex, eps: complex,
                    mu_turns: int = 0, eps_turns: int = 0) -> "RamifiedPoint":
        """Base-sheet construction (principal branches throughout).

        For mu, eps real positive with mu^2 > eps this gives the standard
        square roots.  Extra ``turns`` rotate the starting sheet of the
        respective parameter before anything is derived.
        """
        mu_b = BranchedLog.from_complex(mu, mu_turns)
        eps_b = BranchedLog.from_complex(eps, eps_turns)
        if eps_b.modulus == 0.0:
            se = 0.0 + 0.0j
            s1 = cmath.sqrt(mu)
            return cls(mu_b, eps_b, se, s1, s1)
        se = ramified_sqrt(eps_b).project()
        s1 = cmath.sqrt(complex(mu) + se)
        s2 = cmath.sqrt(complex(mu) - se)
        point = cls(mu_b, eps_b, se, s1, s2)
        if abs(s1) == 0.0 or abs(s2) == 0.0:
            # ramification locus mu^2 = eps (or mu = -sqrt(eps)): the
            # tracked logs are undefined there
            nan = complex(math.nan, math.nan)
            return replace(point, log_n1=nan, log_n2=nan, log_a=nan, log_b=nan)
        return replace(point, **point._fresh_logs())

    def _fresh_logs(self) -> dict:
        n1 = self.s1 / self.sqrt_eps
        n2 = self.s2 / self.sqrt_eps
        return {
            "log_n1": cmath.log(n1),
            "log_n2": cmath.log(n2),
            "log_a": cmath.log((n1 - n2) / 2.0),
            "log_b": cmath.log((n1 + n2) / 2.0),
        }

    # -- projections ---------------------------------------------------------

    @property
    def mu_value(self) -> complex:
        return self.mu.project()

    @property
    def eps_value(self) -> complex:
        return self.eps.project()

    @property
    def n1(self) -> complex:
        return cmath.exp(self.log_n1)

    @property
    def n2(self) -> complex:
        return cmath.exp(self.log_n2)

    @property
    def a(self) -> complex:
        """(s1 - s2)/(2 sqrt(eps)); for eps = 0 the limit 1/(2 sqrt(mu))."""
        if self.eps.modulus == 0.0:
            return 1.0 / (2.0 * cmath.sqrt(self.mu_value))
        return cmath.exp(self.log_a)

    @property
    def b(self) -> complex:
        return cmath.exp(self.log_b)

    def roots(self) -> tuple[complex, complex, complex, complex]:
        return (self.s1, -self.s1, self.s2, -self.s2)

    # -- continuation maps ----------------------------------------------------

    def sigma_image(self) -> "RamifiedPoint":
        """One positive turn of mu around sqrt(eps): s2 -> -s2, s1 fixed.

        The tracked data obeys n2 -> e^{i pi} n2 and swaps a <-> b.
        """
        return replace(
            self,
            s2=-self.s2,
            log_n2=self.log_n2 + 1j * math.pi,
            log_a=self.log_b,
            log_b=self.log_a,
        )

    def rho_image(self) -> "RamifiedPoint":
        """Simultaneous positive turn of (mu, eps): swaps s1 <-> e^{i pi} s2.

        sqrt(eps) flips sign, n1 and n2 exchange their tracked logs, a
        continues along e^{-i pi} a and b is fixed.
        """
        return replace(
            self,
            mu=self.mu.shifted(2.0 * math.pi),
            eps=self.eps.shifted(2.0 * math.pi),
            sqrt_eps=-self.sqrt_eps,
            s1=-self.s2,
            s2=-self.s1,
            log_n1=self.log_n2,
            log_n2=self.log_n1,
            log_a=self.log_a - 1j * math.pi,
        )


# ---------------------------------------------------------------------------
# domain configuration


@dataclass(frozen=True)
class DomainConfig:
    """Annulus and tracing constants.

    The feasibility inequality L * delta_s * (1 + 4 sup|s r|) <= 2 cos(eta)
    guarantees the Picard contraction of the integral-equation solver.
    ``omega_samples`` controls how densely the admissible rotations
    |arg omega| < eta are sampled when ramified unions over omega are
    needed.
    """

    eta: float = math.pi / 6.0
    delta_s: float = 0.5
    delta_mu: float = 0.1
    delta_eps: float = 0.05
    L: float = 2.0
    xi_max: float | None = None
    trace_step: float = 5e-3
    classify_step: float = 5e-2
    capture_radius: float = 1e-9
    parabolic_capture: float = 1e-2
    omega_samples: int = 7

    @property
    def xi_limit(self) -> float:
        return self.xi_max if self.xi_max is not None else 200.0 / math.cos(self.eta)

    def feasible(self, sup_sr: float = 0.0) -> bool:
        return self.L * self.delta_s * (1.0 + 4.0 * sup_sr) <= 2.0 * math.cos(self.eta)

    def omega_grid(self) -> np.ndarray:
        args = np.linspace(-self.eta, self.eta, self.omega_samples + 2)[1:-1]
        return np.exp(1j * args)


# ---------------------------------------------------------------------------
# theta


def _dist_to_segment(s: complex, end: complex) -> float:
    """Distance from s to the straight segment [0, end]."""
    L2 = (end.real ** 2 + end.imag ** 2)
    if L2 == 0.0:
        return abs(s)
    t = (s.real * end.real + s.imag * end.imag) / L2
    t = min(1.0, max(0.0, t))
    return abs(s - t * end)


def theta(s: complex, mu: complex, eps: complex,
          branch: RamifiedPoint | None = None, cut_tol: float = 1e-9) -> complex:
    """Antiderivative of 2 s^2 / ((s^2 - mu)^2 - eps) vanishing at infinity.

    Closed-form case split (generic / eps = 0 / mu^2 = eps / both zero)
    with principal logarithms of the Moebius ratios, which puts the cuts
    exactly on the four segments [0, s_i].  Odd in s.
    """
    s = complex(s)
    mu = complex(mu)
    eps = complex(eps)
    if branch is None:
        branch = RamifiedPoint.from_values(mu, eps)
    scale = max(abs(mu) ** 2, abs(eps), 1e-300)
    generic = abs(eps) > 1e-13 * scale and abs(mu * mu - eps) > 1e-13 * scale

    if generic:
        s1, s2, se = branch.s1, branch.s2, branch.sqrt_eps
        for root in (s1, -s1, s2, -s2):
            if _dist_to_segment(s, root) < cut_tol:
                raise OnCut(f"s = {s} lies on a cut segment")
        t1 = (s1 / (2.0 * se)) * cmath.log((s - s1) / (s + s1))
        t2 = (s2 / (2.0 * se)) * cmath.log((s - s2) / (s + s2))
        return t1 - t2
    if abs(eps) <= 1e-13 * scale and abs(mu) <= 1e-13 * math.sqrt(scale):
        if abs(s) < cut_tol:
            raise OnCut("s = 0 is the degenerate cut")
        return -2.0 / s
    if abs(eps) <= 1e-13 * scale:
        sm = cmath.sqrt(mu)
        for root in (sm, -sm):
            if _dist_to_segment(s, root) < cut_tol:
                raise OnCut(f"s = {s} lies on a cut segment")
        return -s / (s * s - mu) - cmath.log((s + sm) / (s - sm)) / (2.0 * sm)
    # mu^2 = eps: the double-root case; sign fixed by the generic limit
    sr = cmath.sqrt(2.0 * mu)
    for root in (sr, -sr):
        if _dist_to_segment(s, root) < cut_tol:
            raise OnCut(f"s = {s} lies on a cut segment")
    return cmath.log((s - sr) / (s + sr)) / sr


def theta_deriv(s: complex, mu: complex, eps: complex) -> complex:
    """d theta/ds = 2 s^2 / ((s^2 - mu)^2 - eps)."""
    return 2.0 * s * s / ((s * s - mu) ** 2 - eps)


# ---------------------------------------------------------------------------
# chi and its equilibria


def chi(s, mu: complex, eps: complex):
    """((s^2 - mu)^2 - eps) / (4 s^2); accepts scalars or ndarrays."""
    if isinstance(s, np.ndarray):
        return ((s * s - mu) ** 2 - eps) / (4.0 * s * s)
    if s == 0:
        raise PoleAtZero("chi has a double pole at s = 0")
    return ((s * s - mu) ** 2 - eps) / (4.0 * s * s)


def chi_multiplier(s_i: complex, mu: complex) -> complex:
    """Linearization multiplier of chi at a simple zero: (s_i^2 - mu)/s_i."""
    return (s_i * s_i - mu) / s_i


@dataclass(frozen=True)
class Equilibrium:
    s: complex
    multiplier: complex
    parabolic: bool


def equilibria(rp: RamifiedPoint) -> list[Equilibrium]:
    """Actual singular points of chi among the roots of (s^2-mu)^2 - eps.

    Roots at the origin are excluded when (mu, eps) != 0: the pole of chi
    cancels them and the point is regular.  For eps = 0 the double roots
    +-sqrt(mu) are flagged parabolic.
    """
    mu, eps = rp.mu_value, rp.eps_value
    out: list[Equilibrium] = []
    if abs(eps) == 0.0:
        if abs(mu) == 0.0:
            out.append(Equilibrium(0.0, 0.0, True))
        else:
            sm = rp.s1
            out.append(Equilibrium(sm, 0.0, True))
            out.append(Equilibrium(-sm, 0.0, True))
        return out
    seen: list[complex] = []
    for s_i in rp.roots():
        if abs(s_i) < 1e-12:
            continue
        if any(abs(s_i - t) < 1e-12 for t in seen):
            continue
        seen.append(s_i)
        out.append(Equilibrium(s_i, chi_multiplier(s_i, mu), False))
    return out


# ---------------------------------------------------------------------------
# trajectory tracing


@dataclass(frozen=True)
class TrajectoryRecord:
    """Uniform-in-xi samples of one real trajectory of omega*chi.

    ``terminal`` is one of converged / left-annulus / max-length; for a
    converged run ``target`` holds the limiting equilibrium.  ``direction``
    -1 means the field -omega*chi was integrated (a backward trajectory).
    """

    omega: complex
    mu: complex
    eps: complex
    xi: np.ndarray
    s: np.ndarray
    terminal: str
    target: complex | None
    direction: int = 1

    @property
    def dxi(self) -> float:
        return float(self.xi[1] - self.xi[0]) if len(self.xi) > 1 else 0.0

    def reversed_negated(self) -> "TrajectoryRecord":
        """The arc -s traversed the other way: again a forward trajectory.

        Maps a connection s_a -> s_b of omega*chi onto the connection
        -s_b -> -s_a, which is what the P-symmetric Picard solve needs.
        """
        xs = self.xi[-1] - self.xi[::-1]
        return TrajectoryRecord(self.omega, self.mu, self.eps, xs,
                                -self.s[::-1], self.terminal,
                                None if self.target is None else -self.s[0],
                                self.direction)


def _in_annulus(s: complex, mu: complex, eps: complex, cfg: DomainConfig) -> bool:
    if abs(s) >= cfg.delta_s:
        return False
    s2 = s * s
    return abs(((s2 - mu) ** 2 - eps)) < cfg.L * abs(s2 * s2)


def trace_trajectory(s0: complex, omega: complex, rp: RamifiedPoint,
                     cfg: DomainConfig | None = None, direction: int = 1,
                     xi_max: float | None = None) -> TrajectoryRecord:
    """Fixed-step RK4 integration of ds/dxi = direction * omega * chi(s).

    Stops on convergence to an equilibrium (within capture_radius for
    hyperbolic points, parabolic_capture with an inward-motion check for
    parabolic ones), on leaving the annulus, or at xi_max.
    """
    if cfg is None:
        cfg = DomainConfig()
    mu, eps = rp.mu_value, rp.eps_value
    w = direction * omega
    eqs = equilibria(rp)
    attracting = [e for e in eqs
                  if e.parabolic or (w * e.multiplier).real < 0.0]
    h = cfg.trace_step
    limit = xi_max if xi_max is not None else cfg.xi_limit
    n_max = int(limit / h) + 1
    samples = [complex(s0)]
    s = complex(s0)
    terminal, target = "max-length", None
    approach = 0

    def f(v: complex) -> complex:
        return w * ((v * v - mu) ** 2 - eps) / (4.0 * v * v)

    for _ in range(n_max):
        k1 = f(s)
        k2 = f(s + 0.5 * h * k1)
        k3 = f(s + 0.5 * h * k2)
        k4 = f(s + h * k3)
        s_new = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        samples.append(s_new)
        stop = False
        for e in attracting:
            d = abs(s_new - e.s)
            if not e.parabolic and d < cfg.capture_radius:
                terminal, target, stop = "converged", e.s, True
                break
            if e.parabolic and d < cfg.parabolic_capture:
                if d < abs(s - e.s):
                    approach += 1
                else:
                    approach = 0
                if approach >= 5:
                    terminal, target, stop = "converged", e.s, True
                    break
        if stop:
            s = s_new
            break
        if not _in_annulus(s_new, mu, eps, cfg):
            terminal = "left-annulus"
            s = s_new
            break
        s = s_new
    arr = np.asarray(samples)
    xi = np.arange(len(arr)) * h
    return TrajectoryRecord(omega, mu, eps, xi, arr, terminal, target, direction)


def xi_theta_residuals(record: TrajectoryRecord,
                       branch: RamifiedPoint | None = None) -> np.ndarray:
    """Per-step residual of omega * dxi = 2 dtheta along the samples.

    Pairs that straddle a theta cut (where the principal branch jumps) are
    reported as NaN so callers can exclude them.
    """
    mu, eps = record.mu, record.eps
    if branch is None:
        branch = RamifiedPoint.from_values(mu, eps)
    w = record.direction * record.omega
    vals = np.empty(len(record.s) - 1, dtype=float)
    th = []
    for s in record.s:
        try:
            th.append(theta(s, mu, eps, branch))
        except OnCut:
            th.append(None)
    for k in range(len(vals)):
        a, b = th[k], th[k + 1]
        if a is None or b is None:
            vals[k] = np.nan
            continue
        lhs = w * (record.xi[k + 1] - record.xi[k])
        rhs = 2.0 * (b - a)
        res = abs(lhs - rhs)
        # a principal-branch jump shows up as a residual of order 1
        vals[k] = res if res < 0.1 else np.nan
    return vals


# ---------------------------------------------------------------------------
# region classification


REGION_NONE = 0
REGION_INNER = 1
REGION_INNER_P = 2
REGION_OUTER = 3
REGION_OUTER_P = 4

REGION_NAMES = {
    REGION_NONE: "none",
    REGION_INNER: "R_I",
    REGION_INNER_P: "R_I_P",
    REGION_OUTER: "R_O",
    REGION_OUTER_P: "R_O_P",
}


def _flow_endpoints(points: np.ndarray, w: complex, mu: complex, eps: complex,
                    cfg: DomainConfig, eq_list: list[Equilibrium]) -> np.ndarray:
    """Vectorized RK4 flow of all grid points; returns the index of the
    reached equilibrium per point (-1: left annulus or never converged)."""
    h = cfg.classify_step
    n_steps = int(cfg.xi_limit / h) + 1
    s = points.astype(complex).copy()
    status = np.full(s.shape, -1, dtype=int)
    active = np.ones(s.shape, dtype=bool)
    targets = [e for e in eq_list if e.parabolic or (w * e.multiplier).real < 0.0]
    if not targets:
        return status
    t_pos = np.array([e.s for e in targets])
    t_cap = np.array([cfg.parabolic_capture if e.parabolic else
                      1e3 * cfg.capture_radius for e in targets])

    def f(v):
        return w * ((v * v - mu) ** 2 - eps) / (4.0 * v * v)

    for _ in range(n_steps):
        if not active.any():
            break
        v = s[active]
        k1 = f(v)
        k2 = f(v + 0.5 * h * k1)
        k3 = f(v + 0.5 * h * k2)
        k4 = f(v + h * k3)
        v_new = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s[active] = v_new
        idx = np.flatnonzero(active)
        dist = np.abs(v_new[:, None] - t_pos[None, :])
        hit = dist < t_cap[None, :]
        captured = hit.any(axis=1)
        if captured.any():
            which = np.argmax(hit[captured], axis=1)
            status[idx[captured]] = which
            active[idx[captured]] = False
        v_rest = v_new[~captured]
        idx_rest = idx[~captured]
        bad = (np.abs(v_rest) >= cfg.delta_s) | \
              (np.abs((v_rest**2 - mu) ** 2 - eps) >= cfg.L * np.abs(v_rest) ** 4) | \
              ~np.isfinite(v_rest)
        if bad.any():
            active[idx_rest[bad]] = False
    # translate target indices into positions
    out = np.full(s.shape, np.nan, dtype=complex)
    for k in range(len(targets)):
        out[status == k] = targets[k].s
    return out


def classify_regions(rp: RamifiedPoint, omega: complex, cfg: DomainConfig,
                     grid: tuple[int, int] | np.ndarray = (41, 41)):
    """Label grid points by the forward/backward limits of their trajectory.

    R_I: runs from s1 (backward) to s2 (forward); R_I^P is its negation.
    Both outer regions run from s1 to -s1; the pair is split by the sign of
    Im(s/s1) (the upper one is R_O).  Returns (points, labels).
    """
    mu, eps = rp.mu_value, rp.eps_value
    if isinstance(grid, tuple):
        nx, ny = grid
        xs = np.linspace(-cfg.delta_s, cfg.delta_s, nx)
        ys = np.linspace(-cfg.delta_s, cfg.delta_s, ny)
        pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    else:
        pts = np.asarray(grid, dtype=complex).ravel()
    inside = np.array([_in_annulus(p, mu, eps, cfg) for p in pts])
    labels = np.full(pts.shape, REGION_NONE, dtype=int)
    eq_list = equilibria(rp)
    if not eq_list:
        return pts, labels
    fwd = _flow_endpoints(pts[inside], omega, mu, eps, cfg, eq_list)
    bwd = _flow_endpoints(pts[inside], -omega, mu, eps, cfg, eq_list)

    s1, s2 = rp.s1, rp.s2
    sub = np.full(fwd.shape, REGION_NONE, dtype=int)

    def near(arr, target):
        return np.isfinite(arr) & (np.abs(arr - target) < 1e-6 + 2.0 * cfg.parabolic_capture)

    inner = near(bwd, s1) & near(fwd, s2)
    inner_p = near(bwd, -s2) & near(fwd, -s1)
    outer_pair = near(bwd, s1) & near(fwd, -s1) & ~inner & ~inner_p
    axis = s1 if abs(s1) > 1e-12 else 1.0
    upper = (pts[inside] / axis).imag > 0.0
    sub[inner] = REGION_INNER
    sub[inner_p] = REGION_INNER_P
    sub[outer_pair & upper] = REGION_OUTER
    sub[outer_pair & ~upper] = REGION_OUTER_P
    # eps = 0 collapses s1 = s2: connections from s1 to s1 are inner
    if abs(eps) == 0.0 and abs(mu) > 0.0:
        both = near(bwd, s1) & near(fwd, s1)
        sub[both] = REGION_INNER
        both_p = near(bwd, -s1) & near(fwd, -s1)
        sub[both_p] = REGION_INNER_P
    labels[inside] = sub
    return pts, labels


def count_components(points: np.ndarray, labels: np.ndarray, label: int,
                     nx: int, ny: int, exclude=(), exclude_radius: float = 0.0) -> int:
    """4-neighbour connected components of one label on an (ny, nx) grid.

    Points within ``exclude_radius`` of any point in ``exclude`` are
    ignored: regions that merely touch at an equilibrium (parabolic
    petals) count as separate components once the capture disc is removed.
    """
    lab = labels.copy()
    if exclude_radius > 0.0:
        for e in exclude:
            lab[np.abs(points - e) < exclude_radius] = -1
    mask = (lab.reshape(ny, nx) == label)
    seen = np.zeros_like(mask, dtype=bool)
    comps = 0
    for i in range(ny):
        for j in range(nx):
            if mask[i, j] and not seen[i, j]:
                comps += 1
                stack = [(i, j)]
                seen[i, j] = True
                while stack:
                    a, b = stack.pop()
                    for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        na, nb = a + da, b + db
                        if 0 <= na < ny and 0 <= nb < nx and mask[na, nb] \
                                and not seen[na, nb]:
                            seen[na, nb] = True
                            stack.append((na, nb))
    return comps


# ---------------------------------------------------------------------------
# bifurcation curves


def bifurcation_sets(eps: complex, resolution: int = 200):
    """Sampled bifurcation loci in the mu plane.

    sigma_O: the hyperbola branch mu = -(1/a + eps a)/2, a > 0 (trajectory
    through infinity changes endpoints); sigma_I: the two rays
    mu = -+sqrt(eps) - eps t, t >= 0 (an equilibrium turns into a center).
    """
    a_vals = np.exp(np.linspace(-4.0, 4.0, resolution))
    sigma_o = -(1.0 / a_vals + eps * a_vals) / 2.0
    se = cmath.sqrt(eps)
    t_vals = np.linspace(0.0, 10.0, resolution)
    sigma_i_minus = -se - eps * t_vals
    sigma_i_plus = se - eps * t_vals
    return {
        "sigma_O": sigma_o.astype(complex),
        "sigma_I_minus": sigma_i_minus.astype(complex) if isinstance(
            sigma_i_minus, np.ndarray) else np.full(resolution, -se),
        "sigma_I_plus": sigma_i_plus.astype(complex) if isinstance(
            sigma_i_plus, np.ndarray) else np.full(resolution, se),
    }


def stability_indicator(mu: complex, eps: complex) -> float:
    """Re(sqrt(eps)/s2); its sign flips exactly on the sigma_I ray of s2."""
    se = cmath.sqrt(eps)
    s2 = cmath.sqrt(mu - se)
    return (se / s2).real


def stability_sweep(mu_path, eps: complex) -> np.ndarray:
    """Re(sqrt(eps)/s2) along a mu path with s2 continued, not principal.

    Principal square roots jump sheets exactly on the sigma_I ray, which
    would mask the stability flip; here each s2 is the root closest to the
    previous one.
    """
    se = cmath.sqrt(eps)
    out = np.empty(len(mu_path), dtype=float)
    s2_prev = None
    for k, mu in enumerate(mu_path):
        s2 = cmath.sqrt(complex(mu) - se)
        if s2_prev is not None and abs(-s2 - s2_prev) < abs(s2 - s2_prev):
            s2 = -s2
        out[k] = (se / s2).real
        s2_prev = s2
    return out


# ---------------------------------------------------------------------------
# CSV emitters


CSV_SCHEMA = "resunfold-csv/1"


def write_trajectories_csv(records: list[TrajectoryRecord], path, stride: int = 1) -> None:
    with open(path, "w") as fh:
        fh.write(f"# schema={CSV_SCHEMA}\n")
        fh.write("traj,xi,re_s,im_s\n")
        for k, rec in enumerate(records):
            for xi, s in zip(rec.xi[::stride], rec.s[::stride]):
                fh.write(f"{k},{xi:.12g},{s.real:.12g},{s.imag:.12g}\n")


def write_regions_csv(points: np.ndarray, labels: np.ndarray, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# schema={CSV_SCHEMA}\n")
        fh.write("re_s,im_s,label\n")
        for p, l in zip(points, labels):
            fh.write(f"{p.real:.12g},{p.imag:.12g},{REGION_NAMES[int(l)]}\n")


def write_bifurcations_csv(curves: dict, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# schema={CSV_SCHEMA}\n")
        fh.write("curve,re_mu,im_mu\n")
        for name, arr in curves.items():
            for mu in np.atleast_1d(arr):
                fh.write(f"{name},{mu.real:.12g},{mu.imag:.12g}\n")
