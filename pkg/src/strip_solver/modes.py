"""Mode decomposition of the dissipative strip operator.

The operator ``L = d_xx(eps*d_t + c^2) - d_t(d_t + a)`` with homogeneous
Dirichlet conditions on (0, l) diagonalises over the sine basis
``sin(gamma_n x)``, ``gamma_n = n*pi/l``.  Each mode carries a damped
temporal kernel ``H_n`` solving

    H_n'' + 2*h_n*H_n' + b_n^2*H_n = 0,   H_n(0) = 0,  H_n'(0) = 1,

with ``b_n = c*gamma_n`` and ``h_n = (a + eps*gamma_n^2)/2``.  Depending on
the sign of ``h_n - b_n`` the kernel is overdamped (sinh-type), critically
damped (t*exp) or oscillatory (sin-type).

Numerical policy: no hyperbolic function of a large argument is ever
formed.  Overdamped kernels use the split

    H_n(t) = (exp(-(h-w)*t) - exp(-(h+w)*t)) / (2*w)

with the cancellation-free slow rate ``h - w = b^2/(h + w)``; both
exponents are non-positive, so the evaluation cannot overflow for any mode
index or time.  Phases ``|w*t|`` below ``SERIES_SWITCH`` use a four-term
Maclaurin series of sinh(x)/x (sin(x)/x in the oscillatory regime), which
keeps the relative error at machine level and makes H(0) = 0 and
H'(0) = 1 exact in every regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Regime",
    "Params",
    "ModeParams",
    "ModeClassification",
    "ModeTable",
    "mode_params",
    "mode_table",
    "table_from_mode",
    "kernel_eval",
    "kernel_dt_eval",
    "flux_kernel_eval",
    "kernel_values",
    "kernel_dt_values",
    "flux_values",
    "classify_modes",
    "term_bound",
    "CRITICAL_REL_TOL",
    "SERIES_SWITCH",
]

# |h - b| <= CRITICAL_REL_TOL * h is treated as critically damped.
CRITICAL_REL_TOL = 1e-12
# |w*t| below this uses the Maclaurin branch instead of exp/sin splits.
SERIES_SWITCH = 1e-4


class Regime(Enum):
    OVERDAMPED = "Overdamped"
    CRITICAL = "Critical"
    OSCILLATORY = "Oscillatory"


@dataclass(frozen=True)
class Params:
    """Physical constants of the operator on the strip (0, l).

    epsilon: diffusion of the third-order term, a: damping, c: wave speed,
    l: strip length.  All strictly positive.
    """

    epsilon: float
    a: float
    c: float
    l: float

    def __post_init__(self):
        for name in ("epsilon", "a", "c", "l"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"parameter {name!r} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class ModeParams:
    """Per-mode quantities: gamma = n*pi/l, b = c*gamma, h = (a + eps*gamma^2)/2.

    ``omega`` is sqrt(h^2 - b^2) when overdamped, 0 when critical and
    sqrt(b^2 - h^2) when oscillatory; always stored non-negative.
    ``slow_rate`` is the decay rate of the slowly decaying factor:
    h - omega for overdamped modes (computed as b^2/(h + omega) to avoid
    cancellation), h otherwise.
    """

    n: int
    gamma: float
    b: float
    h: float
    regime: Regime
    omega: float
    slow_rate: float


@dataclass(frozen=True)
class ModeClassification:
    """Integer brackets of the oscillatory band.

    ``n1_star``: largest index strictly below the lower band edge,
    ``n2_star``: smallest index strictly above the upper band edge,
    ``nk``: smallest index from which every mode satisfies
    (b_n/h_n)^2 <= k, the validity threshold of the 1/n^2 kernel bound.
    When c^2 <= a*eps there is no oscillatory band and the sentinel
    (n1_star, n2_star) = (0, 1) is returned.
    """

    n1_star: int
    n2_star: int
    nk: int
    k: float


@dataclass(frozen=True)
class ModeTable:
    """Vectorised mode data for modes 1..n_max (internal work-horse).

    ``sign`` is +1 for sinh-type (overdamped/critical) and -1 for sin-type
    modes; ``dm``/``dp`` are the slow/fast decay rates h -+ omega (dm
    falls back to h for critical and oscillatory modes).
    """

    epsilon: float
    a: float
    c: float
    l: float
    n: np.ndarray
    gamma: np.ndarray
    b: np.ndarray
    h: np.ndarray
    omega: np.ndarray
    sign: np.ndarray
    dm: np.ndarray
    dp: np.ndarray
    osc: np.ndarray
    crit: np.ndarray
    over: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.n.size


def _build_table(epsilon, a, c, l, n_idx):
    gamma = n_idx * (math.pi / l)
    b = c * gamma
    h = 0.5 * (a + epsilon * gamma**2)
    crit = np.abs(h - b) <= CRITICAL_REL_TOL * h
    osc = (b > h) & ~crit
    over = ~(osc | crit)
    omega = np.zeros_like(h)
    omega[over] = np.sqrt((h[over] - b[over]) * (h[over] + b[over]))
    omega[osc] = np.sqrt((b[osc] - h[osc]) * (b[osc] + h[osc]))
    sign = np.where(osc, -1.0, 1.0)
    dm = np.where(over, b * b / (h + omega), h)
    dp = h + omega
    return ModeTable(
        epsilon=epsilon, a=a, c=c, l=l,
        n=n_idx, gamma=gamma, b=b, h=h, omega=omega, sign=sign,
        dm=dm, dp=dp, osc=osc, crit=crit, over=over,
    )


def mode_table(p: Params, n_max: int) -> ModeTable:
    """Mode quantities for n = 1..n_max as arrays."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    n_idx = np.arange(1, n_max + 1, dtype=float)
    return _build_table(p.epsilon, p.a, p.c, p.l, n_idx)


def table_from_mode(m: ModeParams, p: Params | None = None) -> ModeTable:
    """Single-row table from explicit mode quantities (synthetic modes allowed)."""
    eps = p.epsilon if p is not None else 1.0
    a = p.a if p is not None else 2.0 * m.h  # only used by flux kernels
    c = p.c if p is not None else (m.b / m.gamma if m.gamma > 0 else 1.0)
    l = p.l if p is not None else math.pi
    osc = m.regime is Regime.OSCILLATORY
    over = m.regime is Regime.OVERDAMPED
    omega = float(m.omega)
    dm = m.b * m.b / (m.h + omega) if over else m.h
    return ModeTable(
        epsilon=eps, a=a, c=c, l=l,
        n=np.array([float(m.n)]),
        gamma=np.array([m.gamma]),
        b=np.array([m.b]),
        h=np.array([m.h]),
        omega=np.array([omega]),
        sign=np.array([-1.0 if osc else 1.0]),
        dm=np.array([dm]),
        dp=np.array([m.h + omega]),
        osc=np.array([osc]),
        crit=np.array([m.regime is Regime.CRITICAL]),
        over=np.array([over]),
    )


def mode_params(p: Params, n: int) -> ModeParams:
    """Mode quantities for a single index n >= 1, with the damping regime tag."""
    if n < 1:
        raise ValueError(f"mode index must be >= 1, got {n}")
    t = _build_table(p.epsilon, p.a, p.c, p.l, np.array([float(n)]))
    if t.crit[0]:
        regime = Regime.CRITICAL
    elif t.osc[0]:
        regime = Regime.OSCILLATORY
    else:
        regime = Regime.OVERDAMPED
    return ModeParams(
        n=n, gamma=float(t.gamma[0]), b=float(t.b[0]), h=float(t.h[0]),
        regime=regime, omega=float(t.omega[0]), slow_rate=float(t.dm[0]),
    )


def _kernel_core(table: ModeTable, t, which: str):
    """Evaluate H, H' or eps*H' + c^2*H for all table modes.

    ``t`` may be a scalar or a 1-D array of non-negative times; the result
    has shape (n_modes,) for scalar t and (n_modes, len(t)) otherwise.
    """
    tt = np.asarray(t, dtype=float)
    scalar_t = tt.ndim == 0
    tt = np.atleast_1d(tt)[None, :]            # (1, K)
    h = table.h[:, None]
    om = table.omega[:, None]
    x = om * tt                                 # phase |omega*t|
    small = x < SERIES_SWITCH
    osc_m = table.osc[:, None] & ~small
    over_m = ~table.osc[:, None] & ~small

    # Maclaurin branch in y = sign*(omega*t)^2; exact at t = 0.
    y = table.sign[:, None] * x * x
    sinc_s = 1.0 + y / 6.0 * (1.0 + y / 20.0 * (1.0 + y / 42.0))
    cosh_s = 1.0 + y / 2.0 * (1.0 + y / 12.0 * (1.0 + y / 30.0))
    decay = np.exp(-h * tt)

    # sin-branch quantities (x >= SERIES_SWITCH keeps sin(x)/x well defined)
    x_safe = np.where(x > 0, x, 1.0)
    sinc_o = np.sin(x) / x_safe
    cos_o = np.cos(x)

    # overdamped split; exponents are non-positive by construction
    dm = table.dm[:, None]
    dp = table.dp[:, None]
    two_om = np.where(om > 0, 2.0 * om, 1.0)
    e_slow = np.exp(-dm * tt)
    e_fast = np.exp(-dp * tt)

    if which == "H":
        out = np.where(
            small, tt * decay * sinc_s,
            np.where(osc_m, decay * tt * sinc_o, (e_slow - e_fast) / two_om),
        )
    elif which == "Hdot":
        out = np.where(
            small, decay * (cosh_s - h * tt * sinc_s),
            np.where(osc_m, decay * (cos_o - h * tt * sinc_o),
                     (dp * e_fast - dm * e_slow) / two_om),
        )
    elif which == "flux":
        eps = table.epsilon
        c2 = table.c**2
        a = table.a
        # stable slow coefficient: c^2 - eps*dm = c^2*(a - dm)/(h + omega)
        coef_slow = c2 * (a - dm) / dp
        coef_fast = c2 - eps * dp
        out = np.where(
            small, decay * (eps * cosh_s + (c2 - eps * h) * tt * sinc_s),
            np.where(osc_m, decay * (eps * cos_o + (c2 - eps * h) * tt * sinc_o),
                     (coef_slow * e_slow - coef_fast * e_fast) / two_om),
        )
    else:  # pragma: no cover
        raise ValueError(f"unknown kernel kind {which!r}")
    return out[:, 0] if scalar_t else out


def kernel_values(table: ModeTable, t):
    """H_n(t) for all modes of the table; t scalar or array, t >= 0."""
    return _kernel_core(table, t, "H")


def kernel_dt_values(table: ModeTable, t):
    """dH_n/dt for all modes of the table."""
    return _kernel_core(table, t, "Hdot")


def flux_values(table: ModeTable, t):
    """eps*H_n'(t) + c^2*H_n(t) for all modes of the table."""
    return _kernel_core(table, t, "flux")


def _check_time(t):
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")


def kernel_eval(m: ModeParams, t: float) -> float:
    """Temporal kernel H_n(t) of one mode, stable in every regime."""
    _check_time(t)
    return float(_kernel_core(table_from_mode(m), float(t), "H")[0])


def kernel_dt_eval(m: ModeParams, t: float) -> float:
    """Time derivative H_n'(t); equals 1 exactly at t = 0 in all regimes."""
    _check_time(t)
    return float(_kernel_core(table_from_mode(m), float(t), "Hdot")[0])


def flux_kernel_eval(m: ModeParams, p: Params, t: float) -> float:
    """Per-mode flux combination eps*H_n'(t) + c^2*H_n(t).

    For overdamped modes the slowly decaying coefficient is evaluated as
    c^2*(a - (h - omega))/(h + omega), which is exact arithmetic for the
    combination c^2 - eps*(h - omega) and avoids the large-n cancellation
    of forming the two products separately.
    """
    _check_time(t)
    return float(_kernel_core(table_from_mode(m, p), float(t), "flux")[0])


def classify_modes(p: Params, k: float = 0.5) -> ModeClassification:
    """Integer brackets of the oscillatory band and the 1/n^2-bound threshold.

    For c^2 > a*eps the band edges are the real roots
    N_{1,2} = (c*l/(eps*pi)) * (1 -+ sqrt(1 - a*eps/c^2)) of h_n = b_n;
    modes strictly between them oscillate.  ``nk`` is the smallest integer
    strictly above (c*l/(eps*pi*sqrt(k))) * (1 + sqrt(1 - a*eps*k/c^2)),
    from which (b_n/h_n)^2 <= k holds for every n >= nk.
    """
    if not (0.0 < k < 1.0):
        raise ValueError(f"k must lie in (0, 1), got {k}")
    c2 = p.c**2
    ae = p.a * p.epsilon
    scale = p.c * p.l / (p.epsilon * math.pi)
    if c2 > ae:
        root = math.sqrt(1.0 - ae / c2)
        n1 = scale * (1.0 - root)
        n2 = scale * (1.0 + root)
        n1_star = math.ceil(n1) - 1
        n2_star = math.floor(n2) + 1
    else:
        n1_star, n2_star = 0, 1
    if c2 > ae * k:
        fk = (scale / math.sqrt(k)) * (1.0 + math.sqrt(1.0 - ae * k / c2))
        nk = max(1, math.floor(fk) + 1)
    else:
        nk = 1
    return ModeClassification(n1_star=n1_star, n2_star=n2_star, nk=nk, k=k)


def decay_rate_p(p: Params) -> float:
    """Uniform slow-decay rate: c^2/(eps + a*(l/pi)^2)."""
    return p.c**2 / (p.epsilon + p.a * (p.l / math.pi) ** 2)


def sigma_rate(p: Params) -> float:
    """Quadratic-growth constant of h_n: h_n > sigma*n^2 with sigma = eps*(pi/l)^2/2."""
    return 0.5 * p.epsilon * (math.pi / p.l) ** 2


def term_bound(m: ModeParams, p: Params, t: float, k: float = 0.5) -> float:
    """Certified upper bound on |H_n(t)|.

    Oscillatory modes use exp(-h*t)*min(t, 1/omega); critical modes use the
    exact t*exp(-h*t).  Overdamped modes with (b/h)^2 <= k use the uniform
    bound (1-k)^(-1/2)/(q - a/2) * exp(-p*t)/n^2; near-critical overdamped
    modes (where that chain is invalid) fall back to the direct certified
    bound exp(-(h-omega)*t)*min(t, 1/(2*omega)).
    """
    _check_time(t)
    if not (0.0 < k < 1.0):
        raise ValueError(f"k must lie in (0, 1), got {k}")
    if m.regime is Regime.OSCILLATORY:
        return math.exp(-m.h * t) * min(t, 1.0 / m.omega)
    if m.regime is Regime.CRITICAL:
        return t * math.exp(-m.h * t)
    x_n = (m.b / m.h) ** 2
    if x_n <= k:
        c_k = 1.0 / (math.sqrt(1.0 - k) * sigma_rate(p))
        return c_k * math.exp(-decay_rate_p(p) * t) / m.n**2
    return math.exp(-m.slow_rate * t) * min(t, 0.5 / m.omega)
