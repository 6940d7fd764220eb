"""Time-dependent evolutions: semigroup trajectories, non-Markovian schedules,
region-crossing times, asymptotic maps, and time-local generator extraction.

A schedule fixes the time dependence (kappa(t), nu(t)) of the generator
family.  With A(t) = exp(-d Int kappa) and B(t) = exp(-Int kappa (d-1+nu)),
the evolution stays inside the two-parameter map family with coordinates

    alpha(t) = 1 - A(t),       beta(t) = A(t) - B(t).

Implemented schedules:

* ``ConstantNu``        -- the Markovian semigroup, alpha = 1 - e^{-kappa d t},
                           beta = e^{-kappa d t} - e^{-kappa (d-1+nu) t}.
* ``OptimalENM``        -- kappa = 1 and nu(t) = -(d-1)(e^{dt}-1)/(e^{dt}+d-1),
                           the schedule that saturates the complete-positivity
                           bound: the trajectory rides beta = -alpha/d forever
                           (eternally non-Markovian) and converges to the
                           entanglement-breaking map E4.
* ``PDivisible``        -- the ENM schedule until nu reaches -1 at t_*, frozen
                           at nu = -1 afterwards; relaxes to the completely
                           depolarizing channel.
* ``SchwarzDivisible``  -- same but frozen at the Schwarz threshold -d/(d+2)
                           from t_S on.
* ``ENM2``              -- the closed-form boundary map alpha(t) =
                           d(1-e^{-dt})/(d-1), beta = -alpha/d, whose
                           time-local rates kappa(t) = d/(d - e^{dt}),
                           nu(t) = 1 - e^{dt} blow up at t1 = ln(d)/d; the map
                           itself stays regular, passes through E4 at t1 and
                           converges to E3.
* ``WeylMixture``       -- the uniform mixture of the d(d-1) unitary-conjugation
                           semigroups generated by the shifting Weyl operators
                           Z^k X^l (l > 0).  Its time-local rates are only
                           reported through numerical extraction; see
                           ``extract_time_local_generator``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq

from .channels import (
    MapParams,
    SuperMap,
    build_phi_family,
    compose,
    family_fit,
    family_transfer_parts,
    named_map,
    unitary_conjugation,
)
from .errors import NegativeRate, NegativeTime, NoLimit, SingularMap, UnknownName
from .linalg import check_dimension

__all__ = [
    "ConstantNu", "OptimalENM", "PDivisible", "SchwarzDivisible", "ENM2",
    "WeylMixture", "Schedule", "SwitchTimes", "CrossingReport",
    "ExtractionReport", "TrajectoryPoint", "nu_enm", "switch_times",
    "alpha_beta_at", "kappa_nu_at", "map_at", "asymptotic_map",
    "crossing_times", "tangency_slope", "weyl_ops", "weyl_mixture_map",
    "weyl_commutant_average", "extract_time_local_generator",
    "alpha_beta_by_quadrature", "schedule_from_name", "trajectory_point",
    "BOUNDARY_SLOPES",
]


@dataclass(frozen=True)
class ConstantNu:
    d: int
    kappa: float
    nu: float

    def __post_init__(self):
        check_dimension(self.d)


@dataclass(frozen=True)
class OptimalENM:
    d: int

    def __post_init__(self):
        check_dimension(self.d)


@dataclass(frozen=True)
class PDivisible:
    d: int

    def __post_init__(self):
        check_dimension(self.d)


@dataclass(frozen=True)
class SchwarzDivisible:
    d: int

    def __post_init__(self):
        check_dimension(self.d)


@dataclass(frozen=True)
class ENM2:
    d: int

    def __post_init__(self):
        check_dimension(self.d)


@dataclass(frozen=True)
class WeylMixture:
    d: int

    def __post_init__(self):
        check_dimension(self.d)


Schedule = Union[ConstantNu, OptimalENM, PDivisible, SchwarzDivisible, ENM2, WeylMixture]


def schedule_from_name(name: str, d: int, kappa: float = 1.0,
                       nu: float = 0.0) -> Schedule:
    """CLI-facing constructor: const, enm, pdiv, sdiv, enm2, weyl."""
    table = {
        "const": lambda: ConstantNu(d, kappa, nu),
        "enm": lambda: OptimalENM(d),
        "pdiv": lambda: PDivisible(d),
        "sdiv": lambda: SchwarzDivisible(d),
        "enm2": lambda: ENM2(d),
        "weyl": lambda: WeylMixture(d),
    }
    key = name.lower()
    if key not in table:
        raise UnknownName(f"unknown schedule {name!r}; choose from {sorted(table)}")
    return table[key]()


def _check_time(t: float) -> float:
    t = float(t)
    if t < 0:
        raise NegativeTime(f"time must be >= 0, got {t}")
    return t


# ---------------------------------------------------------------------------
# the ENM schedule and its switch times
# ---------------------------------------------------------------------------

def nu_enm(d: int, t) -> np.ndarray | float:
    """nu(t) = -(d-1)(e^{dt} - 1)/(e^{dt} + d - 1).

    Monotone decreasing from 0 to -(d-1); equals -tanh(t) for d = 2.
    Evaluated through e^{-dt} so large times do not overflow.
    """
    check_dimension(d)
    em = np.exp(-d * np.asarray(t, dtype=float))
    out = -(d - 1.0) * (1.0 - em) / (1.0 + (d - 1.0) * em) + 0.0
    return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class SwitchTimes:
    t_star: float  # nu_enm reaches -1 (infinity for d = 2)
    t_s: float     # nu_enm reaches -d/(d+2)


def switch_times(d: int) -> SwitchTimes:
    """Times where the ENM schedule crosses the positivity and Schwarz thresholds.

    t_* = (1/d) ln(2(d-1)/(d-2)) for d > 2 (infinite for d = 2) and
    t_S = (1/d) ln(2(d^2-1)/(d^2-2)).
    """
    check_dimension(d)
    t_star = np.inf if d == 2 else np.log(2.0 * (d - 1) / (d - 2)) / d
    t_s = np.log(2.0 * (d * d - 1) / (d * d - 2)) / d
    return SwitchTimes(t_star=float(t_star), t_s=float(t_s))


def _enm_id_coefficient(d: int, t: float) -> float:
    """B(t) = (1 + (d-1) e^{-dt}) / d of the boundary-saturating schedule."""
    return (1.0 + (d - 1.0) * np.exp(-d * t)) / d


# ---------------------------------------------------------------------------
# schedule rates and trajectory coordinates
# ---------------------------------------------------------------------------

def kappa_nu_at(s: Schedule, t: float):
    """(kappa(t), nu(t)) of a schedule.  Not defined for WeylMixture, whose
    time-local rates are only available through numerical extraction."""
    t = _check_time(t)
    if isinstance(s, ConstantNu):
        return s.kappa, s.nu
    if isinstance(s, OptimalENM):
        return 1.0, nu_enm(s.d, t)
    if isinstance(s, PDivisible):
        ts = switch_times(s.d).t_star
        return 1.0, nu_enm(s.d, t) if t <= ts else -1.0
    if isinstance(s, SchwarzDivisible):
        ts = switch_times(s.d).t_s
        return 1.0, nu_enm(s.d, t) if t <= ts else -s.d / (s.d + 2.0)
    if isinstance(s, ENM2):
        e = np.exp(s.d * t)
        if abs(s.d - e) < 1e-12:
            raise SingularMap(f"ENM2 rates are singular at t1 = ln(d)/d for d={s.d}")
        return s.d / (s.d - e), 1.0 - e
    if isinstance(s, WeylMixture):
        raise UnknownName(
            "WeylMixture has no closed-form (kappa, nu); use "
            "extract_time_local_generator"
        )
    raise UnknownName(f"unknown schedule {s!r}")


def alpha_beta_at(s: Schedule, t: float):
    """Trajectory coordinates (alpha(t), beta(t)) in closed form.

    For WeylMixture the coordinates are the least-squares family fit of the
    mixture map; the fit is exact when d is prime (the mixture then stays in
    the family) and approximate otherwise.
    """
    t = _check_time(t)
    d = s.d
    if isinstance(s, ConstantNu):
        a_fac = np.exp(-s.kappa * d * t)
        b_fac = np.exp(-s.kappa * (d - 1.0 + s.nu) * t)
        return 1.0 - a_fac, a_fac - b_fac
    if isinstance(s, OptimalENM):
        # A - B with B = (1 + (d-1)A)/d collapses to -alpha/d; computing it
        # that way keeps the trajectory on the CP boundary bitwise
        alpha = 1.0 - np.exp(-d * t)
        return alpha, -alpha / d
    if isinstance(s, PDivisible):
        ts = switch_times(d).t_star
        if t <= ts:
            return alpha_beta_at(OptimalENM(d), t)
        a_fac = np.exp(-d * t)
        b_fac = 0.5 * np.exp(-(d - 2.0) * (t - ts))
        return 1.0 - a_fac, a_fac - b_fac
    if isinstance(s, SchwarzDivisible):
        ts = switch_times(d).t_s
        if t <= ts:
            return alpha_beta_at(OptimalENM(d), t)
        a_fac = np.exp(-d * t)
        # nu = -d/(d+2) freezes the coherence rate at (d^2-2)/(d+2)
        b_fac = (d + 2.0) / (2.0 * (d + 1.0)) * np.exp(
            -(d * d - 2.0) / (d + 2.0) * (t - ts)
        )
        return 1.0 - a_fac, a_fac - b_fac
    if isinstance(s, ENM2):
        alpha = d * (1.0 - np.exp(-d * t)) / (d - 1.0)
        return alpha, -alpha / d
    if isinstance(s, WeylMixture):
        alpha, beta, _resid = family_fit(weyl_mixture_map(d, t))
        return alpha, beta
    raise UnknownName(f"unknown schedule {s!r}")


def map_at(s: Schedule, t: float, h=None) -> SuperMap:
    """The dynamical map at time t.

    All schedules except WeylMixture stay in the two-parameter family and
    are built from their closed-form (alpha, beta); the mixture is the
    average of the d(d-1) unitary-conjugation semigroups.  With a diagonal
    Hamiltonian vector ``h`` the map is composed with conjugation by
    exp(-i H t).
    """
    t = _check_time(t)
    if isinstance(s, WeylMixture):
        m = weyl_mixture_map(s.d, t)
    else:
        alpha, beta = alpha_beta_at(s, t)
        m = build_phi_family(MapParams(s.d, alpha, beta))
    if h is not None and any(float(x) != 0.0 for x in h):
        u = np.diag(np.exp(-1j * np.asarray(h, dtype=float) * t))
        m = compose(unitary_conjugation(u), m)
    return m


def asymptotic_map(s: Schedule) -> SuperMap:
    """The t -> infinity limit of the schedule's dynamical map.

    OptimalENM converges to E4; PDivisible, SchwarzDivisible, and any
    ConstantNu with nu > -(d-1) relax to the completely depolarizing
    channel; ENM2 converges to E3; WeylMixture converges to the average of
    the cyclic-group conditional expectations of its Weyl unitaries (equal
    to E4 exactly when d is prime).  Raises NoLimit when beta(t) does not
    decay (ConstantNu with nu <= -(d-1)).
    """
    d = s.d
    if isinstance(s, ConstantNu):
        if d - 1 + s.nu <= 0 or s.kappa <= 0:
            raise NoLimit(
                f"beta(t) does not decay for kappa={s.kappa}, nu={s.nu}, d={d}"
            )
        return build_phi_family(MapParams(d, 1.0, 0.0))
    if isinstance(s, (PDivisible, SchwarzDivisible)):
        if d == 2 and isinstance(s, PDivisible):
            return named_map("E4", d)[0]  # t_* is infinite: the ENM limit
        return build_phi_family(MapParams(d, 1.0, 0.0))
    if isinstance(s, OptimalENM):
        return named_map("E4", d)[0]
    if isinstance(s, ENM2):
        return named_map("E3", d)[0]
    if isinstance(s, WeylMixture):
        return SuperMap(d, weyl_commutant_average(d))
    raise UnknownName(f"unknown schedule {s!r}")


# ---------------------------------------------------------------------------
# region crossings along the Markovian trajectory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossingReport:
    """Entry times into the positive / CP / EB regions; None = not reached.

    ``margins`` holds the boundary-functional values at the scan horizon,
    so an absent crossing still reports how far the trajectory ended up
    from the boundary.
    """

    t_p: Optional[float]
    t_cp: Optional[float]
    t_eb: Optional[float]
    margins: dict
    horizon: float


def _boundary_functionals(d: int, kappa: float, nu: float):
    def alpha(t):
        return 1.0 - np.exp(-kappa * d * t)

    def beta(t):
        return np.exp(-kappa * d * t) - np.exp(-kappa * (d - 1.0 + nu) * t)

    return {
        "P": lambda t: beta(t) + 2.0 * alpha(t) / d,
        "CP": lambda t: beta(t) + alpha(t) / d,
        "EB": lambda t: beta(t) + alpha(t) + alpha(t) / d - 1.0,
    }


def _first_root(g: Callable[[float], float], horizon: float) -> Optional[float]:
    """First sign change of g on (0, horizon] by doubling scan plus brentq."""
    t_lo = 1e-6
    if g(t_lo) >= 0.0:
        return 0.0 if g(0.0) >= -1e-15 else None
    t_hi = t_lo
    while t_hi < horizon:
        t_next = min(t_hi * 1.5, horizon)
        if g(t_next) >= 0.0:
            return float(brentq(g, t_hi, t_next, xtol=1e-12, rtol=8.9e-16))
        t_hi = t_next
    return None


def crossing_times(d: int, kappa: float, nu: float,
                   horizon: float = 50.0) -> CrossingReport:
    """Times at which the constant-nu trajectory (re)enters P, CP, and EB.

    For nu >= -1 the map never leaves the positivity region (t_p = 0); for
    nu >= 0 it never leaves CP (t_cp = 0).  The EB entry time is the root of
    the binding inequality beta >= 1 - alpha - alpha/d, which exists for
    every decaying trajectory (d - 1 + nu > 0).  When all three are present
    the ordering t_p <= t_cp <= t_eb is enforced as a postcondition.
    """
    check_dimension(d)
    if kappa <= 0:
        raise NegativeRate(f"kappa must be > 0, got {kappa}")
    g = _boundary_functionals(d, kappa, nu)
    t_p = 0.0 if nu >= -1.0 else _first_root(g["P"], horizon)
    t_cp = 0.0 if nu >= 0.0 else _first_root(g["CP"], horizon)
    t_eb = _first_root(g["EB"], horizon)
    margins = {k: float(fn(horizon)) for k, fn in g.items()}
    times = [t for t in (t_p, t_cp, t_eb) if t is not None]
    if len(times) == 3 and not (times[0] <= times[1] + 1e-12 and
                                times[1] <= times[2] + 1e-12):
        raise RuntimeError(f"crossing times out of order: {times}")
    return CrossingReport(t_p=t_p, t_cp=t_cp, t_eb=t_eb, margins=margins,
                          horizon=horizon)


# boundary functional slope coefficients: the boundary line through the
# origin with normal (s, 1) is tangent to the nu-threshold trajectory
BOUNDARY_SLOPES = {
    "P": lambda d: 2.0 / d,
    "CP": lambda d: 1.0 / d,
    "SCHWARZ": lambda d: 2.0 * (d + 1.0) / (d * (d + 2.0)),
}


def tangency_slope(d: int, kappa: float, nu: float, boundary: str) -> float:
    """d/dt at t = 0 of the boundary functional along the semigroup trajectory.

    Returns kappa*(nu+1) for the positivity boundary, kappa*nu for the CP
    boundary, and kappa*(nu + d/(d+2)) for the Schwarz tangency line; a
    central finite difference of the closed-form trajectory must agree to
    1e-6 relative, which is verified on every call.
    """
    check_dimension(d)
    key = boundary.upper()
    if key not in BOUNDARY_SLOPES:
        raise UnknownName(
            f"unknown boundary {boundary!r}; choose from {sorted(BOUNDARY_SLOPES)}"
        )
    slope = BOUNDARY_SLOPES[key](d)
    analytic = {
        "P": kappa * (nu + 1.0),
        "CP": kappa * nu,
        "SCHWARZ": kappa * (nu + d / (d + 2.0)),
    }[key]

    def functional(t):
        a_fac = np.exp(-kappa * d * t)
        b_fac = np.exp(-kappa * (d - 1.0 + nu) * t)
        return (a_fac - b_fac) + slope * (1.0 - a_fac)

    step = 1e-6
    fd = (functional(step) - functional(-step)) / (2.0 * step)
    if abs(fd - analytic) > 1e-6 * max(1.0, abs(analytic)):
        raise RuntimeError(
            f"finite-difference slope {fd} disagrees with analytic {analytic}"
        )
    return analytic


# ---------------------------------------------------------------------------
# Weyl operators and the mixture of conjugation semigroups
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _weyl_cached(d: int):
    check_dimension(d)
    omega = np.exp(2j * np.pi / d)
    z = np.diag(omega ** np.arange(d))
    x = np.zeros((d, d), dtype=complex)
    for k in range(d):
        x[(k + 1) % d, k] = 1.0
    ops = []
    for k in range(d):
        zk = np.linalg.matrix_power(z, k)
        for l in range(d):
            w = zk @ np.linalg.matrix_power(x, l)
            w.flags.writeable = False
            ops.append(w)
    return tuple(ops)


def weyl_ops(d: int):
    """The d^2 Weyl unitaries W_{kl} = Z^k X^l, indexed by k*d + l.

    Z is the diagonal clock, X the cyclic shift.  Their uniform twirl is
    completely depolarizing: sum_{kl} W X W^+ = d * I * Tr X.
    """
    return list(_weyl_cached(d))


def _shift_weyl_transfers(d: int):
    """Conjugation transfers of the W_{kl} with l > 0."""
    ops = _weyl_cached(d)
    out = []
    for k in range(d):
        for l in range(1, d):
            w = ops[k * d + l]
            out.append(np.kron(w.conj(), w))
    return out


def weyl_mixture_map(d: int, t: float) -> SuperMap:
    """Uniform mixture of the d(d-1) semigroups exp(t(W . W^+ - id)), l > 0.

    The mixture is CPTP for every t >= 0 and its Choi matrix is singular
    (the map rides the boundary of complete positivity).
    """
    t = _check_time(t)
    check_dimension(d)
    eye = np.eye(d * d, dtype=complex)
    acc = np.zeros((d * d, d * d), dtype=complex)
    for conj_transfer in _shift_weyl_transfers(d):
        acc += expm(t * (conj_transfer - eye))
    return SuperMap(d, acc / (d * (d - 1)))


def weyl_commutant_average(d: int) -> np.ndarray:
    """Exact t -> infinity transfer of the Weyl mixture.

    Conjugation by W_{kl} has order dividing d, so each semigroup converges
    to the group average (1/d) sum_n C^n, the conditional expectation onto
    the commutant of W_{kl}; the mixture converges to their mean.
    """
    check_dimension(d)
    acc = np.zeros((d * d, d * d), dtype=complex)
    for conj_transfer in _shift_weyl_transfers(d):
        power = np.eye(d * d, dtype=complex)
        proj = np.zeros_like(acc)
        for _ in range(d):
            proj += power
            power = power @ conj_transfer
        acc += proj / d
    return acc / (d * (d - 1))


# ---------------------------------------------------------------------------
# time-local generator extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtractionReport:
    generator: SuperMap
    kappa_fit: float
    nu_fit: float
    residual: float
    condition_number: float


@lru_cache(maxsize=None)
def _generator_basis(d: int):
    """Transfers of the two dissipative blocks of the generator family.

    hop   = X -> I Tr X - Delta(X) - (d-1) X        (coefficient kappa)
    phase = X -> d (Delta(X) - X)                   (coefficient kappa nu / d)
    """
    t_id, t_tau0, t_delta = family_transfer_parts(d)
    hop = d * t_tau0 - t_delta - (d - 1.0) * t_id
    phase = d * (t_delta - t_id)
    return hop, phase


def extract_time_local_generator(map_fn: Callable[[float], SuperMap], t: float,
                                 dt: float = 1e-5,
                                 cond_limit: float = 1e12) -> ExtractionReport:
    """Numerical time-local generator L_t = (d Phi_t / dt) Phi_t^{-1}.

    Central differences with step ``dt``; the result is least-squares
    fitted to the two-parameter generator structure (diagonal Hamiltonian
    absent), reporting (kappa_fit, nu_fit) and the Frobenius residual of
    the fit.  Raises SingularMap when the transfer condition number
    exceeds ``cond_limit`` (the map is not invertible there).
    """
    t = _check_time(t)
    m0 = map_fn(t)
    d = m0.d
    cond = float(np.linalg.cond(m0.transfer))
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularMap(f"transfer condition number {cond:.3e} at t={t}")
    if t >= dt:
        deriv = (map_fn(t + dt).transfer - map_fn(t - dt).transfer) / (2.0 * dt)
    else:
        deriv = (map_fn(t + dt).transfer - m0.transfer) / dt
    gen = deriv @ np.linalg.inv(m0.transfer)

    hop, phase = _generator_basis(d)
    basis = np.column_stack([hop.ravel(), phase.ravel()])
    coef, *_ = np.linalg.lstsq(basis, gen.ravel(), rcond=None)
    residual = float(np.linalg.norm(basis @ coef - gen.ravel()))
    kappa_fit = float(coef[0].real)
    nu_fit = float(d * coef[1].real / kappa_fit) if kappa_fit != 0.0 else np.nan
    return ExtractionReport(
        generator=SuperMap(d, gen),
        kappa_fit=kappa_fit,
        nu_fit=nu_fit,
        residual=residual,
        condition_number=cond,
    )


# ---------------------------------------------------------------------------
# quadrature fallback for generic (kappa(t), nu(t)) rates
# ---------------------------------------------------------------------------

def alpha_beta_by_quadrature(d: int, kappa_fn: Callable[[float], float],
                             nu_fn: Callable[[float], float], t: float,
                             tol: float = 1e-11):
    """(alpha, beta) from adaptive quadrature of the rate integrals.

    Cross-checks the closed-form trajectories; useful for arbitrary rates.
    """
    from scipy.integrate import quad

    t = _check_time(t)
    check_dimension(d)
    int_kappa = quad(kappa_fn, 0.0, t, epsabs=tol, epsrel=tol, limit=500)[0]
    int_kn = quad(lambda u: kappa_fn(u) * (d - 1.0 + nu_fn(u)), 0.0, t,
                  epsabs=tol, epsrel=tol, limit=500)[0]
    a_fac = np.exp(-d * int_kappa)
    b_fac = np.exp(-int_kn)
    return 1.0 - a_fac, a_fac - b_fac


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    alpha: float
    beta: float
    verdict: object  # regions.RegionVerdict
    schwarz_flag: str  # "in", "out", or "unknown"
    min_choi_eig: float


def trajectory_point(s: Schedule, t: float, sample_budget: int = 0,
                     seed: int = 42) -> TrajectoryPoint:
    """One sampled point of a schedule's trajectory with its verdicts.

    The Schwarz flag is 'in' when the point is CP (CP implies Schwarz),
    'out' when it is not positive or a falsifier finds a witness (budget
    permitting), and 'unknown' otherwise.

    Boundary-riding schedules sit at margin zero, where the strict boolean
    verdicts are decided by the last rounding error; use ``min_choi_eig``
    (and the verdict margins) on the boundary, not the booleans.
    """
    from .regions import classify_point, schwarz_falsify

    alpha, beta = alpha_beta_at(s, t)
    verdict = classify_point(MapParams(s.d, alpha, beta))
    m = map_at(s, t)
    choi_min = float(np.linalg.eigvalsh(m.choi)[0])
    if verdict.completely_positive:
        flag = "in"
    elif not verdict.positive:
        flag = "out"
    elif sample_budget > 0 and schwarz_falsify(m, sample_budget, seed) is not None:
        flag = "out"
    else:
        flag = "unknown"
    return TrajectoryPoint(t=float(t), alpha=alpha, beta=beta, verdict=verdict,
                           schwarz_flag=flag, min_choi_eig=choi_min)
