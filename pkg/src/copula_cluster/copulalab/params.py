"""Kendall's tau <-> parameter maps for the one-parameter families."""
from __future__ import annotations

import math

from scipy.integrate import quad

__all__ = ["debye1", "frank_tau", "tau_to_param", "param_to_tau"]

FAMILIES = ("clayton", "frank", "gumbel", "gaussian")


def _debye_integrand(t: float) -> float:
    return 1.0 if t == 0.0 else t / math.expm1(t)


def debye1(x: float) -> float:
    """First Debye function ``(1/x) int_0^x t / (e^t - 1) dt``."""
    if x == 0.0:
        return 1.0
    val, _ = quad(_debye_integrand, 0.0, abs(x), epsabs=1e-13, epsrel=1e-12, limit=200)
    d = val / abs(x)
    # D1(-x) = D1(x) + x/2
    return d + abs(x) / 2.0 if x < 0 else d


def frank_tau(theta: float) -> float:
    if theta == 0.0:
        return 0.0
    return 1.0 - 4.0 / theta * (1.0 - debye1(theta))


def _frank_theta(tau: float, tol: float) -> float:
    lo, hi = 0.0, 1.0
    while frank_tau(hi) < tau:
        lo, hi = hi, 2.0 * hi
        if hi > 1e4:
            raise ValueError(f"Frank parameter for tau={tau} is out of practical range")
    while True:
        mid = 0.5 * (lo + hi)
        err = frank_tau(mid) - tau
        if abs(err) <= tol or hi - lo < 1e-15 * max(1.0, hi):
            return mid
        if err < 0:
            lo = mid
        else:
            hi = mid


def tau_to_param(family: str, tau: float, tol: float = 1e-10) -> float:
    """Parameter giving pairwise Kendall's tau ``tau`` in (0, 1).

    Frank is inverted by bisection on its tau formula until ``|tau(theta) - tau| <= tol``.
    """
    family = family.lower()
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    if family == "clayton":
        return 2.0 * tau / (1.0 - tau)
    if family == "gumbel":
        return 1.0 / (1.0 - tau)
    if family == "gaussian":
        return math.sin(math.pi * tau / 2.0)
    if family == "frank":
        return _frank_theta(tau, tol)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def param_to_tau(family: str, param: float) -> float:
    family = family.lower()
    if family == "clayton":
        return param / (param + 2.0)
    if family == "gumbel":
        return 1.0 - 1.0 / param
    if family == "gaussian":
        return 2.0 / math.pi * math.asin(param)
    if family == "frank":
        return frank_tau(param)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
