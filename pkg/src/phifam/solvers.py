"""Small 1-D solvers: bisection on a monotone bracket and ternary minimization.

Robustness over speed: callers expand their own brackets by doubling,
these routines only contract them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import SolverError


@dataclass(frozen=True)
class BisectResult:
    value: float
    f_value: float
    iterations: int
    bracket: tuple[float, float]


def bisect_decreasing(f: Callable[[float], float], lo: float, hi: float, *,
                      target: float = 1.0, tol: float = 1e-12,
                      max_iter: int = 200) -> BisectResult:
    """Solve f(x) = target for decreasing f with f(lo) >= target >= f(hi).

    Stops when |f(mid) - target| <= tol; raises SolverError after
    max_iter bisections.
    """
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm - target) <= tol:
            return BisectResult(mid, fm, it, (lo, hi))
        if fm > target:
            lo = mid
        else:
            hi = mid
    raise SolverError(f"bisection did not reach |f - {target:g}| <= {tol:g}",
                      bracket=(lo, hi), iterations=max_iter)


@dataclass(frozen=True)
class TernaryResult:
    value: float
    f_value: float
    iterations: int


def ternary_min(f: Callable[[float], float], lo: float, hi: float, *,
                tol: float = 1e-12, max_iter: int = 500) -> TernaryResult:
    """Minimize a unimodal f on [lo, hi] by ternary search.

    Contracts the interval until its width falls below
    tol * max(1, |lo| + |hi|); returns the best point seen.
    """
    best_x, best_f = lo, f(lo)
    fh = f(hi)
    if fh < best_f:
        best_x, best_f = hi, fh
    it = 0
    while it < max_iter and (hi - lo) > tol * max(1.0, abs(lo) + abs(hi)):
        it += 1
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        f1, f2 = f(m1), f(m2)
        if f1 < best_f:
            best_x, best_f = m1, f1
        if f2 < best_f:
            best_x, best_f = m2, f2
        if f1 <= f2:
            hi = m2
        else:
            lo = m1
    return TernaryResult(best_x, best_f, it)
