"""Transfer-matrix cocycle: products, solution iteration, Lyapunov exponents.

A product over sites k..n multiplies the single-site matrices

    A(j) = [[E - V(j), -1], [1, 0]]

with the index-n factor leftmost.  Entries are periodically rescaled and the
scale accumulated as a log, so products over 10^6 sites never overflow even
at Lyapunov exponents around 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DepthError, InvalidInputError, NumericError, WindowError

RESCALE_EVERY = 32


@dataclass(frozen=True)
class TransferState:
    """2x2 matrix (row-major a, b, c, d) with an accumulated log scale.

    The represented matrix is m * exp(log_scale); its determinant is 1, so
    det(m) * exp(2 log_scale) = 1 up to float drift.
    """

    m: tuple[float, float, float, float]
    log_scale: float = 0.0

    def trace(self):
        """tr of the represented matrix; inf if the scale overflows."""
        a, _, _, d = self.m
        try:
            return (a + d) * math.exp(self.log_scale)
        except OverflowError:
            return math.copysign(math.inf, a + d)

    def log_norm(self):
        """log of the max-abs-row-sum norm of the represented matrix."""
        a, b, c, d = self.m
        return math.log(max(abs(a) + abs(b), abs(c) + abs(d))) + self.log_scale

    def det_residual(self):
        """det(m) * exp(2 log_scale) - 1.

        Meaningful while log_scale stays small (bounded products); for
        strongly growing products the float det is cancellation noise.
        """
        a, b, c, d = self.m
        return (a * d - b * c) * math.exp(2.0 * self.log_scale) - 1.0

    def normalized(self):
        """(unit-row-sum-norm matrix, total log norm) for scale-free
        comparisons of large products."""
        a, b, c, d = self.m
        s = max(abs(a) + abs(b), abs(c) + abs(d))
        return (a / s, b / s, c / s, d / s), math.log(s) + self.log_scale


IDENTITY = TransferState(m=(1.0, 0.0, 0.0, 1.0), log_scale=0.0)


def site_state(energy, v):
    return TransferState(m=(energy - v, -1.0, 1.0, 0.0), log_scale=0.0)


def multiply(left, right):
    """State product: (left * right) represents M_left M_right."""
    a1, b1, c1, d1 = left.m
    a2, b2, c2, d2 = right.m
    a = a1 * a2 + b1 * c2
    b = a1 * b2 + b1 * d2
    c = c1 * a2 + d1 * c2
    d = c1 * b2 + d1 * d2
    s = max(abs(a) + abs(b), abs(c) + abs(d))
    if s == 0.0 or math.isinf(s) or math.isnan(s):
        raise NumericError("transfer product degenerated despite rescaling")
    return TransferState(
        m=(a / s, b / s, c / s, d / s),
        log_scale=left.log_scale + right.log_scale + math.log(s),
    )


def state_power(state, k):
    """state^k by binary exponentiation (k >= 0)."""
    if k < 0:
        raise InvalidInputError("negative matrix power")
    result = IDENTITY
    base = state
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base) if k > 1 else base
        k >>= 1
    return result


def _product_over_values(values, energy, rescale_every=RESCALE_EVERY):
    """Left-to-right accumulation of A over values V(k)..V(n)."""
    a, b, c, d = 1.0, 0.0, 0.0, 1.0
    log_scale = 0.0
    count = 0
    for v in values:
        x = energy - v
        a, b, c, d = x * a - c, x * b - d, a, b
        count += 1
        if count % rescale_every == 0:
            s = max(abs(a) + abs(b), abs(c) + abs(d))
            a, b, c, d = a / s, b / s, c / s, d / s
            log_scale += math.log(s)
    return TransferState(m=(a, b, c, d), log_scale=log_scale)


def transfer_product(window, energy, k, n, rescale_every=RESCALE_EVERY):
    """M(E, window, k, n): the cocycle over sites k..n inclusive."""
    if k > n:
        raise InvalidInputError("k > n")
    if not window.covers(k, n):
        raise WindowError(f"window [{window.lo}, {window.hi}] does not cover [{k}, {n}]")
    return _product_over_values(window.slice_values(k, n), energy, rescale_every)


def sturmian_transfer(cf, coupling, energy, level):
    """Transfer matrix over the standard word s_level via the word recursion
    s_n = s_{n-1}^{a_n} s_{n-2}, i.e. M(s_n) = M(s_{n-2}) M(s_{n-1})^{a_n}.

    Equal (up to rounding) to the explicit product over the spelled-out word.
    """
    if level < -1:
        raise InvalidInputError("level must be >= -1")
    if level > cf.depth:
        raise DepthError(f"level {level} exceeds CF depth {cf.depth}")
    m_prev = site_state(energy, coupling * 1.0)  # s_{-1} = "1"
    if level == -1:
        return m_prev
    m_cur = site_state(energy, 0.0)  # s_0 = "0"
    if level == 0:
        return m_cur
    m_prev, m_cur = m_cur, multiply(m_prev, state_power(m_cur, cf.coefficient(1) - 1))
    for n in range(2, level + 1):
        m_prev, m_cur = m_cur, multiply(m_prev, state_power(m_cur, cf.coefficient(n)))
    return m_cur


@dataclass(frozen=True)
class SolutionTrajectory:
    """Solution of u(n+1) + u(n-1) + V(n) u(n) = E u(n), seeded by
    (u(0), u(1)) and iterated forward over the window."""

    energy: float
    seed: tuple[float, float]
    u: tuple[float, ...]  # u[k] = u(k), k = 0..top

    @property
    def top(self):
        return len(self.u) - 1

    def vector_norm(self, k):
        """Euclidean norm of U(k) = (u(k+1), u(k))."""
        if not 0 <= k < self.top:
            raise WindowError(f"U({k}) needs u up to {k + 1}, have {self.top}")
        return math.hypot(self.u[k + 1], self.u[k])


def iterate_solution(window, energy, seed, n_max=None):
    """Iterate u(n+1) = (E - V(n)) u(n) - u(n-1) for n = 1..n_max."""
    u0, u1 = seed
    if u0 == 0.0 and u1 == 0.0:
        raise InvalidInputError("degenerate zero seed")
    top = window.hi if n_max is None else n_max
    if window.lo > 1 or top > window.hi:
        raise WindowError(f"window [{window.lo}, {window.hi}] does not cover [1, {top}]")
    u = [float(u0), float(u1)]
    prev, cur = float(u0), float(u1)
    vals = window.slice_values(1, top)
    for v in vals:
        prev, cur = cur, (energy - v) * cur - prev
        u.append(cur)
    return SolutionTrajectory(energy=energy, seed=(float(u0), float(u1)), u=tuple(u))


@dataclass(frozen=True)
class LyapunovEstimate:
    """Finite-step slope estimates of (1/n) log ||M||.

    Forward and backward existence-and-agreement has no finite-scale
    certificate, so the gap between the two estimates is exposed only as a
    diagnostic.
    """

    energy: float
    steps: int
    gamma_plus: float | None
    gamma_minus: float | None

    @property
    def gamma_gap(self):
        if self.gamma_plus is None or self.gamma_minus is None:
            return None
        return abs(self.gamma_plus - self.gamma_minus)


def lyapunov_estimate(window, energy, steps, rescale_every=RESCALE_EVERY):
    """Estimate gamma+ over sites [1, steps] and gamma- over [-steps, -1],
    whichever sides the window covers (at least one required)."""
    if steps < 1000:
        raise InvalidInputError("need steps >= 1000 for a meaningful slope")
    forward = window.covers(1, steps)
    backward = window.covers(-steps, -1)
    if not forward and not backward:
        raise WindowError("window covers neither [1, steps] nor [-steps, -1]")
    gamma_plus = gamma_minus = None
    if forward:
        state = transfer_product(window, energy, 1, steps, rescale_every)
        gamma_plus = state.log_norm() / steps
    if backward:
        state = transfer_product(window, energy, -steps, -1, rescale_every)
        gamma_minus = state.log_norm() / steps
    return LyapunovEstimate(
        energy=energy, steps=steps, gamma_plus=gamma_plus, gamma_minus=gamma_minus
    )


def forward_lyapunov_batch(values, energies, rescale_every=RESCALE_EVERY):
    """gamma+ estimates for many energies over one shared forward potential
    V(1)..V(steps); vectorized across energies.

    Returns a float array aligned with ``energies``.
    """
    steps = len(values)
    if steps < 1:
        raise InvalidInputError("empty potential")
    e = np.asarray(energies, dtype=float)
    a = np.ones_like(e)
    b = np.zeros_like(e)
    c = np.zeros_like(e)
    d = np.ones_like(e)
    log_scale = np.zeros_like(e)
    count = 0
    for v in values:
        x = e - v
        a, c = x * a - c, a
        b, d = x * b - d, b
        count += 1
        if count % rescale_every == 0:
            s = np.maximum(np.abs(a) + np.abs(b), np.abs(c) + np.abs(d))
            a /= s
            b /= s
            c /= s
            d /= s
            log_scale += np.log(s)
    norm = np.maximum(np.abs(a) + np.abs(b), np.abs(c) + np.abs(d))
    return (np.log(norm) + log_scale) / steps
