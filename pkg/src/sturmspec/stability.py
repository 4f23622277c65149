"""Two-block (square) stability certificates and the measure lower bound.

A potential window whose first 2n sites form a square with a bounded block
trace pins every solution from below: by Cayley-Hamilton, any solution
satisfies U(2n) - tr(M) U(n) + U(0) = 0, so
||U(0)|| <= (|tr| + 1) max(||U(n)||, ||U(2n)||) and no solution can decay.
Certificates here are finite evidence for single windows and sampled
energies; no claim about the full hull or every spectral energy is made.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CertificateError, InvalidInputError, WindowError
from .sturmian import c_alpha_prefix, standard_words, window_coverage_check
from .transfer import iterate_solution, transfer_product
from .words import Word, detect_square_prefix, frequency


def _window_word(window, k, n):
    """Word over the distinct values of the window slice [k, n]."""
    vals = window.slice_values(k, n)
    levels = sorted(set(vals))
    if len(levels) > 255:
        raise InvalidInputError("too many distinct potential values")
    index = {v: i for i, v in enumerate(levels)}
    return Word(bytes(index[v] for v in vals), max(len(levels), 1))


@dataclass(frozen=True)
class GordonCertificate:
    """Square test plus sampled trace bound for a window at period n.

    verdict = square_ok and every sampled |trace| <= c_used.
    """

    n: int
    c_used: float
    square_ok: bool
    trace_samples: tuple[tuple[float, float], ...]  # (E, |tr M(E, 1, n)|)
    verdict: bool
    provenance: str


def gordon_membership(window, n, c_bound, energy_samples):
    """Certify the two-block condition at period ``n``: the first 2n sites
    repeat, and |tr M(E, 1, n)| <= c_bound at each sampled energy."""
    if n < 1:
        raise InvalidInputError("period must be >= 1")
    if not window.covers(1, 2 * n):
        raise WindowError(f"window must cover [1, {2 * n}]")
    if not energy_samples:
        raise InvalidInputError("need at least one sample energy")
    square_ok = detect_square_prefix(_window_word(window, 1, 2 * n), n)
    samples = []
    traces_ok = True
    for e in energy_samples:
        tr = abs(transfer_product(window, e, 1, n).trace())
        samples.append((float(e), tr))
        if tr > c_bound:
            traces_ok = False
    return GordonCertificate(
        n=n,
        c_used=float(c_bound),
        square_ok=square_ok,
        trace_samples=tuple(samples),
        verdict=square_ok and traces_ok,
        provenance=window.provenance,
    )


@dataclass(frozen=True)
class NondecayReport:
    """Solution-norm lower bound over a certified square window.

    For every seed, r = max(||U(n)||, ||U(2n)||) / ||U(0)|| must stay above
    1/(c_bound + 1); ``min_ratio`` is the worst case over the seeds and
    ``max_identity_residual`` the worst float residual of the two-block
    identity itself.
    """

    n: int
    energy: float
    c_bound: float
    lower_bound: float
    min_ratio: float
    seeds_tested: int
    max_identity_residual: float

    @property
    def ok(self):
        return self.min_ratio >= self.lower_bound - 1e-9


def nondecay_verify(window, n, energy, seeds, c_bound=None):
    """Check the non-decay inequality for each seed on a square window.

    Requires the square condition at period n and, when ``c_bound`` is
    given, |tr| <= c_bound at this energy (otherwise the measured trace
    itself is used as the bound)."""
    if n < 1:
        raise InvalidInputError("period must be >= 1")
    if not window.covers(1, 2 * n):
        raise WindowError(f"window must cover [1, {2 * n}]")
    if not seeds:
        raise InvalidInputError("need at least one seed")
    if not detect_square_prefix(_window_word(window, 1, 2 * n), n):
        raise CertificateError("window is not a square at this period")
    tr_state = transfer_product(window, energy, 1, n)
    tr = tr_state.trace()
    if c_bound is None:
        c_bound = abs(tr)
    elif abs(tr) > c_bound:
        raise CertificateError(
            f"|trace| = {abs(tr):.6g} exceeds certified bound {c_bound:.6g}"
        )
    min_ratio = float("inf")
    max_residual = 0.0
    for seed in seeds:
        traj = iterate_solution(window, energy, seed, n_max=2 * n)
        u0 = traj.vector_norm(0)
        r = max(traj.vector_norm(n), traj.vector_norm(2 * n)) / u0
        min_ratio = min(min_ratio, r)
        # two-block identity residual, component-wise
        res = max(
            abs(traj.u[2 * n + 1] - tr * traj.u[n + 1] + traj.u[1]),
            abs(traj.u[2 * n] - tr * traj.u[n] + traj.u[0]),
        )
        max_residual = max(max_residual, res / max(u0, 1.0))
    return NondecayReport(
        n=n,
        energy=float(energy),
        c_bound=float(c_bound),
        lower_bound=1.0 / (c_bound + 1.0),
        min_ratio=min_ratio,
        seeds_tested=len(seeds),
        max_identity_residual=max_residual,
    )


@dataclass(frozen=True)
class MeasureBoundReport:
    """Occurrence density of the cube s_n^3 and the induced measure bound.

    product = q_n * density estimates the mass of the period-q_n square
    cylinder sets; when the window check passes it must clear
    1/7 - 2 q_n / prefix.
    """

    level: int
    q_n: int
    prefix_length: int
    cube_count: int
    cube_density: Fraction
    product: Fraction
    window_ok: bool
    lower_bound: Fraction
    bound_ok: bool | None  # None when the window check failed
    shortfall: bool  # cube never occurs in the prefix

    def to_dict(self):
        return {
            "level": self.level,
            "q_n": self.q_n,
            "prefix_length": self.prefix_length,
            "cube_count": self.cube_count,
            "cube_density": str(self.cube_density),
            "product": float(self.product),
            "window_ok": self.window_ok,
            "lower_bound": float(self.lower_bound),
            "bound_ok": self.bound_ok,
            "shortfall": self.shortfall,
        }


def stability_measure_bound(cf, level, prefix_length):
    """Estimate q_n * d(s_n^3) by exact counting in the limit-word prefix.

    The density is exact over the prefix; the window property, when it
    holds, forces the product above 1/7 minus a boundary term.
    """
    if level < 1:
        raise InvalidInputError("level must be >= 1")
    if level + 1 > cf.depth:
        raise InvalidInputError(f"need CF depth {level + 1}, have {cf.depth}")
    q_n = cf.q[level]
    q_next = cf.q[level + 1]
    if prefix_length < 10 * q_next:
        raise WindowError(f"prefix must be >= 10 q_(n+1) = {10 * q_next}")
    prefix = c_alpha_prefix(cf, prefix_length)
    cube = standard_words(cf, level).word(level) * 3
    freq = frequency(prefix, cube)
    # One occurrence *starting* per window is all the counting argument
    # needs: disjoint windows each contribute a start, so the density
    # clears 1/window up to a boundary term.
    coverage = window_coverage_check(cf, level, prefix_length)
    window_ok = coverage.all_windows_contain_start
    product = q_n * freq.density
    lower = Fraction(1, 7) - Fraction(2 * q_n, prefix_length)
    return MeasureBoundReport(
        level=level,
        q_n=q_n,
        prefix_length=prefix_length,
        cube_count=freq.occurrence_count,
        cube_density=freq.density,
        product=product,
        window_ok=window_ok,
        lower_bound=lower,
        bound_ok=(product >= lower) if window_ok else None,
        shortfall=freq.occurrence_count == 0,
    )
