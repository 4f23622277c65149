"""Band spectra of periodic approximants and their Lebesgue measures.

The spectrum of the period-q potential spelled by a word is
{E : |tr M(E)| <= 2} with M(E) the transfer matrix over one period: exactly
q disjoint closed bands.  Bands are located on an adaptive energy grid and
their edges pinned by bisection of tr -+ 2.

The almost sure spectrum itself has no finite description; throughout, the
intersection of two consecutive approximant spectra serves as its proxy and
the level is always reported alongside results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ResolutionError
from .sturmian import c_alpha_prefix, standard_words
from .transfer import forward_lyapunov_batch, sturmian_transfer

EDGE_TOL = 1e-12  # bisection width in E; keeps |tr| - 2 at edges ~ 1e-8 even for narrow bands
_LOG_TWO = math.log(2.0)


def _site_values(word, coupling):
    return [coupling * s for s in word.symbols]


def _disc_log_grid(values, energies, rescale_every=64):
    """(mantissa, log scale) of the period trace over an energy grid.

    The trace is mantissa * exp(log_scale); working in log scale keeps deep
    gap values finite for any period and coupling.
    """
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
    return a + d, log_scale


def _inside_grid(mantissa, log_scale):
    """|trace| <= 2, elementwise in log scale (a zero mantissa is inside)."""
    with np.errstate(divide="ignore"):
        return np.log(np.abs(mantissa)) + log_scale <= _LOG_TWO


def _disc_log_at(values, energy, rescale_every=64):
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
    return a + d, log_scale


def _discriminant_at(values, energy):
    """Plain trace of the period product (inf if it overflows)."""
    mantissa, log_scale = _disc_log_at(values, energy)
    try:
        return mantissa * math.exp(log_scale)
    except OverflowError:
        return math.copysign(math.inf, mantissa)


def _inside_at(values, energy):
    mantissa, log_scale = _disc_log_at(values, energy)
    if mantissa == 0.0:
        return True
    return math.log(abs(mantissa)) + log_scale <= _LOG_TWO


def _bisect_edge(values, e_in, e_out, tol=EDGE_TOL):
    """Band edge between an in-band and an out-of-band energy, found by
    bisecting the membership predicate |tr| <= 2 (robust when a grid point
    sits exactly on an edge)."""
    e_in, e_out = float(e_in), float(e_out)
    while abs(e_out - e_in) > tol:
        mid = 0.5 * (e_in + e_out)
        if mid == e_in or mid == e_out:
            break
        if _inside_at(values, mid):
            e_in = mid
        else:
            e_out = mid
    return 0.5 * (e_in + e_out)


@dataclass(frozen=True)
class BandSpectrum:
    """Sorted disjoint closed energy bands of a periodic approximant."""

    bands: tuple[tuple[float, float], ...]
    period: int
    coupling: float
    level: int | None = None

    @property
    def band_count(self):
        return len(self.bands)

    @property
    def measure(self):
        return sum(hi - lo for lo, hi in self.bands)

    def gaps(self):
        """Open intervals between consecutive bands."""
        return [
            (self.bands[i][1], self.bands[i + 1][0])
            for i in range(len(self.bands) - 1)
        ]


def band_spectrum(
    word,
    coupling,
    e_range=None,
    level=None,
    points_per_band=16,
    max_refinements=3,
    edge_tol=EDGE_TOL,
):
    """Bands {E : |tr M(E)| <= 2} of the word taken as a periodic potential.

    The grid starts at 16 points per expected band and refines x4 until the
    period-many bands separate; if they never do, the failure is raised, not
    truncated.
    """
    q = len(word)
    if q < 1:
        raise InvalidInputError("empty period word")
    values = _site_values(word, coupling)
    if e_range is None:
        pad = 0.5
        lo_e = -2.0 - abs(coupling) - pad
        hi_e = 2.0 + abs(coupling) + pad
    else:
        lo_e, hi_e = float(e_range[0]), float(e_range[1])
    n_points = points_per_band * q + 1
    bands = []
    for _ in range(max_refinements + 1):
        grid = np.linspace(lo_e, hi_e, n_points)
        mantissa, log_scale = _disc_log_grid(values, grid)
        inside = _inside_grid(mantissa, log_scale)
        if inside[0] or inside[-1]:
            raise InvalidInputError("energy range must start and end outside all bands")
        bands = []
        clean = True
        edge_open = None
        for i in range(len(grid) - 1):
            in0, in1 = inside[i], inside[i + 1]
            if in0 == in1:
                if not in0 and (mantissa[i] > 0.0) != (mantissa[i + 1] > 0.0):
                    clean = False  # band fully inside one grid cell
                continue
            if in0:
                edge = _bisect_edge(values, grid[i], grid[i + 1], edge_tol)
            else:
                edge = _bisect_edge(values, grid[i + 1], grid[i], edge_tol)
            if not in0:
                edge_open = edge
            elif edge_open is not None:
                bands.append((edge_open, edge))
                edge_open = None
            else:
                clean = False
        if clean and edge_open is None and len(bands) == q:
            return BandSpectrum(
                bands=tuple(bands), period=q, coupling=coupling, level=level
            )
        n_points = (n_points - 1) * 4 + 1
    raise ResolutionError(
        f"isolated {len(bands)} of {q} bands at the finest grid; "
        f"bands may touch or be narrower than the resolution"
    )


def intersect_intervals(a, b):
    """Intersection of two sorted disjoint closed interval lists."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def union_intervals(a, b):
    """Union of two sorted disjoint closed interval lists, merged."""
    merged = sorted(list(a) + list(b))
    out = []
    for lo, hi in merged:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def interval_measure(intervals):
    return sum(hi - lo for lo, hi in intervals)


@dataclass(frozen=True)
class IntersectionReport:
    measure_a: float
    measure_b: float
    intersection: tuple[tuple[float, float], ...]
    measure_intersection: float


def measure_and_intersect(a, b):
    """Measures of two band spectra and of their intersection."""
    if a.coupling != b.coupling:
        raise InvalidInputError("band spectra computed at different couplings")
    inter = intersect_intervals(a.bands, b.bands)
    return IntersectionReport(
        measure_a=a.measure,
        measure_b=b.measure,
        intersection=tuple(inter),
        measure_intersection=interval_measure(inter),
    )


def band_samples(intervals, per_band=3):
    """Evenly spaced interior sample energies, per_band per interval
    (per_band=3 gives the quartile points and the midpoint)."""
    pts = []
    for lo, hi in intervals:
        for i in range(1, per_band + 1):
            pts.append(lo + (hi - lo) * i / (per_band + 1))
    return pts


def sturmian_band_spectrum(cf, coupling, level):
    """Band spectrum of the level-``level`` standard word."""
    word = standard_words(cf, level).word(level)
    return band_spectrum(word, coupling, level=level)


@dataclass(frozen=True)
class TraceBoundReport:
    """Empirical windows into the uniform trace bound: sup over sampled
    proxy energies of |tr M(s_k)| per level k.

    The true uniform constant is not computable here; only the sampled sup
    and its stabilization across proxy depths are measured.
    """

    level_max: int
    proxy_level: int
    coupling: float
    sample_energies: tuple[float, ...]
    sup_per_level: tuple[float, ...]  # index k = 0..level_max
    overall_sup: float

    def derived_constant(self, headroom=0.1):
        """Trace-bound constant for certificates: sampled sup plus headroom."""
        return self.overall_sup * (1.0 + headroom)


def trace_bound_scan(cf, coupling, level_max, samples_per_band=3, proxy_level=None):
    """Sample |tr M(s_k)| for k <= level_max over proxy spectrum energies.

    Proxy energies are interior samples of the bands of the intersection of
    the approximant spectra at ``proxy_level`` and ``proxy_level + 1``.
    """
    if coupling == 0:
        raise InvalidInputError("trace bound needs a non-zero coupling")
    if level_max < 0:
        raise InvalidInputError("level_max must be >= 0")
    proxy = level_max if proxy_level is None else proxy_level
    spec_a = sturmian_band_spectrum(cf, coupling, proxy)
    spec_b = sturmian_band_spectrum(cf, coupling, proxy + 1)
    proxy_bands = intersect_intervals(spec_a.bands, spec_b.bands)
    energies = band_samples(proxy_bands, samples_per_band)
    if not energies:
        raise ResolutionError("proxy spectrum intersection is empty")
    sups = []
    for k in range(level_max + 1):
        sups.append(
            max(abs(sturmian_transfer(cf, coupling, e, k).trace()) for e in energies)
        )
    return TraceBoundReport(
        level_max=level_max,
        proxy_level=proxy,
        coupling=coupling,
        sample_energies=tuple(energies),
        sup_per_level=tuple(sups),
        overall_sup=max(sups),
    )


@dataclass(frozen=True)
class ZeroLyapunovReport:
    """Lyapunov slopes on and off the proxy spectrum.

    On-spectrum estimates should hug zero; the controls sit at midpoints of
    the widest gaps of the union of the two approximant spectra, where the
    exponent is genuinely positive.
    """

    level: int
    steps: int
    coupling: float
    in_spectrum: tuple[tuple[float, float], ...]  # (E, gamma+)
    max_gamma_in_spectrum: float
    gap_controls: tuple[tuple[float, float, float], ...]  # (E, gap width, gamma+)
    min_gamma_gap_controls: float
    free_gamma: float


def zero_lyapunov_check(cf, coupling, level, steps, gap_controls=4):
    """Estimate gamma+ at proxy-spectrum band midpoints and at gap-midpoint
    controls, over the length-``steps`` prefix potential.

    Controls sit in the ``gap_controls`` widest gaps only: narrow gaps hug
    the limiting spectrum, where a finite-step slope is legitimately small
    and proves nothing about positivity.
    """
    spec_a = sturmian_band_spectrum(cf, coupling, level)
    spec_b = sturmian_band_spectrum(cf, coupling, level + 1)
    proxy_bands = intersect_intervals(spec_a.bands, spec_b.bands)
    if not proxy_bands:
        raise ResolutionError("proxy spectrum intersection is empty")
    in_energies = band_samples(proxy_bands, per_band=1)

    union = union_intervals(spec_a.bands, spec_b.bands)
    gaps = [
        (union[i][1], union[i + 1][0]) for i in range(len(union) - 1)
    ]
    gaps.sort(key=lambda g: g[1] - g[0], reverse=True)
    gaps = sorted(gaps[:gap_controls])
    gap_energies = [0.5 * (lo + hi) for lo, hi in gaps]
    gap_widths = [hi - lo for lo, hi in gaps]

    values = _site_values(c_alpha_prefix(cf, steps), coupling)
    gammas = forward_lyapunov_batch(values, in_energies + gap_energies)
    n_in = len(in_energies)
    in_part = tuple(zip(in_energies, gammas[:n_in].tolist()))
    gap_part = tuple(
        (e, w, g) for e, w, g in zip(gap_energies, gap_widths, gammas[n_in:].tolist())
    )
    free_gamma = float(forward_lyapunov_batch([0.0] * steps, [0.0])[0])
    return ZeroLyapunovReport(
        level=level,
        steps=steps,
        coupling=coupling,
        in_spectrum=in_part,
        max_gamma_in_spectrum=max(g for _, g in in_part),
        gap_controls=gap_part,
        min_gamma_gap_controls=min((g for _, _, g in gap_part), default=float("nan")),
        free_gamma=free_gamma,
    )
