"""Face decomposition and closed-form moment machinery for shapes.

A loop, drawn together with the horizontal axis, cuts each half-plane into
faces: one unbounded face per half-plane and some bounded ones.  Free
vertices (base points the loop skips) each sit in exactly one upper face
and one lower face, namely the region under the innermost enclosing arc of
that half-plane, or the unbounded face if no arc encloses them.  Within a
half-plane the region under an arc but outside its child arcs is
connected, so "innermost enclosing arc" is a complete face label.

Everything downstream is built from the per-face free-vertex counts:

* ``face_weight`` (one Catalan factor per bounded face) counts the ways to
  fill the bounded faces of a placed copy with non-crossing arcs;
* the open pair counts (half the free-vertex count of each unbounded face)
  shift the Catalan indices for filling the rest of the plane;
* the overlap scan finds the offsets at which two copies of a shape can
  coexist, and each feasible overlap contributes an exact rational
  correction to the variance coefficient of the central limit theorem.

All shape constants and moment values are exact (int / Fraction); the
``log_*`` evaluators are floating-point companions for sizes where exact
integers are impractical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence, Union

from .combinatorics import catalan, choose, falling_factorial, log_catalan
from .errors import InvalidShapeError, WeakShapeError
from .meanders import Shape, arcs_noncrossing, format_shape

__all__ = [
    "FaceDecomposition",
    "OverlapInfo",
    "ShapeConstants",
    "CltParameters",
    "HypothesisReport",
    "TightnessProfile",
    "face_decomposition",
    "pair_placement",
    "overlap_scan",
    "shape_constants",
    "overlap_correction",
    "disjoint_moment_term",
    "factorial_moment_strong",
    "log_factorial_moment_strong",
    "log_factorial_moment_asymptotic",
    "clt_parameters",
    "clt_hypothesis_check",
    "tightness_profile",
    "constants_report",
    "fraction_json",
]

Placement = Sequence[tuple[Shape, int]]


@dataclass(frozen=True)
class FaceDecomposition:
    """Free vertices per face for one placed loop or several.

    ``upper`` / ``lower`` map each bounded face, labelled by its innermost
    arc in absolute coordinates, to the number of free vertices incident
    to it.  ``open_upper`` / ``open_lower`` count the free vertices of the
    two unbounded faces.  Bounded faces with no free vertices are omitted
    (they contribute a Catalan factor of 1).
    """

    upper: tuple[tuple[tuple[int, int], int], ...]
    lower: tuple[tuple[tuple[int, int], int], ...]
    open_upper: int
    open_lower: int

    @property
    def free_count(self) -> int:
        return self.open_upper + sum(c for _, c in self.upper)

    def bounded_counts(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.upper) + tuple(c for _, c in self.lower)


def _innermost(arcs: Sequence[tuple[int, int]], v: int) -> tuple[int, int] | None:
    """Innermost arc strictly enclosing v, or None.  Enclosing arcs of a
    non-crossing family are nested, so the shortest one is innermost."""
    best = None
    for a, b in arcs:
        if a < v < b and (best is None or b - a < best[1] - best[0]):
            best = (a, b)
    return best


def _placed_arcs(placement: Placement) -> tuple[list[tuple[int, int]], list[tuple[int, int]], list[int]]:
    """Absolute (upper arcs, lower arcs, support) of a list of placed copies."""
    upper: list[tuple[int, int]] = []
    lower: list[tuple[int, int]] = []
    support: list[int] = []
    for shape, offset in placement:
        if offset < 1:
            raise ValueError(f"offset {offset} must be >= 1")
        shift = offset - 1
        upper.extend((a + shift, b + shift) for a, b in shape.upper)
        lower.extend((a + shift, b + shift) for a, b in shape.lower)
        support.extend(v + shift for v in shape.support)
    return upper, lower, support


def face_decomposition(loops: Union[Shape, Placement]) -> FaceDecomposition:
    """Assign every free vertex of the combined base to its upper and
    lower face and aggregate the counts per face.

    ``loops`` is a single shape (placed at 1) or a sequence of
    ``(shape, offset)`` copies.  The copies must have disjoint supports
    and mutually non-crossing arcs within each half-plane.
    """
    placement: Placement = [(loops, 1)] if isinstance(loops, Shape) else list(loops)
    upper_arcs, lower_arcs, support = _placed_arcs(placement)
    if len(set(support)) != len(support):
        raise InvalidShapeError("support: placed copies share a vertex")
    if not arcs_noncrossing(upper_arcs) or not arcs_noncrossing(lower_arcs):
        raise InvalidShapeError("crossing: placed copies cross")
    members = set(support)
    base = range(min(support), max(support) + 1)
    up_faces: dict[tuple[int, int], int] = {}
    lo_faces: dict[tuple[int, int], int] = {}
    open_upper = open_lower = 0
    for v in base:
        if v in members:
            continue
        arc = _innermost(upper_arcs, v)
        if arc is None:
            open_upper += 1
        else:
            up_faces[arc] = up_faces.get(arc, 0) + 1
        arc = _innermost(lower_arcs, v)
        if arc is None:
            open_lower += 1
        else:
            lo_faces[arc] = lo_faces.get(arc, 0) + 1
    return FaceDecomposition(
        upper=tuple(sorted(up_faces.items())),
        lower=tuple(sorted(lo_faces.items())),
        open_upper=open_upper,
        open_lower=open_lower,
    )


# ---------------------------------------------------------------------------
# Shape constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OverlapInfo:
    """A feasible joint placement of two copies, the second starting at
    ``offset``.

    ``base_size`` is the size of the combined base interval
    (``2 * half_length + offset - 1``).  ``open_free_upper`` and
    ``open_free_lower`` are the raw free-vertex counts of the unbounded
    faces; they stay doubled (i.e. un-halved) because they are odd for
    even offsets.  ``correction`` is the exact contribution of this
    overlap offset to the variance coefficient.
    """

    offset: int
    base_size: int
    face_weight: int
    open_free_upper: int
    open_free_lower: int
    correction: Fraction


@dataclass(frozen=True)
class ShapeConstants:
    """All placement constants of one shape.

    ``face_weight`` is the product of Catalan numbers of the bounded-face
    free-vertex half-counts; ``open_pairs_upper`` / ``open_pairs_lower``
    are half the free-vertex counts of the unbounded faces.  A shape is
    strong when no offset admits two overlapping copies.
    """

    half_length: int
    face_weight: int
    open_pairs_upper: int
    open_pairs_lower: int
    overlaps: tuple[OverlapInfo, ...]

    @property
    def is_strong(self) -> bool:
        return not self.overlaps

    @property
    def denominator_power(self) -> int:
        """The exponent e with 4**e the natural normalizer: 2*ell - c+ - c-."""
        return 2 * self.half_length - self.open_pairs_upper - self.open_pairs_lower


def _face_weight(decomp: FaceDecomposition) -> int:
    w = 1
    for count in decomp.bounded_counts():
        if count % 2:
            raise InvalidShapeError(f"matching: bounded face has odd free count {count}")
        w *= catalan(count // 2)
    return w


def pair_placement(shape: Shape, offset: int) -> FaceDecomposition | None:
    """Face decomposition of two copies at positions 1 and ``offset``, or
    None when the copies collide, cross, or leave a bounded face with an
    odd free-vertex count (in which case no meandric system can contain
    both copies)."""
    if offset < 2:
        raise ValueError(f"offset must be >= 2, got {offset}")
    shift = offset - 1
    first = set(shape.support)
    if any(v + shift in first for v in shape.support):
        return None
    try:
        decomp = face_decomposition([(shape, 1), (shape, offset)])
    except InvalidShapeError:
        return None
    if any(count % 2 for count in decomp.bounded_counts()):
        return None
    return decomp


def overlap_scan(shape: Shape) -> tuple[OverlapInfo, ...]:
    """Offsets at which two copies of the shape can overlap, with the
    constants of each joint placement.

    Scans offsets ``2 .. 2*half_length`` (the overlapping range).  Offset
    1 is excluded: two distinct copies need distinct starting positions.
    """
    ell = shape.half_length
    single = face_decomposition(shape)
    weight = _face_weight(single)
    out = []
    for offset in range(2, 2 * ell + 1):
        decomp = pair_placement(shape, offset)
        if decomp is None:
            continue
        base_size = 2 * ell + offset - 1
        pair_weight = 1
        for count in decomp.bounded_counts():
            pair_weight *= catalan(count // 2)
        correction = _overlap_correction(
            half_length=ell,
            face_weight=weight,
            open_upper=single.open_upper // 2,
            open_lower=single.open_lower // 2,
            base_size=base_size,
            pair_weight=pair_weight,
            pair_open_upper=decomp.open_upper,
            pair_open_lower=decomp.open_lower,
        )
        out.append(
            OverlapInfo(
                offset=offset,
                base_size=base_size,
                face_weight=pair_weight,
                open_free_upper=decomp.open_upper,
                open_free_lower=decomp.open_lower,
                correction=correction,
            )
        )
    return tuple(out)


def _overlap_correction(
    half_length: int,
    face_weight: int,
    open_upper: int,
    open_lower: int,
    base_size: int,
    pair_weight: int,
    pair_open_upper: int,
    pair_open_lower: int,
) -> Fraction:
    """Exact overlap correction as a dyadic multiple of K_pair / K**2.

    The exponent of 4 in the definition can be a half-integer (odd
    offsets keep it integral, even offsets do not), so it is carried as
    an integer exponent of 2, which is always exact.
    """
    two_log = (
        8 * half_length
        - 2 * base_size
        + pair_open_upper
        + pair_open_lower
        - 4 * open_upper
        - 4 * open_lower
    )
    value = Fraction(pair_weight, face_weight * face_weight)
    if two_log >= 0:
        return value * (1 << two_log)
    return value / (1 << -two_log)


@lru_cache(maxsize=None)
def shape_constants(shape: Shape) -> ShapeConstants:
    """Compute and cache the placement constants of a shape."""
    decomp = face_decomposition(shape)
    if decomp.open_upper % 2 or decomp.open_lower % 2:
        raise InvalidShapeError("matching: unbounded face has odd free count for a single loop")
    constants = ShapeConstants(
        half_length=shape.half_length,
        face_weight=_face_weight(decomp),
        open_pairs_upper=decomp.open_upper // 2,
        open_pairs_lower=decomp.open_lower // 2,
        overlaps=overlap_scan(shape),
    )
    # Structural guarantees: the unbounded faces cannot exhaust the base,
    # and the face weight is dominated by the normalizer.
    ell, weight = constants.half_length, constants.face_weight
    assert constants.open_pairs_upper + constants.open_pairs_lower <= ell - 1
    assert weight * (4 * ell - 1) < 4 ** constants.denominator_power
    return constants


def overlap_correction(shape: Shape, info: OverlapInfo) -> Fraction:
    """Exact variance correction of one feasible overlap offset."""
    constants = shape_constants(shape)
    return _overlap_correction(
        half_length=constants.half_length,
        face_weight=constants.face_weight,
        open_upper=constants.open_pairs_upper,
        open_lower=constants.open_pairs_lower,
        base_size=info.base_size,
        pair_weight=info.face_weight,
        pair_open_upper=info.open_free_upper,
        pair_open_lower=info.open_free_lower,
    )


# ---------------------------------------------------------------------------
# Moment formulas
# ---------------------------------------------------------------------------


def disjoint_moment_term(n: int, u: int, shape: Shape) -> Fraction:
    """Contribution of u-tuples of pairwise non-overlapping copies to the
    u-th factorial moment of the shape count in a uniform size-n system,
    divided by u!.

    Exact rational; zero as soon as u copies cannot fit.
    """
    if u < 0:
        raise ValueError(f"u must be >= 0, got {u}")
    if u == 0:
        return Fraction(1)
    c = shape_constants(shape)
    ell = c.half_length
    placements = choose(2 * n - 2 * u * ell + u, u)
    i_up = n - u * ell + u * c.open_pairs_upper
    i_lo = n - u * ell + u * c.open_pairs_lower
    if placements == 0 or i_up < 0 or i_lo < 0:
        return Fraction(0)
    num = placements * c.face_weight**u * catalan(i_up) * catalan(i_lo)
    return Fraction(num, catalan(n) ** 2)


def factorial_moment_strong(n: int, r: int, shape: Shape) -> Fraction:
    """Exact r-th factorial moment of the count of a strong shape in a
    uniform size-n system.

    For a strong shape every r-tuple of copies is non-overlapping, so the
    moment equals ``r! *`` :func:`disjoint_moment_term`.  Weak shapes are
    rejected: their higher moments also take contributions from
    overlapping tuples.
    """
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    c = shape_constants(shape)
    if not c.is_strong:
        raise WeakShapeError(
            "factorial_moment_strong needs a strong shape; copies of this shape "
            f"can overlap at offsets {[o.offset for o in c.overlaps]}"
        )
    if r == 0:
        return Fraction(1)
    ell = c.half_length
    slots = 2 * n - 2 * r * ell + r
    i_up = n - r * ell + r * c.open_pairs_upper
    i_lo = n - r * ell + r * c.open_pairs_lower
    if slots < r or i_up < 0 or i_lo < 0:
        return Fraction(0)
    num = falling_factorial(slots, r) * c.face_weight**r * catalan(i_up) * catalan(i_lo)
    return Fraction(num, catalan(n) ** 2)


def log_factorial_moment_strong(n: int, r: int, shape: Shape) -> float:
    """Natural log of :func:`factorial_moment_strong` evaluated with
    log-gamma, for sizes where the exact integers are impractical.
    Relative error of the underlying terms is below 1e-12."""
    c = shape_constants(shape)
    if not c.is_strong:
        raise WeakShapeError("log_factorial_moment_strong needs a strong shape")
    if r == 0:
        return 0.0
    ell = c.half_length
    slots = 2 * n - 2 * r * ell + r
    i_up = n - r * ell + r * c.open_pairs_upper
    i_lo = n - r * ell + r * c.open_pairs_lower
    if slots < r or i_up < 0 or i_lo < 0:
        raise ValueError("moment is exactly zero; no finite log")
    return (
        math.lgamma(slots + 1)
        - math.lgamma(slots - r + 1)
        + r * math.log(c.face_weight)
        + log_catalan(i_up)
        + log_catalan(i_lo)
        - 2 * log_catalan(n)
    )


def log_factorial_moment_asymptotic(n: int, r: int, shape: Shape) -> float:
    """Log of the large-n approximation of the r-th factorial moment.

    The leading factor is ``(2 n W / 4**e) ** r`` with W the face weight
    and e the normalizer exponent; the exponential correction combines
    the placement-exclusion term with the overlap corrections.  For a
    strong shape the correction sum is empty.
    """
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if r == 0:
        return 0.0
    c = shape_constants(shape)
    lead = math.log(2 * n * c.face_weight) - c.denominator_power * math.log(4)
    corr = sum(o.correction for o in c.overlaps)
    return r * lead - (r * r / (4 * n)) * (4 * c.half_length - 1) + (r * r / (2 * n)) * float(corr)


# ---------------------------------------------------------------------------
# Central limit theorem parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CltParameters:
    """Exact coefficients of the Gaussian limit of the shape count.

    For the count X_n of a shape in a uniform size-n system,
    ``(X_n - n * mean) / sqrt(n * variance)`` tends to a standard normal.
    """

    mean: Fraction
    variance: Fraction

    @property
    def stddev(self) -> float:
        return math.sqrt(self.variance)


def clt_parameters(shape: Shape) -> CltParameters:
    """Mean and variance coefficients of the shape-count CLT, exactly.

    The mean coefficient is ``2 W / 4**e``.  The variance coefficient is
    ``mean * (1 + (W / 4**e) * (1 - 4*ell + 2 * sum of overlap
    corrections))``; for strong shapes the sum is empty.  Positivity of
    the variance is guaranteed by ``W (4*ell - 1) < 4**e`` together with
    the corrections being positive.
    """
    c = shape_constants(shape)
    scale = Fraction(c.face_weight, 4**c.denominator_power)
    mean = 2 * scale
    corr = sum((o.correction for o in c.overlaps), Fraction(0))
    variance = mean * (1 + scale * (1 - 4 * c.half_length + 2 * corr))
    assert mean > 0 and variance > 0
    return CltParameters(mean=mean, variance=variance)


@dataclass(frozen=True)
class HypothesisReport:
    """Checks of the factorial-moment criterion for asymptotic normality.

    The criterion needs the product ``mu_n * s_n`` to stay above -1, the
    derived scale ``sigma_n = sqrt(mu_n + mu_n**2 s_n)`` to be small
    relative to ``mu_n``, and ``mu_n`` to be small relative to
    ``sigma_n**3``.  For the families arising here (``mu_n`` of order n,
    ``s_n`` of order 1/n) the last two hold exactly when
    ``1 + mu_n * s_n`` is a positive constant, so all three flags reduce
    to that product test; they are reported separately to mirror the
    hypotheses.
    """

    mu: float
    s: float
    product: float
    sigma: float
    product_above_minus_one: bool
    sigma_small_vs_mu: bool
    mu_small_vs_sigma_cubed: bool

    @property
    def all_pass(self) -> bool:
        return (
            self.product_above_minus_one
            and self.sigma_small_vs_mu
            and self.mu_small_vs_sigma_cubed
        )


def clt_hypothesis_check(mu_n: Union[float, Rational], s_n: Union[float, Rational]) -> HypothesisReport:
    """Evaluate the moment-criterion hypotheses at given (mu_n, s_n).

    ``mu_n`` must be positive.  A violation is flagged, not raised.
    """
    if mu_n <= 0:
        raise ValueError(f"mu_n must be positive, got {mu_n}")
    product = mu_n * s_n
    ok = product > -1
    var = mu_n * (1 + product)
    sigma = math.sqrt(float(var)) if var >= 0 else float("nan")
    return HypothesisReport(
        mu=float(mu_n),
        s=float(s_n),
        product=float(product),
        sigma=sigma,
        product_above_minus_one=ok,
        sigma_small_vs_mu=ok,
        mu_small_vs_sigma_cubed=ok,
    )


# ---------------------------------------------------------------------------
# Tightness profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TightnessProfile:
    """Bounding terms for the overlapping-tuple contributions.

    ``terms[u-1] = (u, B_u)`` with
    ``B_u = C(r-1, u-1) (2*ell)**(r-u) * disjoint_moment_term(n, u)``.
    ``min_ratio`` is the smallest ``B_{u+1} / B_u``; the tuples with few
    blocks are negligible exactly when this stays large.
    ``growth_constant`` is the fitted lower bound Q in
    ``F_{u+1} / F_u >= Q n / u`` over the scanned range.
    """

    n: int
    r: int
    terms: tuple[tuple[int, Fraction], ...]
    min_ratio: Fraction | None
    growth_constant: Fraction | None


def tightness_profile(n: int, r: int, shape: Shape) -> TightnessProfile:
    """Exact bounding terms ``B_{r,1..r}`` and their minimal growth ratio."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if r * r > n:
        raise ValueError(f"profile needs r <= sqrt(n), got r={r} n={n}")
    ell = shape.half_length
    f = [disjoint_moment_term(n, u, shape) for u in range(1, r + 1)]
    terms = tuple(
        (u, choose(r - 1, u - 1) * Fraction((2 * ell) ** (r - u)) * f[u - 1])
        for u in range(1, r + 1)
    )
    min_ratio: Fraction | None = None
    growth: Fraction | None = None
    for u in range(1, r):
        b_u, b_next = terms[u - 1][1], terms[u][1]
        if b_u > 0:
            ratio = b_next / b_u
            min_ratio = ratio if min_ratio is None else min(min_ratio, ratio)
        if f[u - 1] > 0:
            q = (f[u] / f[u - 1]) * Fraction(u, n)
            growth = q if growth is None else min(growth, q)
    return TightnessProfile(n=n, r=r, terms=terms, min_ratio=min_ratio, growth_constant=growth)


# ---------------------------------------------------------------------------
# JSON report
# ---------------------------------------------------------------------------


def fraction_json(x: Fraction) -> dict[str, str]:
    """Rational as decimal strings, the wire form used by all reports."""
    return {"num": str(x.numerator), "den": str(x.denominator)}


def constants_report(shape: Shape) -> dict:
    """Constants and CLT parameters of a shape in the documented JSON
    schema (K and KI as decimal strings, doubled open counts for
    overlaps, rationals as num/den strings)."""
    c = shape_constants(shape)
    params = clt_parameters(shape)
    return {
        "shape": format_shape(shape),
        "ell": c.half_length,
        "K": str(c.face_weight),
        "cPlus": c.open_pairs_upper,
        "cMinus": c.open_pairs_lower,
        "strong": c.is_strong,
        "overlaps": [
            {
                "i": o.offset,
                "twoEllI": o.base_size,
                "KI": str(o.face_weight),
                "twoCPlusI": o.open_free_upper,
                "twoCMinusI": o.open_free_lower,
                "bI": fraction_json(o.correction),
            }
            for o in c.overlaps
        ],
        "mu": fraction_json(params.mean),
        "sigma2": fraction_json(params.variance),
    }
