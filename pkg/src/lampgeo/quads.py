"""(epsilon, M)-quadrilateral machinery and brute-force verifiers.

A quadrilateral is four distinct base-group points with small cyclic side
deltas and large diagonal deltas; a parallelogram additionally satisfies
the exact corner relation p1 + p3 = p2 + p4.  The verifiers enumerate
bounded search spaces exhaustively and report every hypothesis-satisfying
quadruple that fails the corner relation.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .base_groups import (
    BSNumber,
    LampConfig,
    SolContext,
    SolVector,
    bs_normalize,
    lamp_delta,
    sol_delta,
)
from .errors import DecompositionError, DomainError, InternalError

Scalar = int | Fraction


# ---------------------------------------------------------------------------
# family adapters: one point algebra per base group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LampFamily:
    """Point algebra of the lamplighter base group ⊕ Z_n."""

    n: int

    name = "lamplighter"

    @property
    def zero(self) -> LampConfig:
        return LampConfig.zero(self.n)

    def delta(self, p: LampConfig, q: LampConfig) -> int:
        return lamp_delta(p, q)[0]

    def add(self, p, q):
        return p + q

    def sub(self, p, q):
        return p - q

    def neg(self, p):
        return -p

    def sort_key(self, p: LampConfig):
        return p.entries

    def fmt(self, p: LampConfig) -> str:
        from .formats import format_config
        return format_config(p)

    def fits(self, v: LampConfig, residual: LampConfig) -> bool:
        # digitwise v <= residual, so subtraction never wraps mod n
        return not v.is_zero() and all(val <= residual.value_at(i) for i, val in v.entries)

    def magnitude_key(self, v: LampConfig):
        sg = lamp_delta(self.zero, v)[1]
        return (sg if sg is not None else -1, len(v.entries))


@dataclass(frozen=True)
class BSFamily:
    """Point algebra of Z[1/n]."""

    n: int

    name = "baumslag-solitar"

    @property
    def zero(self) -> BSNumber:
        return BSNumber(0, 0, self.n)

    def delta(self, p: BSNumber, q: BSNumber) -> int:
        return abs((p - q).r)

    def add(self, p, q):
        return p + q

    def sub(self, p, q):
        return p - q

    def neg(self, p):
        return -p

    def sort_key(self, p: BSNumber):
        return p.value()

    def fmt(self, p: BSNumber) -> str:
        from .formats import format_bs
        return format_bs(p)

    def fits(self, v: BSNumber, residual: BSNumber) -> bool:
        if v.is_zero() or residual.is_zero():
            return False
        vv, rv = v.value(), residual.value()
        return (vv > 0) == (rv > 0) and abs(vv) <= abs(rv)

    def magnitude_key(self, v: BSNumber):
        return (self.delta(self.zero, v), abs(v.value()))


@dataclass(frozen=True)
class SolFamily:
    """Point algebra of Z^2 with the delta of an A-invariant form."""

    ctx: SolContext

    name = "sol"

    @property
    def zero(self) -> SolVector:
        return (0, 0)

    def delta(self, p: SolVector, q: SolVector) -> int:
        return sol_delta(self.ctx, p, q)

    def add(self, p, q):
        return (p[0] + q[0], p[1] + q[1])

    def sub(self, p, q):
        return (p[0] - q[0], p[1] - q[1])

    def neg(self, p):
        return (-p[0], -p[1])

    def sort_key(self, p: SolVector):
        return p

    def fmt(self, p: SolVector) -> str:
        return f"{p[0]},{p[1]}"

    def fits(self, v: SolVector, residual: SolVector) -> bool:
        if v == (0, 0):
            return False
        return all(vi * ri >= 0 and abs(vi) <= abs(ri) for vi, ri in zip(v, residual))

    def magnitude_key(self, v: SolVector):
        return (self.delta(self.zero, v), abs(v[0]) + abs(v[1]))


Family = LampFamily | BSFamily | SolFamily


# ---------------------------------------------------------------------------
# quadrilaterals
# ---------------------------------------------------------------------------

class Classification(Enum):
    NOT_QUADRILATERAL = "not_quadrilateral"
    QUADRILATERAL = "quadrilateral"
    PARALLELOGRAM = "parallelogram"


@dataclass(frozen=True)
class ClassifyResult:
    kind: Classification
    reason: str | None = None


@dataclass(frozen=True)
class Quad:
    """Four base-group points, arranged as the matrix [[p1, p2], [p4, p3]]."""

    family: Family
    p1: object
    p2: object
    p3: object
    p4: object

    @property
    def points(self) -> tuple:
        return (self.p1, self.p2, self.p3, self.p4)

    def corner_holds(self) -> bool:
        f = self.family
        return f.add(self.p1, self.p3) == f.add(self.p2, self.p4)


@dataclass(frozen=True)
class QuadParams:
    """Side bound epsilon and diagonal bound M, exact scalars with M > epsilon."""

    epsilon: Scalar
    M: Scalar

    def __post_init__(self):
        if self.epsilon <= 0 or self.M <= 0:
            raise DomainError("epsilon and M must be positive")
        if self.M <= self.epsilon:
            raise DomainError(f"M must exceed epsilon, got M={self.M}, epsilon={self.epsilon}")


def classify(q: Quad, params: QuadParams) -> ClassifyResult:
    """Three-way classification against the side/diagonal thresholds."""
    pts = q.points
    for i, j in itertools.combinations(range(4), 2):
        if pts[i] == pts[j]:
            return ClassifyResult(Classification.NOT_QUADRILATERAL,
                                  f"duplicate points p{i + 1} and p{j + 1}")
    f = q.family
    sides = ((q.p1, q.p2), (q.p2, q.p3), (q.p3, q.p4), (q.p4, q.p1))
    for idx, (x, y) in enumerate(sides, start=1):
        d = f.delta(x, y)
        if d > params.epsilon:
            return ClassifyResult(Classification.NOT_QUADRILATERAL,
                                  f"side {idx} has delta {d} > epsilon")
    for label, (x, y) in (("p1p3", (q.p1, q.p3)), ("p2p4", (q.p2, q.p4))):
        d = f.delta(x, y)
        if d < params.M:
            return ClassifyResult(Classification.NOT_QUADRILATERAL,
                                  f"diagonal {label} has delta {d} < M")
    if q.corner_holds():
        return ClassifyResult(Classification.PARALLELOGRAM)
    return ClassifyResult(Classification.QUADRILATERAL)


def rotate(q: Quad) -> Quad:
    """Cyclic shift (p1,p2,p3,p4) -> (p2,p3,p4,p1); classification-invariant."""
    return Quad(q.family, q.p2, q.p3, q.p4, q.p1)


@dataclass(frozen=True)
class GeneratorSet:
    """Finite list of base-group points used to telescope parallelograms."""

    family: Family
    elements: tuple

    def __post_init__(self):
        if len(set(map(self.family.sort_key, self.elements))) != len(self.elements):
            raise DomainError("generator set contains duplicates")

    def sorted_elements(self) -> list:
        return sorted(self.elements, key=self.family.sort_key)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def jsonable(value):
    """Recursively convert report values to JSON-safe types; Fractions go to strings."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else str(value.numerator)
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


@dataclass
class VerifyReport:
    """Outcome of an exhaustive verifier run.

    ``violations`` holds hypothesis-satisfying quadruples (as point tuples)
    that fail the corner relation, sorted lexicographically; ``vacuous``
    flags a run during which no quadrilateral was checked at all.
    """

    params: dict
    search_space: dict
    count_checked: int
    violations: list
    vacuous: bool
    elapsed_ms: int
    family: str
    extras: dict = field(default_factory=dict)
    point_fmt: Callable[[object], str] = field(default=str, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_jsonable(self, include_timing: bool = False) -> dict:
        out = {
            "params": jsonable(self.params),
            "search_space": jsonable(self.search_space),
            "count_checked": self.count_checked,
            "violations": [[self.point_fmt(p) for p in quad] for quad in self.violations],
            "vacuous": self.vacuous,
        }
        if include_timing:
            out["elapsed_ms"] = self.elapsed_ms
        if self.extras:
            out["extras"] = jsonable(self.extras)
        out["family"] = self.family
        return out


def _chunk_slices(count: int, chunks: int) -> list[range]:
    chunks = max(1, min(chunks, count)) if count else 1
    bounds = [round(i * count / chunks) for i in range(chunks + 1)]
    return [range(bounds[i], bounds[i + 1]) for i in range(chunks)]


# ---------------------------------------------------------------------------
# lamplighter large-quadrilateral verifier
# ---------------------------------------------------------------------------

def _mask_gap(d: int) -> int:
    # d != 0; width of the disagreement interval of a bitmask difference
    return d.bit_length() - 1 - ((d & -d).bit_length() - 1)


def _masks_gap_le(width: int, s: int) -> list[int]:
    out = []
    for lo in range(width):
        for g in range(min(s, width - 1 - lo) + 1):
            if g == 0:
                out.append(1 << lo)
            else:
                base = (1 << lo) | (1 << (lo + g))
                for pat in range(1 << (g - 1)):
                    out.append(base | (pat << (lo + 1)))
    return sorted(out)


def _mask_to_config(mask: int) -> LampConfig:
    return LampConfig(2, tuple((i, 1) for i in range(mask.bit_length()) if mask >> i & 1))


def _tuples_gap_le(n: int, width: int, s: int) -> list[tuple[int, ...]]:
    out = []
    vals = range(1, n)
    for lo in range(width):
        for g in range(min(s, width - 1 - lo) + 1):
            if g == 0:
                for v in vals:
                    t = [0] * width
                    t[lo] = v
                    out.append(tuple(t))
            else:
                for a in vals:
                    for b in vals:
                        for interior in itertools.product(range(n), repeat=g - 1):
                            t = [0] * width
                            t[lo] = a
                            t[lo + g] = b
                            t[lo + 1:lo + g] = interior
                            out.append(tuple(t))
    return sorted(out)


def _tuple_gap(d: tuple[int, ...]) -> int:
    lo = next(i for i, v in enumerate(d) if v)
    hi = next(i for i in range(len(d) - 1, -1, -1) if d[i])
    return hi - lo


def _tuple_to_config(n: int, t: tuple[int, ...]) -> LampConfig:
    return LampConfig(n, tuple((i, v) for i, v in enumerate(t) if v))


def verify_lamp_claim(
    S: int,
    window_width: int,
    n: int = 2,
    hypotheses: str = "full",
    chunks: int = 1,
) -> VerifyReport:
    """Check that every large lamplighter quadrilateral is a parallelogram.

    Enumerates quadruples (a,b,c,d) supported in [0, window_width) with
    a = 0 (translation invariance).  The hypotheses are the strict ones of
    the support lemma: side gaps < S and diagonal gaps > 2S (non-strict
    thresholds admit boundary counterexamples, e.g. a={}, b={0:1},
    d={0:1,1:1,2:1}, c={2:1} at S=1).  ``hypotheses="full"`` imposes all
    four cyclic side conditions; ``"relaxed"`` imposes only the two on
    (b-a) and (c-a), the literal printed form, which admits witnesses.
    """
    if S < 1:
        raise DomainError("S must be >= 1")
    if window_width < 2:
        raise DomainError("window_width must be >= 2")
    if hypotheses not in ("full", "relaxed"):
        raise DomainError(f"unknown hypotheses mode {hypotheses!r}")
    start = time.perf_counter()
    if n == 2:
        sides = _masks_gap_le(window_width, S - 1)
        sub = lambda x, y: x ^ y
        add = sub
        gap_of = _mask_gap
        to_config = _mask_to_config
        zero_pt = 0
        all_points = list(range(1, 1 << window_width))
    else:
        sides = _tuples_gap_le(n, window_width, S - 1)
        sub = lambda x, y: tuple((a - b) % n for a, b in zip(x, y))
        add = lambda x, y: tuple((a + b) % n for a, b in zip(x, y))
        gap_of = _tuple_gap
        to_config = lambda t: _tuple_to_config(n, t)
        zero_pt = (0,) * window_width
        all_points = [t for t in itertools.product(range(n), repeat=window_width) if any(t)]

    violations = []
    checked = 0
    enumerated = 0
    min_diag = 2 * S + 1  # strict: |supp| > 2S

    slices = _chunk_slices(len(sides), chunks)
    if hypotheses == "full":
        for sl in slices:
            for bi in sl:
                b = sides[bi]
                for u in sides:
                    d = add(b, u)
                    if d == zero_pt:
                        continue
                    if gap_of(d) < min_diag:  # diagonal (a, d)
                        continue
                    for c in sides:
                        enumerated += 1
                        if c == b or c == d:
                            continue
                        bc = sub(b, c)
                        if gap_of(bc) < min_diag:  # diagonal (b, c)
                            continue
                        dc = sub(d, c)
                        if gap_of(dc) >= S:  # side (d, c), strict
                            continue
                        checked += 1
                        if d != add(b, c):  # corner relation a + d = b + c
                            violations.append((b, c, d))
    else:
        large = [p for p in all_points if gap_of(p) >= min_diag]
        for sl in slices:
            for bi in sl:
                b = sides[bi]
                for c in sides:
                    if c == b:
                        continue
                    bc = sub(b, c)
                    if gap_of(bc) < min_diag:
                        continue
                    for d in large:
                        if d == b or d == c:
                            continue
                        enumerated += 1
                        checked += 1
                        if d != add(b, c):
                            violations.append((b, c, d))

    zero = LampConfig.zero(n)
    viol_quads = sorted(
        ((zero, to_config(b), to_config(d), to_config(c)) for b, c, d in violations),
        key=lambda quad: tuple(p.entries for p in quad),
    )
    fam = LampFamily(n)
    return VerifyReport(
        params={"S": S, "n": n, "hypotheses": hypotheses,
                "sides": f"|supp| < {S}", "diagonals": f"|supp| > {2 * S}"},
        search_space={"window": [0, window_width], "side_candidates": len(sides),
                      "tuples_enumerated": enumerated},
        count_checked=checked,
        violations=viol_quads,
        vacuous=checked == 0,
        elapsed_ms=int((time.perf_counter() - start) * 1000),
        family=fam.name,
        point_fmt=fam.fmt,
    )


# ---------------------------------------------------------------------------
# Baumslag-Solitar verifier
# ---------------------------------------------------------------------------

def _nadic(value: Fraction, n: int) -> tuple[int, int]:
    # normalized (r, k) with value = r * n^k and n not dividing r; (0, 0) for zero
    num, den = value.numerator, value.denominator
    k = 0
    while den != 1:
        g = math.gcd(den, n)
        if g == 1:
            raise DomainError(f"{value} is not an element of Z[1/{n}]")
        num *= n // g
        den //= g
        k -= 1
    if num == 0:
        return 0, 0
    while num % n == 0:
        num //= n
        k += 1
    return num, k


def verify_taback(
    n: int,
    eps: int,
    M: int,
    numerator_bound: int,
    exp_range: tuple[int, int],
    chunks: int = 1,
) -> VerifyReport:
    """Check that every (eps, M)-quadrilateral in Z[1/n] within bounds is a parallelogram.

    The search space is {r * n^k : |r| <= numerator_bound, k in exp_range}
    with p1 pinned to 0.  Requires M > eps^2 (the separation the valuation
    argument needs); side decompositions (r_i, k_i) are recorded and the
    parallelogram side relations k1=k3, k2=k4, r1=-r3, r2=-r4 are checked
    for every quadrilateral found.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if eps < 1 or M <= eps * eps:
        raise DomainError(f"need M > eps^2 for the valuation argument, got eps={eps}, M={M}")
    kmin, kmax = exp_range
    if kmin > kmax:
        raise DomainError("empty exponent range")
    start = time.perf_counter()

    nf = Fraction(n)

    def in_space(value: Fraction) -> bool:
        r, k = _nadic(value, n)
        return r != 0 and abs(r) <= numerator_bound and kmin <= k <= kmax

    small_rs = [r for r in range(-min(eps, numerator_bound), min(eps, numerator_bound) + 1)
                if r and r % n]
    d_eps = sorted(r * nf ** k for r in small_rs for k in range(kmin, kmax + 1))
    # p3 - p2 ranges over s * n^j; j is bounded because p3 must lie in the space
    jmax = kmax + max(1, math.ceil(math.log(numerator_bound + eps, n)))
    steps = sorted(s * nf ** j for s in [r for r in range(-eps, eps + 1) if r and r % n]
                   for j in range(kmin, jmax + 1))

    violations = []
    side_relation_failures = []
    samples = []
    checked = 0
    zero = Fraction(0)

    slices = _chunk_slices(len(d_eps), chunks)
    for sl in slices:
        for i2 in sl:
            p2 = d_eps[i2]
            for u in steps:
                p3 = p2 + u
                if p3 == zero or p3 == p2 or not in_space(p3):
                    continue
                r3, _ = _nadic(p3, n)
                if abs(r3) < M:  # diagonal (p1, p3)
                    continue
                for p4 in d_eps:
                    if p4 == p2 or p4 == p3:
                        continue
                    rs, _ = _nadic(p3 - p4, n)
                    if abs(rs) > eps:  # side (p3, p4)
                        continue
                    rd, _ = _nadic(p2 - p4, n)
                    if abs(rd) < M:  # diagonal (p2, p4)
                        continue
                    checked += 1
                    sides = [_nadic(p2, n), _nadic(p3 - p2, n),
                             _nadic(p4 - p3, n), _nadic(-p4, n)]
                    if len(samples) < 5:
                        samples.append({"points": ["0", str(p2), str(p3), str(p4)],
                                        "sides_rk": sides})
                    (r1, k1), (r2, k2), (r3s, k3s), (r4, k4) = sides
                    if not (k1 == k3s and k2 == k4 and r1 == -r3s and r2 == -r4):
                        side_relation_failures.append((zero, p2, p3, p4))
                    if p3 != p2 + p4:  # corner relation
                        violations.append((zero, p2, p3, p4))

    fam = BSFamily(n)
    to_bs = lambda x: BSNumber.from_fraction(x, n)
    viol = sorted(violations)
    return VerifyReport(
        params={"n": n, "epsilon": eps, "M": M},
        search_space={"numerator_bound": numerator_bound, "exp_range": list(exp_range),
                      "side_candidates": len(d_eps), "step_candidates": len(steps)},
        count_checked=checked,
        violations=[tuple(to_bs(x) for x in quad) for quad in viol],
        vacuous=checked == 0,
        elapsed_ms=int((time.perf_counter() - start) * 1000),
        family=fam.name,
        extras={"sample_decompositions": samples,
                "side_relation_failures": [[str(x) for x in quad]
                                           for quad in sorted(side_relation_failures)]},
        point_fmt=fam.fmt,
    )


# ---------------------------------------------------------------------------
# SOL verifier and calibration
# ---------------------------------------------------------------------------

def _sol_scan(ctx: SolContext, eps: int, box: int, chunks: int = 1):
    """Enumerate side-satisfying quadruples (p1=0, p2, p3, p4) in the box.

    Yields (p2, p3, p4, min_diagonal_delta, is_parallelogram); the chunked
    partition of the outer loop changes nothing observable.
    """
    pts = [(x, y) for x in range(-box, box + 1) for y in range(-box, box + 1)]
    d_eps = sorted(p for p in pts if p != (0, 0) and 0 < abs(ctx.f(p)) <= eps)
    fvals = {p: abs(ctx.f(p)) for p in pts}
    outer = (d_eps[sl.start:sl.stop] for sl in _chunk_slices(len(d_eps), chunks))
    for p2 in itertools.chain.from_iterable(outer):
        for u in d_eps:
            p3 = (p2[0] + u[0], p2[1] + u[1])
            if p3 == (0, 0) or p3 == p2:
                continue
            if not (-box <= p3[0] <= box and -box <= p3[1] <= box):
                continue
            diag1 = fvals[p3]
            for p4 in d_eps:
                if p4 == p2 or p4 == p3:
                    continue
                side = abs(ctx.f((p3[0] - p4[0], p3[1] - p4[1])))
                if side > eps:
                    continue
                diag2 = abs(ctx.f((p2[0] - p4[0], p2[1] - p4[1])))
                is_par = p3 == (p2[0] + p4[0], p2[1] + p4[1])
                yield p2, p3, p4, min(diag1, diag2), is_par


def verify_schwartz(ctx: SolContext, eps: int, M: int, box_halfwidth: int,
                    chunks: int = 1) -> VerifyReport:
    """Check that every (eps, M)-quadrilateral of the SOL lattice in the box is a parallelogram.

    Sub-threshold M is allowed; the resulting report is informational and
    may contain violations.  A run that finds no (eps, M)-quadrilateral at
    all is flagged vacuous.
    """
    if box_halfwidth < 1:
        raise DomainError("box_halfwidth must be >= 1")
    start = time.perf_counter()
    checked = 0
    violations = []
    for p2, p3, p4, min_diag, is_par in _sol_scan(ctx, eps, box_halfwidth, chunks):
        if min_diag < M:
            continue
        checked += 1
        if not is_par:
            violations.append(((0, 0), p2, p3, p4))
    fam = SolFamily(ctx)
    return VerifyReport(
        params={"matrix": [list(r) for r in ctx.a], "form": list(ctx.form),
                "epsilon": eps, "M": M},
        search_space={"box_halfwidth": box_halfwidth},
        count_checked=checked,
        violations=sorted(violations),
        vacuous=checked == 0,
        elapsed_ms=int((time.perf_counter() - start) * 1000),
        family=fam.name,
        point_fmt=fam.fmt,
    )


def calibrate_schwartz(ctx: SolContext, eps: int, box_halfwidth: int) -> VerifyReport:
    """Find the least integer M* making the box free of non-parallelogram
    (eps, M*)-quadrilaterals, in one enumeration pass.

    M* = 1 + the largest min-diagonal delta over side-satisfying
    non-parallelograms; the returned report is the verification at M*,
    with M* recorded in extras.
    """
    start = time.perf_counter()
    worst_nonpar = 0
    best_par = 0
    checked_at_mstar = 0
    for _, _, _, min_diag, is_par in _sol_scan(ctx, eps, box_halfwidth):
        if is_par:
            best_par = max(best_par, min_diag)
        else:
            worst_nonpar = max(worst_nonpar, min_diag)
    m_star = worst_nonpar + 1
    report = verify_schwartz(ctx, eps, m_star, box_halfwidth)
    report.extras = {
        "M_star": m_star,
        "max_nonparallelogram_min_diagonal": worst_nonpar,
        "max_parallelogram_min_diagonal": best_par,
    }
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report


# ---------------------------------------------------------------------------
# telescoping decomposition
# ---------------------------------------------------------------------------

def greedy_sum(family: Family, sigma: GeneratorSet, target, max_steps: int = 1_000_000) -> list:
    """Write target as an ordered sum of generator-set elements.

    Selection is greedy: among elements that still fit the residual, take
    the one with the largest (delta-from-zero, magnitude); the selected
    multiset is emitted sorted ascending by the family's canonical order.
    Raises DecompositionError with the residual when no element fits.
    """
    residual = target
    picked: list = []
    by_pref = sorted(sigma.elements, key=family.magnitude_key, reverse=True)
    steps = 0
    while residual != family.zero:
        choice = next((v for v in by_pref if family.fits(v, residual)), None)
        if choice is None:
            raise DecompositionError(
                f"residual {family.fmt(residual)} not expressible over the generator set",
                residual=residual)
        picked.append(choice)
        residual = family.sub(residual, choice)
        steps += 1
        if steps > max_steps:
            raise DecompositionError("decomposition exceeded step limit", residual=residual)
    return sorted(picked, key=family.sort_key)


def telescope_decompose(q: Quad, sigma: GeneratorSet) -> list[Quad]:
    """Split a parallelogram into the chain P_1..P_k over a generator set.

    Writes c - a = v_1 + ... + v_k (c = p4, a = p1) and forms
    P_j = [[a + pre_{j-1}, b + pre_{j-1}], [a + pre_j, b + pre_j]].
    Every P_j satisfies the corner relation exactly, and the formal sum of
    the chain's corner relations telescopes to the input's.
    """
    f = q.family
    if f != sigma.family:
        raise DomainError("quad and generator set families differ")
    pts = q.points
    for i, j in itertools.combinations(range(4), 2):
        if pts[i] == pts[j]:
            raise DomainError("telescoping needs four distinct points")
    if not q.corner_holds():
        raise DomainError("telescoping needs a parallelogram (corner relation fails)")
    target = f.sub(q.p4, q.p1)
    terms = greedy_sum(f, sigma, target)
    chain = []
    a, b = q.p1, q.p2
    for v in terms:
        a2, b2 = f.add(a, v), f.add(b, v)
        chain.append(Quad(f, a, b, b2, a2))
        a, b = a2, b2
    if not (a == q.p4 and b == q.p3):
        raise InternalError("telescoping chain does not land on the far corners")
    return chain


def telescoping_identity_holds(q: Quad, chain: Sequence[Quad]) -> bool:
    """Cancel the chain's formal corner relations and compare with the input's.

    Each P_j contributes p1+p3 on the left and p2+p4 on the right; after
    cancelling matching terms the remainder must be exactly
    {q.p1, q.p3} = {q.p2, q.p4}.
    """
    from collections import Counter
    key = q.family.sort_key
    left: Counter = Counter()
    right: Counter = Counter()
    for p in chain:
        left[key(p.p1)] += 1
        left[key(p.p3)] += 1
        right[key(p.p2)] += 1
        right[key(p.p4)] += 1
    common = left & right
    left -= common
    right -= common
    return (left == Counter([key(q.p1), key(q.p3)])
            and right == Counter([key(q.p2), key(q.p4)]))


# ---------------------------------------------------------------------------
# generating sets and the lamplighter obstruction
# ---------------------------------------------------------------------------

def sigma_admissible(sigma: GeneratorSet, params: QuadParams):
    """True if every ordered pair (v, w), v != w, spans an (eps, M)-parallelogram
    [[0, v], [w, v+w]]; otherwise the first violating ordered pair."""
    f = sigma.family
    elems = sigma.sorted_elements()
    for v in elems:
        for w in elems:
            if v == w:
                continue
            quad = Quad(f, f.zero, v, f.add(v, w), w)
            if classify(quad, params).kind is not Classification.PARALLELOGRAM:
                return (v, w)
    return True


def _lamp_generates_window(sigma: GeneratorSet, window: tuple[int, int]) -> int | None:
    """None if sigma generates all configs supported in the window; else a
    window index witnessing failure."""
    fam = sigma.family
    n = fam.n
    lo, hi = window
    width = hi - lo
    vecs = [tuple(p.value_at(lo + i) for i in range(width)) for p in sigma.elements]

    def is_prime(m: int) -> bool:
        return m >= 2 and all(m % d for d in range(2, int(m ** 0.5) + 1))

    if is_prime(n):
        basis: list[tuple[int, ...]] = []
        pivot_cols: list[int] = []
        for vec in vecs:
            row = list(vec)
            for bvec, pc in zip(basis, pivot_cols):
                if row[pc]:
                    factor = row[pc] * pow(bvec[pc], -1, n)
                    row = [(x - factor * y) % n for x, y in zip(row, bvec)]
            piv = next((i for i, x in enumerate(row) if x), None)
            if piv is not None:
                basis.append(tuple(row))
                pivot_cols.append(piv)
        if len(basis) == width:
            return None
        spanned = set(pivot_cols)
        return lo + next(i for i in range(width) if i not in spanned)

    if n ** width > 1 << 16:
        raise DomainError("window too large for the composite-modulus generation check")
    seen = {(0,) * width}
    frontier = [(0,) * width]
    while frontier:
        nxt = []
        for x in frontier:
            for vec in vecs:
                y = tuple((a + b) % n for a, b in zip(x, vec))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(seen) == n ** width:
        return None
    for i in range(width):
        e = tuple(1 if j == i else 0 for j in range(width))
        if e not in seen:
            return lo + i
    # generated all single lamps yet not the full window: report the window start
    return lo


def lamp_sigma_obstruction(sigma: GeneratorSet, params: QuadParams,
                           window: tuple[int, int]):
    """Exhibit a generator pair that fails to span an (eps, M)-parallelogram.

    Preconditions: log2 M > 2 log2 eps + 1 (checked exactly as M > 2 eps^2),
    sigma supported in and generating the window.  Under these a violating
    pair always exists; its absence would falsify the index-gap argument
    and raises InternalError.
    """
    f = sigma.family
    if not isinstance(f, LampFamily):
        raise DomainError("the obstruction argument is specific to the lamplighter family")
    if params.M <= 2 * params.epsilon * params.epsilon:
        raise DomainError(
            f"need M > 2*eps^2 (log2 M > 2 log2 eps + 1), got eps={params.epsilon}, M={params.M}")
    lo, hi = window
    if hi - lo < 2:
        raise DomainError("window must contain at least two indices")
    if not sigma.elements:
        raise DomainError("empty generator set cannot generate the window")
    for p in sigma.elements:
        if any(not (lo <= i < hi) for i in p.support()):
            raise DomainError(f"generator {f.fmt(p)} is not supported in the window")
    missing = _lamp_generates_window(sigma, window)
    if missing is not None:
        raise DomainError(f"generator set does not generate the window: index {missing} missing")
    if len(sigma.elements) < 2:
        raise DomainError("a single generator cannot generate a window of width >= 2")
    witness = sigma_admissible(sigma, params)
    if witness is True:
        raise InternalError("no violating pair found; the index-gap argument should forbid this")
    return witness
