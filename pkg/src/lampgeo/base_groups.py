"""Base groups of the three families and their boundary metrics.

Three base groups B are supported exactly:

* the lamplighter base ``⊕_Z Z_n`` (finitely supported configurations),
* ``Z[1/n]`` in normalized form ``r * n^k`` with ``n ∤ r``,
* ``Z^2`` carrying the quadratic form left invariant by a hyperbolic
  ``A ∈ SL(2,Z)``.

On each we compute the product boundary quantity ``delta``, the lower and
upper boundary metrics where they make sense, and coarse-height intervals.
All pass/fail arithmetic is exact (ints and Fractions); floats appear only
in SOL coarse-height diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DomainError

SolVector = tuple[int, int]
Matrix2 = tuple[tuple[int, int], tuple[int, int]]


# ---------------------------------------------------------------------------
# lamplighter configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LampConfig:
    """Finitely supported function Z -> Z_n.

    ``entries`` holds (index, value) pairs, strictly sorted by index, with
    every value in {1, ..., n-1}; this is the canonical form, so equality
    and hashing are structural.
    """

    n: int
    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"modulus must be >= 2, got {self.n}")
        prev = None
        for idx, val in self.entries:
            if prev is not None and idx <= prev:
                raise DomainError("entries must be strictly sorted by index")
            if not 0 < val < self.n:
                raise DomainError(f"value {val} at index {idx} not in 1..{self.n - 1}")
            prev = idx

    @classmethod
    def of(cls, n: int, items: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> "LampConfig":
        """Build a canonical config from a mapping or (index, value) pairs.

        Values are reduced mod n; repeated indices accumulate; zeros drop out.
        """
        acc: dict[int, int] = {}
        pairs = items.items() if isinstance(items, Mapping) else items
        for idx, val in pairs:
            acc[idx] = (acc.get(idx, 0) + val) % n
        return cls(n, tuple(sorted((i, v) for i, v in acc.items() if v)))

    @classmethod
    def zero(cls, n: int) -> "LampConfig":
        return cls(n)

    def value_at(self, index: int) -> int:
        for idx, val in self.entries:
            if idx == index:
                return val
        return 0

    def support(self) -> tuple[int, ...]:
        return tuple(idx for idx, _ in self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "LampConfig") -> "LampConfig":
        return lamp_add(self, other)

    def __neg__(self) -> "LampConfig":
        return lamp_neg(self)

    def __sub__(self, other: "LampConfig") -> "LampConfig":
        return lamp_add(self, lamp_neg(other))


def _check_same_modulus(p: LampConfig, q: LampConfig) -> int:
    if p.n != q.n:
        raise DomainError(f"modulus mismatch: {p.n} != {q.n}")
    return p.n


def lamp_add(p: LampConfig, q: LampConfig) -> LampConfig:
    """Componentwise sum mod n; the abelian group law of ⊕ Z_n."""
    n = _check_same_modulus(p, q)
    out: list[tuple[int, int]] = []
    ap, aq = p.entries, q.entries
    i = j = 0
    while i < len(ap) and j < len(aq):
        ip, vp = ap[i]
        iq, vq = aq[j]
        if ip < iq:
            out.append((ip, vp))
            i += 1
        elif iq < ip:
            out.append((iq, vq))
            j += 1
        else:
            v = (vp + vq) % n
            if v:
                out.append((ip, v))
            i += 1
            j += 1
    out.extend(ap[i:])
    out.extend(aq[j:])
    return LampConfig(n, tuple(out))


def lamp_neg(p: LampConfig) -> LampConfig:
    return LampConfig(p.n, tuple((i, p.n - v) for i, v in p.entries))


@dataclass(frozen=True)
class SuppGap:
    """Endpoints of the disagreement interval of two configurations.

    ``l_plus`` is the smallest index where the configs differ, ``l_minus``
    the largest, and ``gap = l_minus - l_plus`` (the interval-length
    convention; the number of indices in the interval is ``gap + 1``).
    """

    l_plus: int
    l_minus: int
    gap: int

    def __post_init__(self):
        if self.gap != self.l_minus - self.l_plus or self.gap < 0:
            raise DomainError("inconsistent SuppGap")

    @property
    def index_count(self) -> int:
        return self.gap + 1


def supp_gap(p: LampConfig, q: LampConfig) -> SuppGap | None:
    """Disagreement interval of p and q, or None when p == q."""
    _check_same_modulus(p, q)
    diff = lamp_add(p, lamp_neg(q))
    if diff.is_zero():
        return None
    lo = diff.entries[0][0]
    hi = diff.entries[-1][0]
    return SuppGap(lo, hi, hi - lo)


def lamp_delta(p: LampConfig, q: LampConfig) -> tuple[int, int | None]:
    """delta(p,q) = n^gap and the gap itself; (0, None) when p == q."""
    sg = supp_gap(p, q)
    if sg is None:
        return 0, None
    return p.n ** sg.gap, sg.gap


def lamp_dl(p: LampConfig, q: LampConfig) -> Fraction:
    """Lower-boundary metric n^(-l_plus). Requires p != q."""
    sg = supp_gap(p, q)
    if sg is None:
        raise DomainError("lower-boundary metric needs distinct configurations")
    return Fraction(p.n) ** (-sg.l_plus)


def lamp_du(p: LampConfig, q: LampConfig) -> Fraction:
    """Upper-boundary metric n^(l_minus). Requires p != q."""
    sg = supp_gap(p, q)
    if sg is None:
        raise DomainError("upper-boundary metric needs distinct configurations")
    return Fraction(p.n) ** sg.l_minus


# ---------------------------------------------------------------------------
# Z[1/n] in normalized form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BSNumber:
    """Element r * n^k of Z[1/n] with n ∤ r (r = 0 forces k = 0)."""

    r: int
    k: int
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"base must be >= 2, got {self.n}")
        if self.r == 0:
            if self.k != 0:
                raise DomainError("zero is normalized as r=0, k=0")
        elif self.r % self.n == 0:
            raise DomainError(f"{self.r} is divisible by {self.n}; not normalized")

    @classmethod
    def normalize(cls, numerator: int, exponent: int, n: int) -> "BSNumber":
        return bs_normalize(numerator, exponent, n)

    @classmethod
    def from_fraction(cls, value: Fraction | int, n: int) -> "BSNumber":
        value = Fraction(value)
        num, den = value.numerator, value.denominator
        k = 0
        while den != 1:
            g = math.gcd(den, n)
            if g == 1:
                raise DomainError(f"{value} is not an element of Z[1/{n}]")
            num *= n // g
            den //= g
            k -= 1
        return bs_normalize(num, k, n)

    def value(self) -> Fraction:
        return Fraction(self.r) * Fraction(self.n) ** self.k

    def is_zero(self) -> bool:
        return self.r == 0

    def _same_base(self, other: "BSNumber") -> None:
        if self.n != other.n:
            raise DomainError(f"base mismatch: {self.n} != {other.n}")

    def __add__(self, other: "BSNumber") -> "BSNumber":
        self._same_base(other)
        return BSNumber.from_fraction(self.value() + other.value(), self.n)

    def __sub__(self, other: "BSNumber") -> "BSNumber":
        self._same_base(other)
        return BSNumber.from_fraction(self.value() - other.value(), self.n)

    def __neg__(self) -> "BSNumber":
        if self.r == 0:
            return self
        return BSNumber(-self.r, self.k, self.n)


def bs_normalize(numerator: int, exponent: int, n: int) -> BSNumber:
    """Canonical r * n^k with n ∤ r; zero normalizes to (0, 0)."""
    if n < 2:
        raise DomainError(f"base must be >= 2, got {n}")
    if numerator == 0:
        return BSNumber(0, 0, n)
    r, k = numerator, exponent
    while r % n == 0:
        r //= n
        k += 1
    return BSNumber(r, k, n)


def bs_delta(p: BSNumber, q: BSNumber) -> int:
    """delta(p,q) = |r| where p - q = r * n^k normalized; 0 iff p == q."""
    p._same_base(q)
    return abs((p - q).r)


# ---------------------------------------------------------------------------
# Z^2 with an A-invariant quadratic form (the SOL lattice base)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolContext:
    """Hyperbolic A in SL(2,Z) with its invariant primitive integer form.

    ``form`` holds (alpha, beta, gamma) of f(x,y) = alpha x^2 + beta xy +
    gamma y^2 with f(Av) = f(v); ``eigen`` carries floating
    (eigenvalue, eigenvector) pairs, expanding direction first, for
    coarse-height diagnostics only.
    """

    a: Matrix2
    form: tuple[int, int, int]
    eigen: tuple[tuple[float, tuple[float, float]], tuple[float, tuple[float, float]]]

    def f(self, v: SolVector) -> int:
        alpha, beta, gamma = self.form
        x, y = v
        return alpha * x * x + beta * x * y + gamma * y * y

    def apply_a(self, v: SolVector) -> SolVector:
        (a, b), (c, d) = self.a
        x, y = v
        return (a * x + b * y, c * x + d * y)

    @property
    def discriminant(self) -> int:
        alpha, beta, gamma = self.form
        return beta * beta - 4 * alpha * gamma


def _solve_invariant_form(a: Matrix2) -> tuple[int, int, int]:
    # f(Av) = f(v) as a linear system in (alpha, beta, gamma):
    # rows are the x^2, xy, y^2 coefficient identities.
    (pa, pb), (pc, pd) = a
    rows = [
        [pa * pa - 1, pa * pc, pc * pc],
        [2 * pa * pb, pa * pd + pb * pc - 1, 2 * pc * pd],
        [pb * pb, pb * pd, pd * pd - 1],
    ]
    m = [[Fraction(x) for x in row] for row in rows]
    # Gaussian elimination; the kernel must be one-dimensional.
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(3):
        piv = next((r for r in range(row, 3) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(3):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[row])]
        pivots.append((row, col))
        row += 1
    if row != 2:
        raise DomainError("invariant-form system is not of rank 2; matrix not hyperbolic?")
    free_col = next(c for c in range(3) if c not in {c for _, c in pivots})
    sol = [Fraction(0)] * 3
    sol[free_col] = Fraction(1)
    for prow, pcol in pivots:
        sol[pcol] = -m[prow][free_col]
    denom = math.lcm(*(x.denominator for x in sol))
    ints = [int(x * denom) for x in sol]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    return ints[0], ints[1], ints[2]


def sol_invariant_form(a: Matrix2 | Iterable[Iterable[int]]) -> SolContext:
    """Context for a hyperbolic A in SL(2,Z): invariant form plus eigen diagnostics.

    Rejects matrices with det != 1 or |trace| <= 2, and (defensively) forms
    with square discriminant, which would break the delta = 0 iff p = q law.
    """
    a = tuple(tuple(int(x) for x in row) for row in a)
    if len(a) != 2 or any(len(row) != 2 for row in a):
        raise DomainError("matrix must be 2x2")
    (pa, pb), (pc, pd) = a
    det = pa * pd - pb * pc
    if det != 1:
        raise DomainError(f"matrix must have determinant 1, got {det}")
    tr = pa + pd
    if abs(tr) <= 2:
        raise DomainError(f"matrix must be hyperbolic (|trace| > 2), got trace {tr}")
    form = _solve_invariant_form(a)
    alpha, beta, gamma = form
    disc = beta * beta - 4 * alpha * gamma
    if disc >= 0 and math.isqrt(disc) ** 2 == disc:
        raise DomainError(f"invariant form has square discriminant {disc}; delta would be degenerate")

    sq = math.sqrt(tr * tr - 4)
    lam_plus = (tr + sq) / 2
    lam_minus = (tr - sq) / 2
    if abs(lam_plus) < abs(lam_minus):
        lam_plus, lam_minus = lam_minus, lam_plus

    def eigvec(lam: float) -> tuple[float, float]:
        # rows of (A - lam I) are both orthogonal complements of the eigenvector
        if abs(pb) > 1e-12:
            v = (float(pb), lam - pa)
        elif abs(pc) > 1e-12:
            v = (lam - pd, float(pc))
        else:  # diagonal integer matrix cannot be hyperbolic with det 1
            v = (1.0, 0.0)
        norm = math.hypot(*v)
        return (v[0] / norm, v[1] / norm)

    eigen = ((lam_plus, eigvec(lam_plus)), (lam_minus, eigvec(lam_minus)))
    return SolContext(a=a, form=form, eigen=eigen)


def sol_delta(ctx: SolContext, p: SolVector, q: SolVector) -> int:
    """delta(p,q) = |f(p - q)|; A-invariant, 0 iff p == q."""
    dx, dy = p[0] - q[0], p[1] - q[1]
    return abs(ctx.f((dx, dy)))


# ---------------------------------------------------------------------------
# coarse heights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoarseHeightInterval:
    """Interval [t_u, t_l] of heights at which two vertical geodesics come close.

    Endpoints are measured in log-base-`base` units.  The true upper
    endpoint is ``t_high + log_base(high_log_arg)``; storing the integer
    ``high_log_arg`` separately keeps the BS(1,n) endpoint k + log_n|r|
    exact.  SOL intervals are floating diagnostics, flagged exact=False.
    """

    t_low: Fraction | float
    t_high: Fraction | float
    base: int | float
    high_log_arg: int = 1
    exact: bool = True

    def __post_init__(self):
        if self.high_log_arg < 1:
            raise DomainError("high_log_arg must be a positive integer")
        if self.exact and self.low > self.high + 1e-12:
            raise DomainError("coarse-height interval is empty")

    @property
    def low(self) -> float:
        return float(self.t_low)

    @property
    def high(self) -> float:
        extra = 0.0 if self.high_log_arg == 1 else math.log(self.high_log_arg, self.base)
        return float(self.t_high) + extra


def lamp_coarse_heights(p: LampConfig, q: LampConfig) -> CoarseHeightInterval:
    """[-l_minus, -l_plus] in base n. Requires p != q."""
    sg = supp_gap(p, q)
    if sg is None:
        raise DomainError("coarse heights need distinct configurations")
    return CoarseHeightInterval(Fraction(-sg.l_minus), Fraction(-sg.l_plus), base=p.n)


def bs_coarse_heights(p: BSNumber, q: BSNumber) -> CoarseHeightInterval:
    """[k, k + log_n|r|] for p - q = r * n^k. Requires p != q."""
    p._same_base(q)
    diff = p - q
    if diff.is_zero():
        raise DomainError("coarse heights need distinct points")
    return CoarseHeightInterval(Fraction(diff.k), Fraction(diff.k),
                                base=p.n, high_log_arg=abs(diff.r))


def sol_coarse_heights(ctx: SolContext, p: SolVector, q: SolVector) -> CoarseHeightInterval:
    """Floating [-(ln|dy_e|), ln|dx_e|] in eigen-coordinates; diagnostic only."""
    if p == q:
        raise DomainError("coarse heights need distinct points")
    dx, dy = p[0] - q[0], p[1] - q[1]
    (_, (ex, ey)), (_, (fx, fy)) = ctx.eigen
    # coordinates of (dx, dy) in the eigenbasis {e, f}
    det = ex * fy - ey * fx
    ce = (dx * fy - dy * fx) / det
    cf = (ex * dy - ey * dx) / det
    tiny = 1e-300
    return CoarseHeightInterval(-math.log(abs(cf) + tiny), math.log(abs(ce) + tiny),
                                base=math.e, exact=False)
