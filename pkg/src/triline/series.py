"""Exact tri-variate formal series: Z, ln Z, genus/link table, F(g).

Coefficients live in the Gaussian rationals (exact rational real and
imaginary parts); series are maps (g-power k, N-power a, d-power b) ->
coefficient, truncated at a fixed g-order.  No floating point enters this
module.

The normalized partition series is

    Z_norm = sum_k (1/k!) c^k sum_{ab pairings} i^{2k} N^{C-k} d^l

with c = i/2 under the ``action`` convention (vertex coupling g/(2N) in
the exponent exp(i S)) or c = i under the ``paper_series`` convention
(vertex coupling g/N); the two differ by 2^k at order g^k.  The formal
logarithm must equal the same sum restricted to connected pairings
(linked-cluster identity); its coefficients sit on the lattice
N-power = 2 - 2p, d-power = l >= 1, giving the table F_{l,p}(g).  The
constant part of the full log-series is d*N*log2 + d*N^2*logpi, kept
symbolic.  F(g) = logpi + F_{1,0}(g) generates connected planar
single-Greek-loop diagrams, the alternating knot diagrams.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .census import pairing_census
from .diagrams import (DEFAULT_KMAX, components_and_genus, enumerate_matchings,
                       is_tadpole, leg_family)
from .errors import ResourceLimitError, StructureError, ValidationError

CONVENTIONS = ("action", "paper_series")
SERIES_ACTIONS = ("standard", "wick_ordered", "symmetric")
SYMMETRIC_KMAX = 3

_I_POW = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class GaussRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, re=0, im=0) -> "GaussRational":
        return cls(Fraction(re), Fraction(im))

    @classmethod
    def i_power(cls, n: int) -> "GaussRational":
        re, im = _I_POW[n % 4]
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussRational") -> "GaussRational":
        return GaussRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussRational") -> "GaussRational":
        return GaussRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussRational":
        return GaussRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational(self.re * other.re - self.im * other.im,
                                 self.re * other.im + self.im * other.re)
        q = Fraction(other)
        return GaussRational(self.re * q, self.im * q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = Fraction(other)
        return GaussRational(self.re / q, self.im / q)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __str__(self) -> str:
        if not self:
            return "0"
        parts = []
        if self.re:
            parts.append(str(self.re))
        if self.im:
            mag = "" if abs(self.im) == 1 else str(abs(self.im))
            sign = "-" if self.im < 0 else ("+" if parts else "")
            parts.append(f"{sign}{mag}i")
        return "".join(parts)


GR_ZERO = GaussRational()
GR_ONE = GaussRational.of(1)

Key = tuple[int, int, int]


class TriSeries:
    """Truncated formal series in g (grade), N (any integer power), d (>= 0)."""

    def __init__(self, kmax: int, terms: dict[Key, GaussRational] | None = None):
        if kmax < 0:
            raise ValidationError("kmax must be >= 0")
        self.kmax = kmax
        self.terms: dict[Key, GaussRational] = {}
        if terms:
            for key, coeff in terms.items():
                self._accumulate(key, coeff)

    def _accumulate(self, key: Key, coeff: GaussRational) -> None:
        k, a, b = key
        if k < 0 or b < 0:
            raise ValidationError(f"invalid series key {key}")
        if k > self.kmax or not coeff:
            return
        new = self.terms.get(key, GR_ZERO) + coeff
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    @classmethod
    def one(cls, kmax: int) -> "TriSeries":
        return cls(kmax, {(0, 0, 0): GR_ONE})

    def constant_term(self) -> GaussRational:
        return self.terms.get((0, 0, 0), GR_ZERO)

    def copy(self) -> "TriSeries":
        return TriSeries(self.kmax, dict(self.terms))

    def __add__(self, other: "TriSeries") -> "TriSeries":
        out = self.copy()
        for key, coeff in other.terms.items():
            out._accumulate(key, coeff)
        return out

    def __sub__(self, other: "TriSeries") -> "TriSeries":
        out = self.copy()
        for key, coeff in other.terms.items():
            out._accumulate(key, -coeff)
        return out

    def scale(self, factor) -> "TriSeries":
        if not isinstance(factor, GaussRational):
            factor = GaussRational.of(factor)
        return TriSeries(self.kmax,
                         {key: coeff * factor for key, coeff in self.terms.items()})

    def __mul__(self, other: "TriSeries") -> "TriSeries":
        out = TriSeries(self.kmax)
        for (k1, a1, b1), c1 in self.terms.items():
            for (k2, a2, b2), c2 in other.terms.items():
                if k1 + k2 <= self.kmax:
                    out._accumulate((k1 + k2, a1 + a2, b1 + b2), c1 * c2)
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, TriSeries)
                and self.kmax == other.kmax and self.terms == other.terms)

    def __repr__(self) -> str:
        items = ", ".join(f"g^{k} N^{a} d^{b}: {c}"
                          for (k, a, b), c in sorted(self.terms.items()))
        return f"TriSeries(kmax={self.kmax}, {{{items}}})"


def _vertex_prefactor(k: int, convention: str) -> GaussRational:
    """(c^k / k!) i^{2k} with c = i/2 (action) or i (paper_series)."""
    if convention not in CONVENTIONS:
        raise ValidationError(f"unknown convention {convention!r}")
    denom = math.factorial(k) * (2 ** k if convention == "action" else 1)
    return GaussRational.i_power(3 * k) * Fraction(1, denom)


def _census_terms(k: int, convention: str, connected_only: bool,
                  drop_tadpoles: bool, threads: int) -> dict[Key, GaussRational]:
    pref = _vertex_prefactor(k, convention)
    out: dict[Key, GaussRational] = {}
    for (C, l, conn, tad), count in pairing_census(k, threads=threads).items():
        if connected_only and not conn:
            continue
        if drop_tadpoles and tad:
            continue
        key = (k, C - k, l)
        out[key] = out.get(key, GR_ZERO) + pref * count
    return out


def _symmetric_terms(k: int, convention: str,
                     connected_only: bool) -> dict[Key, GaussRational]:
    """Order-k terms under the symmetric quadratic form, all pairings.

    Per-pair family blocks: same family 2i/3, cross family -i/3 (exact
    inverse of [[2,1],[1,2]] times i); the product over the 2k propagators
    replaces the plain i^{2k} of the standard action.
    """
    if k > SYMMETRIC_KMAX:
        raise ResourceLimitError(
            f"symmetric-action assembly limited to k <= {SYMMETRIC_KMAX}")
    pref = _vertex_prefactor(k, convention)
    # pull out the i^{2k} the prefactor already carries
    pref = pref * GaussRational.i_power(-2 * k % 4)
    out: dict[Key, GaussRational] = {}
    for p in enumerate_matchings(k, mode="all"):
        rep = components_and_genus(p)
        if connected_only and rep.components != 1:
            continue
        same = sum(1 for i, j in p.pairs() if leg_family(i) == leg_family(j))
        cross = 2 * k - same
        block = (GaussRational.i_power(2 * k)
                 * Fraction(2 ** same * (-1) ** cross, 3 ** (2 * k)))
        key = (k, rep.C - k, rep.l)
        out[key] = out.get(key, GR_ZERO) + pref * block
    return out


def _assemble(kmax: int, convention: str, action: str, connected_only: bool,
              threads: int, kcap: int) -> TriSeries:
    if action not in SERIES_ACTIONS:
        raise ValidationError(f"unknown action {action!r}")
    if kmax > kcap:
        raise ResourceLimitError(f"kmax={kmax} exceeds cap {kcap}")
    out = TriSeries.one(kmax)
    for k in range(1, kmax + 1):
        if action == "symmetric":
            terms = _symmetric_terms(k, convention, connected_only)
        else:
            terms = _census_terms(k, convention, connected_only,
                                  drop_tadpoles=(action == "wick_ordered"),
                                  threads=threads)
        for key, coeff in terms.items():
            out._accumulate(key, coeff)
    if connected_only:
        out._accumulate((0, 0, 0), -GR_ONE)
    return out


def assemble_Z(kmax: int, convention: str = "action", action: str = "standard",
               threads: int = 1, kcap: int = DEFAULT_KMAX) -> TriSeries:
    """Normalized partition series Z(N, d, g) / Z(N, d, 0) up to g^kmax."""
    return _assemble(kmax, convention, action, connected_only=False,
                     threads=threads, kcap=kcap)


def connected_assemble(kmax: int, convention: str = "action",
                       action: str = "standard", threads: int = 1,
                       kcap: int = DEFAULT_KMAX) -> TriSeries:
    """Sum over connected pairings only; the linked-cluster form of ln Z."""
    return _assemble(kmax, convention, action, connected_only=True,
                     threads=threads, kcap=kcap)


def formal_log(s: TriSeries) -> TriSeries:
    """log(1 + u) = sum (-1)^{m+1} u^m / m, truncated at s.kmax."""
    if s.constant_term() != GR_ONE:
        raise ValidationError("formal_log requires constant term exactly 1")
    u = s - TriSeries.one(s.kmax)
    out = TriSeries(s.kmax)
    power = TriSeries.one(s.kmax)
    for m in range(1, s.kmax + 1):
        power = power * u
        sign = 1 if m % 2 == 1 else -1
        out = out + power.scale(Fraction(sign, m))
    return out


def formal_exp(s: TriSeries) -> TriSeries:
    """exp(u) = sum u^m / m!, truncated; requires zero constant term."""
    if s.constant_term() != GR_ZERO:
        raise ValidationError("formal_exp requires zero constant term")
    out = TriSeries.one(s.kmax)
    power = TriSeries.one(s.kmax)
    for m in range(1, s.kmax + 1):
        power = power * s
        out = out + power.scale(Fraction(1, math.factorial(m)))
    return out


@dataclass
class FlpTable:
    """Genus/link table: (l >= 1, p >= 0) -> polynomial in g."""

    kmax: int
    table: dict[tuple[int, int], dict[int, GaussRational]] = field(default_factory=dict)

    def add(self, l: int, p: int, k: int, coeff: GaussRational) -> None:
        poly = self.table.setdefault((l, p), {})
        new = poly.get(k, GR_ZERO) + coeff
        if new:
            poly[k] = new
        else:
            poly.pop(k, None)

    def poly(self, l: int, p: int) -> dict[int, GaussRational]:
        return dict(self.table.get((l, p), {}))

    def reconstruct(self) -> TriSeries:
        """Rebuild the normalized log-series from the table, exactly."""
        out = TriSeries(self.kmax)
        for (l, p), poly in self.table.items():
            for k, coeff in poly.items():
                out._accumulate((k, 2 - 2 * p, l), coeff)
        return out


def extract_Flp(lnz_norm: TriSeries) -> FlpTable:
    """Solve each coefficient position against N-power 2-2p, d-power l.

    Any coefficient off that lattice means the assembly upstream is broken
    and raises a structural error.
    """
    out = FlpTable(kmax=lnz_norm.kmax)
    for (k, a, b), coeff in lnz_norm.terms.items():
        if b < 1:
            raise StructureError(f"term g^{k} N^{a} d^{b} has d-power < 1")
        if a > 2 or (2 - a) % 2 != 0:
            raise StructureError(f"term g^{k} N^{a} d^{b} off the genus lattice")
        out.add(b, (2 - a) // 2, k, coeff)
    return out


@dataclass
class FSeries:
    """F(g) = logpi + F_{1,0}(g): symbolic constant plus exact polynomial."""

    kmax: int
    logpi: Fraction
    coeffs: dict[int, GaussRational]

    def render(self) -> str:
        parts = []
        if self.logpi:
            pref = "" if self.logpi == 1 else f"{self.logpi}*"
            parts.append(f"{pref}ln(pi)")
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "g" if k == 1 else f"g^{k}"
            s = str(c)
            if s.startswith("-"):
                parts.append(f"- {s[1:]}*{mono}" if parts else f"-{s[1:]}*{mono}")
            else:
                parts.append(f"+ {s}*{mono}" if parts else f"{s}*{mono}")
        return " ".join(parts) if parts else "0"


def F_of_g(t: FlpTable) -> FSeries:
    """The alternating-knot-diagram generating function logpi + F_{1,0}."""
    return FSeries(kmax=t.kmax, logpi=Fraction(1), coeffs=t.poly(1, 0))


ConstMap = dict[tuple[int, int], Fraction]


@dataclass
class LnZFull:
    """Normalized log-series plus the symbolic g^0 constants.

    ``log2``/``logpi`` map (N-power, d-power) to the rational multiple of
    log 2 / log pi carried at that position; the free-partition constant is
    log2: {(1,1): 1}, logpi: {(2,1): 1}, i.e. d N log 2 + d N^2 log pi.
    """

    series: TriSeries
    log2: ConstMap = field(default_factory=lambda: {(1, 1): Fraction(1)})
    logpi: ConstMap = field(default_factory=lambda: {(2, 1): Fraction(1)})


def full_ln_z(kmax: int, convention: str = "action", action: str = "standard",
              threads: int = 1, kcap: int = DEFAULT_KMAX) -> LnZFull:
    """ln Z including constants: dN log2 + dN^2 logpi + connected series."""
    return LnZFull(series=connected_assemble(kmax, convention, action,
                                             threads=threads, kcap=kcap))


def _shift_const(cm: ConstMap) -> ConstMap:
    out = {}
    for (a, b), q in cm.items():
        if b < 1:
            raise StructureError("constant term lacks the d factor")
        out[(a - 2, b - 1)] = q
    return out


def double_limit_check(lnz_full: LnZFull, kmax: int) -> bool:
    """Term-by-term (1/dN^2) ln Z under N -> infinity then d -> 0.

    Divides symbolically by d N^2, errors on any surviving positive
    N-power, drops negative ones, keeps d-power 0, and asserts the result
    equals F_of_g of the extracted table.  True on success.
    """
    s = lnz_full.series
    if s.kmax != kmax:
        raise ValidationError("kmax does not match the provided series")
    limit_coeffs: dict[int, GaussRational] = {}
    for (k, a, b), coeff in s.terms.items():
        if b < 1:
            raise StructureError(f"term g^{k} N^{a} d^{b} has d-power < 1")
        a2, b2 = a - 2, b - 1
        if a2 > 0:
            raise StructureError(
                f"term g^{k} N^{a} d^{b} survives the large-N limit unboundedly")
        if a2 == 0 and b2 == 0:
            limit_coeffs[k] = limit_coeffs.get(k, GR_ZERO) + coeff
    limit_logpi = Fraction(0)
    for (a2, b2), q in _shift_const(lnz_full.logpi).items():
        if a2 > 0:
            raise StructureError("logpi constant survives the large-N limit")
        if a2 == 0 and b2 == 0:
            limit_logpi += q
    for (a2, b2), q in _shift_const(lnz_full.log2).items():
        if a2 > 0:
            raise StructureError("log2 constant survives the large-N limit")
        # negative N-powers vanish; b2 > 0 terms die at d -> 0
    f = F_of_g(extract_Flp(s))
    limit_coeffs = {k: c for k, c in limit_coeffs.items() if c}
    target = {k: c for k, c in f.coeffs.items() if c}
    if limit_logpi != f.logpi or limit_coeffs != target:
        raise StructureError("double limit disagrees with logpi + F_{1,0}")
    return True


def planar_loop_counts(kmax: int, threads: int = 1,
                       kcap: int = DEFAULT_KMAX) -> dict[int, int]:
    """Raw count per order of connected planar single-Greek-loop pairings.

    These are the pairings behind F_{1,0}; connected with one component,
    genus 0 means C = k + 2.
    """
    out = {}
    for k in range(1, kmax + 1):
        if k > kcap:
            raise ResourceLimitError(f"kmax={kmax} exceeds cap {kcap}")
        total = 0
        for (C, l, conn, _tad), count in pairing_census(k, threads=threads).items():
            if conn and l == 1 and C == k + 2:
                total += count
        out[k] = total
    return out


def gauss_rational_json(c: GaussRational) -> dict:
    return {
        "re_num": c.re.numerator, "re_den": c.re.denominator,
        "im_num": c.im.numerator, "im_den": c.im.denominator,
    }


def series_to_json(s: TriSeries, convention: str) -> dict:
    terms = []
    for (k, a, b) in sorted(s.terms):
        entry = {"k": k, "n_pow": a, "d_pow": b}
        entry.update(gauss_rational_json(s.terms[(k, a, b)]))
        terms.append(entry)
    return {"convention": convention, "kmax": s.kmax, "terms": terms}


def flp_to_json(t: FlpTable) -> dict:
    entries = []
    for (l, p) in sorted(t.table):
        poly = t.table[(l, p)]
        entries.append({
            "l": l, "p": p,
            "terms": [dict(k=k, **gauss_rational_json(poly[k]))
                      for k in sorted(poly)],
        })
    return {"kmax": t.kmax, "entries": entries}


def f_to_json(f: FSeries) -> dict:
    return {
        "kmax": f.kmax,
        "logpi_num": f.logpi.numerator,
        "logpi_den": f.logpi.denominator,
        "terms": [dict(k=k, **gauss_rational_json(f.coeffs[k]))
                  for k in sorted(f.coeffs) if f.coeffs[k]],
        "rendered": f.render(),
    }
