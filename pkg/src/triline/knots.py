"""Gauss codes of planar single-loop diagrams and their reductions.

A connected genus-0 pairing with a single Greek loop is a knot shadow: the
Greek strand passes straight through each vertex (position q to q+2 mod 4),
and each vertex becomes a crossing.  Walking the strand and recording at
each arrival whether it rides an A-position (over) or a B-position (under)
yields an alternating Gauss code of length 2k.  Codes are canonicalized by
the lexicographically least rotation with crossings relabeled in order of
first appearance; mirror/reversal identification is deliberately not
applied.  A same-vertex contraction shows up as a kink, removable by the
first Reidemeister move; ``reduce_R1`` deletes kinks to a fixed point.
"""
from __future__ import annotations

from dataclasses import dataclass
import re

from .diagrams import DEFAULT_KMAX, Pairing, components_and_genus, \
    enumerate_matchings, is_tadpole
from .errors import StructureError, ValidationError
from .series import GaussRational, _vertex_prefactor

OVER = "O"
UNDER = "U"

_CODE_TOKEN = re.compile(r"([OU])(\d+)")


@dataclass(frozen=True)
class GaussCode:
    """Sequence of (crossing id, passage); ids appear twice, once each way."""

    entries: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        seen: dict[int, set[str]] = {}
        for cid, passage in self.entries:
            if passage not in (OVER, UNDER) or cid < 1:
                raise ValidationError(f"bad code entry ({cid}, {passage})")
            seen.setdefault(cid, set()).add(passage)
        for cid, passages in seen.items():
            count = sum(1 for c, _ in self.entries if c == cid)
            if count != 2 or passages != {OVER, UNDER}:
                raise ValidationError(
                    f"crossing {cid} must appear exactly once over and once under")

    def __len__(self) -> int:
        return len(self.entries)

    def crossings(self) -> int:
        return len(self.entries) // 2

    def serialize(self) -> str:
        return "".join(f"{p}{cid}" for cid, p in self.entries)

    @classmethod
    def parse(cls, text: str) -> "GaussCode":
        pos = 0
        entries = []
        for m in _CODE_TOKEN.finditer(text):
            if m.start() != pos:
                raise ValidationError(f"cannot parse code {text!r}")
            entries.append((int(m.group(2)), m.group(1)))
            pos = m.end()
        if pos != len(text):
            raise ValidationError(f"cannot parse code {text!r}")
        return cls(tuple(entries))

    def __str__(self) -> str:
        return self.serialize()


def to_gauss_code(p: Pairing) -> GaussCode:
    """Walk the single Greek strand of a connected planar pairing.

    Crossing id is the 1-based vertex; passage is over on A-positions and
    under on B-positions.  Refuses pairings that are disconnected, have
    more than one Greek loop, or positive genus.
    """
    rep = components_and_genus(p)
    problems = []
    if rep.components != 1:
        problems.append(f"{rep.components} components")
    if rep.l != 1:
        problems.append(f"{rep.l} Greek loops")
    if any(g > 0 for g in rep.genus_per_component):
        problems.append(f"genus {max(rep.genus_per_component)}")
    if problems:
        raise StructureError(
            "not a knot shadow: " + ", ".join(problems))
    match = p.match
    entries = []
    cur = 0
    for _ in range(2 * p.k):
        entries.append((cur // 4 + 1, OVER if cur % 2 == 0 else UNDER))
        nxt = match[cur]
        cur = 4 * (nxt // 4) + (nxt % 4 + 2) % 4
    if cur != 0:
        raise StructureError("strand walk failed to close after 2k steps")
    return GaussCode(tuple(entries))


def alternating_check(c: GaussCode) -> bool:
    """True iff passages strictly alternate over/under cyclically."""
    n = len(c.entries)
    if n == 0:
        return True
    return all(c.entries[i][1] != c.entries[(i + 1) % n][1] for i in range(n))


def reduce_R1(c: GaussCode) -> GaussCode:
    """Delete cyclically adjacent same-crossing passages until none remain."""
    entries = list(c.entries)
    while True:
        n = len(entries)
        hit = next((i for i in range(n)
                    if n and entries[i][0] == entries[(i + 1) % n][0]), None)
        if hit is None:
            return GaussCode(tuple(entries))
        j = (hit + 1) % n
        for idx in sorted((hit, j), reverse=True):
            del entries[idx]


def canonical_code(c: GaussCode) -> GaussCode:
    """Lex-least rotation with ids relabeled by first appearance, O < U."""
    n = len(c.entries)
    if n == 0:
        return c
    best = None
    best_entries = None
    for r in range(n):
        rot = c.entries[r:] + c.entries[:r]
        relab: dict[int, int] = {}
        key = []
        out = []
        for cid, p in rot:
            if cid not in relab:
                relab[cid] = len(relab) + 1
            key.append((relab[cid], 0 if p == OVER else 1))
            out.append((relab[cid], p))
        t = tuple(key)
        if best is None or t < best:
            best, best_entries = t, tuple(out)
    return GaussCode(best_entries)


TREFOIL = GaussCode.parse("O1U2O3U1O2U3")


def enumerate_knot_diagrams(k: int, convention: str = "action",
                            action: str = "standard",
                            kmax: int = DEFAULT_KMAX):
    """Canonical codes of order-k knot shadows with exact coefficients.

    Each connected planar single-Greek-loop pairing contributes the same
    coefficient, the order-k vertex prefactor; their sum over the emitted
    list is the g^k term of F_{1,0}.  ``wick_ordered`` drops tadpole
    pairings.  Returns a list of (GaussCode, GaussRational).
    """
    if action not in ("standard", "wick_ordered"):
        raise ValidationError(
            "knot export is defined for the standard quartic; the symmetric "
            "quadratic form mixes in same-family pairings with no knot reading")
    if k == 0:
        return []
    pref = _vertex_prefactor(k, convention)
    out = []
    for p in enumerate_matchings(k, mode="ab_only", kmax=kmax):
        rep = components_and_genus(p)
        if rep.components != 1 or rep.l != 1 or rep.C != k + 2:
            continue
        if action == "wick_ordered" and is_tadpole(p):
            continue
        out.append((canonical_code(to_gauss_code(p)), pref))
    return out


def knot_record(k: int, code: GaussCode, coeff: GaussRational) -> dict:
    return {
        "k": k,
        "code": code.serialize(),
        "coeff_re": float(coeff.re),
        "coeff_im": float(coeff.im),
        "reduced_code": canonical_code(reduce_R1(code)).serialize(),
    }
