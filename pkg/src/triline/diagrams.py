"""Quartic-vertex pairing enumeration, triple-line loop tracing, genus.

Each of the k vertices carries four legs in cyclic order A, B, A, B; leg
ids are 0..4k-1 with vertex = id // 4 and position = id % 4.  A diagram is
a perfect matching (pairing) of the legs.  Tracing conventions:

* Latin loops: every leg has a row port (2*id) and a col port (2*id + 1).
  The cyclic trace identifies col(position q) with row(position q+1 mod 4)
  of the same vertex; each propagator identifies row(x) with col(y) and
  col(x) with row(y).  The identification graph is a disjoint union of
  cycles; their count C is the power of N.
* Greek loops: positions 0,2 share one Greek slot, positions 1,3 the
  other ("the strand passes straight through").  Propagators identify the
  slots of their endpoints; the cycle count l is the power of d and counts
  link components.
* Per connected component (vertices joined by propagators), Euler's count
  V - P + C = 2 - 2p with P = 2V gives the genus p = (2 - C_c + V_c) / 2.

Both cycle counts are computed as permutation cycles: composing the port
involutions gives an orientation-doubled traversal, so C (and l) are half
the cycle count of the composed permutation.

``brute_force_index_sum`` is the in-module oracle: it sums the product of
propagator index deltas over explicit Latin/Greek index assignments and
must reproduce i^{2k} N^C d^l.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ResourceLimitError, ValidationError

DEFAULT_KMAX = 6
BRUTE_FORCE_ENUM_LIMIT = 400_000


@dataclass(frozen=True)
class Leg:
    """One vertex leg; vertex, position, and family derive from the id."""

    id: int

    @property
    def vertex(self) -> int:
        return self.id // 4

    @property
    def position(self) -> int:
        return self.id % 4

    @property
    def family(self) -> str:
        return "A" if self.id % 2 == 0 else "B"


def leg_family(leg_id: int) -> str:
    return "A" if leg_id % 2 == 0 else "B"


@dataclass(frozen=True)
class Pairing:
    """Fixed-point-free involution on the 4k leg ids."""

    k: int
    match: tuple[int, ...]

    def __post_init__(self):
        n = 4 * self.k
        if len(self.match) != n:
            raise ValidationError(f"match must have length {n}")
        for i, j in enumerate(self.match):
            if not 0 <= j < n or j == i or self.match[j] != i:
                raise ValidationError("match is not a fixed-point-free involution")

    @classmethod
    def from_pairs(cls, k: int, pairs) -> "Pairing":
        match = [-1] * (4 * k)
        for x, y in pairs:
            if not (0 <= x < 4 * k and 0 <= y < 4 * k):
                raise ValidationError(f"leg id out of range in pair ({x},{y})")
            if match[x] != -1 or match[y] != -1:
                raise ValidationError(f"leg repeated in pair ({x},{y})")
            match[x] = y
            match[y] = x
        if -1 in match:
            raise ValidationError("pairs do not cover all legs")
        return cls(k, tuple(match))

    def pairs(self) -> list[tuple[int, int]]:
        """Sorted (min, max) pairs; canonical order for records."""
        return [(i, j) for i, j in enumerate(self.match) if i < j]

    def is_ab(self) -> bool:
        return all(leg_family(i) != leg_family(j) for i, j in self.pairs())


def enumerate_matchings(k: int, mode: str = "ab_only", kmax: int = DEFAULT_KMAX):
    """Stream all pairings at order k, lexicographic on the involution.

    ``ab_only`` restricts partners to the opposite family ((2k)! pairings,
    the only ones surviving the standard-action propagator); ``all`` yields
    every perfect matching ((4k-1)!! pairings).
    """
    if mode not in ("ab_only", "all"):
        raise ValidationError(f"unknown mode {mode!r}")
    if not 1 <= k <= kmax:
        raise ResourceLimitError(f"k={k} outside enumeration range 1..{kmax}")
    n = 4 * k
    match = [-1] * n

    def rec(start):
        while start < n and match[start] != -1:
            start += 1
        if start == n:
            yield Pairing(k, tuple(match))
            return
        for j in range(start + 1, n):
            if match[j] != -1:
                continue
            if mode == "ab_only" and leg_family(j) == leg_family(start):
                continue
            match[start] = j
            match[j] = start
            yield from rec(start + 1)
            match[start] = -1
            match[j] = -1

    yield from rec(0)


def _vertex_port_involution(k: int) -> list[int]:
    """col(position q) <-> row(position q+1 mod 4), as a port involution."""
    vm = [0] * (8 * k)
    for v in range(k):
        for q in range(4):
            col = 2 * (4 * v + q) + 1
            row = 2 * (4 * v + (q + 1) % 4)
            vm[col] = row
            vm[row] = col
    return vm


def _count_cycles(perm) -> int:
    n = len(perm)
    seen = [False] * n
    cycles = 0
    for i in range(n):
        if seen[i]:
            continue
        cycles += 1
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
    return cycles


def _latin_cycles(p: Pairing) -> list[list[int]]:
    """Cycles of the Latin identification graph, as port lists.

    Every port carries exactly one vertex-trace edge and one propagator
    edge, so the graph is a disjoint union of cycles alternating between
    the two edge kinds; each cycle is walked once, alternating P then V.
    """
    k = p.k
    vm = _vertex_port_involution(k)
    pm = [0] * (8 * k)
    for x, y in p.pairs():
        pm[2 * x] = 2 * y + 1
        pm[2 * x + 1] = 2 * y
        pm[2 * y] = 2 * x + 1
        pm[2 * y + 1] = 2 * x
    seen = [False] * (8 * k)
    cycles = []
    for start in range(8 * k):
        if seen[start]:
            continue
        orbit = []
        j = start
        while True:
            orbit.append(j)
            seen[j] = True
            jp = pm[j]
            orbit.append(jp)
            seen[jp] = True
            j = vm[jp]
            if j == start:
                break
        cycles.append(orbit)
    return cycles


def trace_latin_loops(p: Pairing) -> int:
    """Number C of closed Latin index loops."""
    return len(_latin_cycles(p))


def trace_greek_loops(p: Pairing) -> int:
    """Number l of closed Greek loops (link components)."""
    # slotmate(leg) = leg xor 2 joins the two legs sharing a Greek slot;
    # composing with the matching doubles each undirected cycle.
    n = 4 * p.k
    gamma = [p.match[i] ^ 2 for i in range(n)]
    return _count_cycles(gamma) // 2


@dataclass(frozen=True)
class LoopReport:
    """Loop counts, connectivity, and per-component genus of one pairing."""

    C: int
    l: int
    components: int
    genus_per_component: tuple[int, ...]


@dataclass(frozen=True)
class DiagramWeight:
    """Symbolic weight i^{phase_ipow} N^C d^l plus the connectivity flag."""

    k: int
    C: int
    l: int
    phase_ipow: int
    connected: bool

    def value(self, N: int, d: int) -> complex:
        return (1j) ** self.phase_ipow * N ** self.C * d ** self.l


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def _vertex_components(p: Pairing) -> list[list[int]]:
    dsu = _DSU(p.k)
    for x, y in p.pairs():
        dsu.union(x // 4, y // 4)
    groups: dict[int, list[int]] = {}
    for v in range(p.k):
        groups.setdefault(dsu.find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def components_and_genus(p: Pairing) -> LoopReport:
    """Component count and per-component genus from Euler's relation.

    Raises if any component genus fails to be a non-negative integer;
    that would indicate a tracing bug, not bad input.
    """
    from .errors import InvariantViolation

    comps = _vertex_components(p)
    cycles = _latin_cycles(p)
    C = len(cycles)
    l = trace_greek_loops(p)
    vertex_root = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            vertex_root[v] = ci
    c_per = [0] * len(comps)
    for ports in cycles:
        c_per[vertex_root[ports[0] // 8]] += 1
    genus = []
    for ci, comp in enumerate(comps):
        two_p = 2 - c_per[ci] + len(comp)
        if two_p % 2 != 0 or two_p < 0:
            raise InvariantViolation(
                f"component genus not a non-negative integer: "
                f"C_c={c_per[ci]}, V_c={len(comp)}, pairing {p.pairs()}")
        genus.append(two_p // 2)
    return LoopReport(C=C, l=l, components=len(comps),
                      genus_per_component=tuple(genus))


def diagram_weight(p: Pairing) -> DiagramWeight:
    """Symbolic diagram value for the standard action: i^{2k} N^C d^l."""
    rep = components_and_genus(p)
    return DiagramWeight(k=p.k, C=rep.C, l=rep.l, phase_ipow=2 * p.k,
                         connected=rep.components == 1)


def is_tadpole(p: Pairing) -> bool:
    """True iff some propagator joins two legs of the same vertex."""
    return any(x // 4 == y // 4 for x, y in p.pairs())


def brute_force_index_sum(p: Pairing, N: int, d: int,
                          strategy: str = "auto") -> complex:
    """Explicit index summation oracle; must equal i^{2k} N^C d^l.

    Latin variables: one per (vertex, position), the row index of that
    position; the col index of position q is the row variable of position
    q+1 mod 4 (cyclic trace).  Greek variables: one per vertex slot.  Each
    propagator contributes i times three deltas: slot(x)=slot(y),
    row(x)=col(y), col(x)=row(y).

    ``enumerate`` loops over every assignment; ``propagate`` contracts the
    deltas into equivalence classes first (each free class contributes a
    factor N or d).  ``auto`` enumerates when the assignment space is
    small, else propagates.
    """
    if strategy not in ("auto", "enumerate", "propagate"):
        raise ValidationError(f"unknown strategy {strategy!r}")
    if N > 3 or d > 3 or p.k > 3:
        raise ResourceLimitError("brute force limited to N<=3, d<=3, k<=3")
    k = p.k
    pairs = p.pairs()
    n_assign = N ** (4 * k) * d ** (2 * k)
    if strategy == "auto":
        strategy = "enumerate" if n_assign <= BRUTE_FORCE_ENUM_LIMIT else "propagate"
    if strategy == "enumerate" and n_assign > 50 * BRUTE_FORCE_ENUM_LIMIT:
        raise ResourceLimitError(
            f"explicit enumeration over {n_assign} assignments refused")

    def row_var(leg):
        return 4 * (leg // 4) + leg % 4

    def col_var(leg):
        return 4 * (leg // 4) + (leg % 4 + 1) % 4

    def slot_var(leg):
        return 2 * (leg // 4) + (leg % 4) % 2

    if strategy == "enumerate":
        count = 0
        for lat in product(range(N), repeat=4 * k):
            if all(lat[row_var(x)] == lat[col_var(y)]
                   and lat[col_var(x)] == lat[row_var(y)] for x, y in pairs):
                for grk in product(range(d), repeat=2 * k):
                    if all(grk[slot_var(x)] == grk[slot_var(y)] for x, y in pairs):
                        count += 1
    else:
        lat = _DSU(4 * k)
        grk = _DSU(2 * k)
        for x, y in pairs:
            lat.union(row_var(x), col_var(y))
            lat.union(col_var(x), row_var(y))
            grk.union(slot_var(x), slot_var(y))
        free_lat = len({lat.find(i) for i in range(4 * k)})
        free_grk = len({grk.find(i) for i in range(2 * k)})
        count = N ** free_lat * d ** free_grk
    return (1j) ** (2 * k) * count


def diagram_record(p: Pairing) -> dict:
    """JSON-serializable dump of one diagram's combinatorial data."""
    rep = components_and_genus(p)
    return {
        "k": p.k,
        "match": [[a, b] for a, b in p.pairs()],
        "C": rep.C,
        "l": rep.l,
        "components": rep.components,
        "genus": list(rep.genus_per_component),
        "tadpole": is_tadpole(p),
    }
