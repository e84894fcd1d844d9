"""Combinatorial polygon model: arcs, crossings, rotation, cut reduction.

Indecomposables are the diagonals of a convex N-gon, degree-one
incidence is strict crossing, and the shift rotates every arc one
vertex backwards.  This backend publishes no morphism calculus and no
exact triangles: it serves fast enumeration (rigid sets, crossing-closed
sets, triangulations), the cut reduction of a polygon along a rigid arc
set, and the arc-set mutation that rotates inside the cut pieces.  Its
conventions are validated empirically against the module-theoretic
backend where the category sizes coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import Backend, BackendCaps, Indec, InputError
from .subcats import Subcat, enumerate_subcats


@dataclass(frozen=True)
class Arc:
    """Chord between two non-adjacent vertices, stored with i < j."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i >= self.j:
            raise InputError("arc endpoints must be ordered")

    def label(self) -> str:
        return f"arc({self.i},{self.j})"


def _valid_arc(n: int, i: int, j: int) -> bool:
    if not (0 <= i < j <= n - 1):
        return False
    return j - i >= 2 and (i, j) != (0, n - 1)


def _crossing(a: Arc, b: Arc) -> bool:
    """Strict interleaving of endpoints around the cycle."""
    return (a.i < b.i < a.j < b.j) or (b.i < a.i < b.j < a.j)


class PolygonBackend(Backend):
    """Arc category of the convex N-gon; enumeration-only capabilities."""

    def __init__(self, n: int):
        if n < 4:
            raise InputError("polygon needs at least 4 vertices")
        self.n = n
        self.spec_string = f"polygon:N={n}"
        self.caps = BackendCaps(morphism_calculus=False, exact_triangles=False)
        arcs = []
        for i in range(n):
            for j in range(i + 2, n):
                if _valid_arc(n, i, j):
                    arcs.append(Arc(i, j))
        arcs.sort(key=lambda a: (a.i, a.j))
        self._arcs = tuple(arcs)
        expected = n * (n - 3) // 2
        if len(arcs) != expected:
            raise InputError("arc count mismatch")
        self._by_arc = {a: idx for idx, a in enumerate(arcs)}
        self._indecs = tuple(
            Indec(idx, a.label()) for idx, a in enumerate(arcs)
        )

    @property
    def indecs(self) -> tuple[Indec, ...]:
        return self._indecs

    def arc(self, i: int, j: int) -> Arc:
        lo, hi = min(i, j), max(i, j)
        if not _valid_arc(self.n, lo, hi):
            raise InputError(f"({i},{j}) is not an arc of the {self.n}-gon")
        return Arc(lo, hi)

    def arc_of_id(self, ind_id: int) -> Arc:
        return self._arcs[ind_id]

    def id_of_arc(self, a: Arc) -> int:
        got = self._by_arc.get(a)
        if got is None:
            raise InputError(f"{a.label()} is not an arc of the {self.n}-gon")
        return got

    def crossing(self, a: Arc, b: Arc) -> bool:
        self.id_of_arc(a)
        self.id_of_arc(b)
        return _crossing(a, b)

    def rotate(self, a: Arc, k: int = 1) -> Arc:
        i = (a.i - k) % self.n
        j = (a.j - k) % self.n
        return self.arc(min(i, j), max(i, j))

    def shift_id(self, i: int, k: int = 1) -> int:
        return self.id_of_arc(self.rotate(self._arcs[i], k))

    def ext_incidence(self, i: int, j: int) -> bool:
        return _crossing(self._arcs[i], self._arcs[j])


def parse_spec(spec: str) -> PolygonBackend:
    """Build a backend from a string like ``polygon:N=5``."""
    prefix = "polygon:"
    if not spec.startswith(prefix):
        raise InputError(f"not a polygon spec: {spec!r}")
    body = spec[len(prefix):]
    if not body.startswith("N="):
        raise InputError("polygon spec needs N=<count>")
    try:
        n = int(body[2:])
    except ValueError as exc:
        raise InputError(f"bad polygon vertex count {body[2:]!r}") from exc
    return PolygonBackend(n)


# ----------------------------------------------------------------------
# Enumeration


def is_rigid(backend: PolygonBackend, s: Subcat) -> bool:
    ids = s.ids()
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            if backend.ext_incidence(ids[a], ids[b]):
                return False
    return True


def enumerate_rigid(backend: PolygonBackend) -> list[Subcat]:
    """All pairwise non-crossing arc sets, the empty one included."""
    return enumerate_subcats(backend, lambda s: is_rigid(backend, s))


def enumerate_triangulations(backend: PolygonBackend) -> list[Subcat]:
    """Maximal rigid sets; each has N-3 arcs."""
    rigid = enumerate_rigid(backend)
    full = backend.n - 3
    return [s for s in rigid if len(s) == full]


def is_ptolemy(backend: PolygonBackend, s: Subcat) -> bool:
    """Crossing-closed: crossing members force all connecting arcs in."""
    ids = s.ids()
    for x in range(len(ids)):
        for y in range(x + 1, len(ids)):
            a = backend.arc_of_id(ids[x])
            b = backend.arc_of_id(ids[y])
            if not _crossing(a, b):
                continue
            for p in (a.i, a.j):
                for q in (b.i, b.j):
                    lo, hi = min(p, q), max(p, q)
                    if _valid_arc(backend.n, lo, hi):
                        if backend.id_of_arc(Arc(lo, hi)) not in s:
                            return False
    return True


def enumerate_ptolemy(backend: PolygonBackend) -> list[Subcat]:
    """All crossing-closed arc sets."""
    return enumerate_subcats(backend, lambda s: is_ptolemy(backend, s))


# ----------------------------------------------------------------------
# Cut reduction


@dataclass(frozen=True)
class CutReduction:
    """Polygon cut along a rigid arc set, with the transport dictionary.

    ``pieces`` are the faces as tuples of original vertices in cyclic
    order; ``forward`` maps each non-cut arc of the reduced class to
    (piece index, position pair inside the piece); ``backward`` inverts
    it.  Arcs of the rigid set itself appear in no piece.
    """

    backend: PolygonBackend
    rigid: Subcat
    z: Subcat
    pieces: tuple[tuple[int, ...], ...]
    forward: dict[int, tuple[int, tuple[int, int]]]
    backward: dict[tuple[int, tuple[int, int]], int]

    def reduced_shift(self, ind_id: int, k: int = 1) -> int:
        """Rotate an arc of z minus rigid inside its piece, k steps."""
        piece_idx, (p, q) = self.forward[ind_id]
        size = len(self.pieces[piece_idx])
        p2, q2 = (p - k) % size, (q - k) % size
        key = (piece_idx, (min(p2, q2), max(p2, q2)))
        return self.backward[key]


def cut_reduction(backend: PolygonBackend, rigid: Subcat) -> CutReduction:
    if rigid.backend is not backend:
        raise InputError("rigid set belongs to a different backend")
    if not is_rigid(backend, rigid):
        raise InputError("cut set must be pairwise non-crossing")
    n = backend.n
    zbits = 0
    rigid_arcs = [backend.arc_of_id(i) for i in rigid]
    for idx in range(len(backend.indecs)):
        a = backend.arc_of_id(idx)
        if all(not _crossing(a, r) for r in rigid_arcs):
            zbits |= 1 << idx
    z = Subcat(backend, zbits)

    pieces: list[list[int]] = [list(range(n))]
    for r in sorted(rigid_arcs, key=lambda a: (a.i, a.j)):
        for pi, piece in enumerate(pieces):
            if r.i in piece and r.j in piece:
                ai, aj = piece.index(r.i), piece.index(r.j)
                lo, hi = min(ai, aj), max(ai, aj)
                first = piece[lo : hi + 1]
                second = piece[hi:] + piece[: lo + 1]
                pieces[pi] = first
                pieces.append(second)
                break
        else:
            raise InputError("cut arc endpoints not in one piece")

    forward: dict[int, tuple[int, tuple[int, int]]] = {}
    backward: dict[tuple[int, tuple[int, int]], int] = {}
    for pi, piece in enumerate(pieces):
        size = len(piece)
        for p in range(size):
            for q in range(p + 1, size):
                if q - p < 2 or (p, q) == (0, size - 1):
                    continue
                a = Arc(min(piece[p], piece[q]), max(piece[p], piece[q]))
                idx = backend.id_of_arc(a)
                if idx not in z or idx in rigid:
                    raise InputError("piece arc escapes the reduced class")
                forward[idx] = (pi, (p, q))
                backward[(pi, (p, q))] = idx
    expected = set(z.ids()) - set(rigid.ids())
    if set(forward) != expected:
        raise InputError("cut dictionary is not a bijection")
    return CutReduction(
        backend,
        rigid,
        z,
        tuple(tuple(p) for p in pieces),
        forward,
        backward,
    )


def zz_mutate(
    backend: PolygonBackend, rigid: Subcat, a: Subcat, k: int
) -> Subcat:
    """Rotate a's non-cut arcs inside the cut pieces, keeping the cut set."""
    red = cut_reduction(backend, rigid)
    if not rigid.issubset(a) or not a.issubset(red.z):
        raise InputError(
            "mutable set must contain the cut set and avoid crossings with it"
        )
    moved = [red.reduced_shift(i, k) for i in a.minus(rigid)]
    return Subcat.of(backend, moved).union(rigid)
