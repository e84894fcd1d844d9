"""Bitset algebra of additive subcategories and star-product search.

A Subcat is a set of indecomposable ids standing for the full additive
subcategory of finite direct sums of those indecomposables; it is
summand-closed by construction.  Perpendiculars are exact Hom-table
sweeps.  Star membership C in add(X) * add(Y) runs on two engines:

* peel: repeatedly strip one Y-summand by enumerating maps C -> y and
  passing to the cocone, accepting when some chain lands in add(X).
  Complete for capped Y-sides (every genuine triangle induces a peel
  chain of the same length); acceptance of YES additionally needs
  add(Y) closed under extensions, which callers assert.  That holds
  for every production use here: perpendicular classes and verified
  cotorsion-pair sides are extension-closed.
* literal: the backend's capped dense-connecting-map enumerator; it
  yields morphism-level triangle witnesses and serves as the
  independent cross-check for the peel engine.

Verdicts are three-valued; a NO is only reported when the search space
for caps c and c+1 is exhausted, and budget exhaustion degrades to
inconclusive, never to a boolean.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Optional

from .core import (
    Backend,
    BudgetExceeded,
    InputError,
    Mor,
    Obj,
    Verdict,
)

MAX_ENUM_INDECS = 27
DEFAULT_CAP = 4
DEFAULT_BUDGET = 500_000


class Subcat:
    """Immutable set of indecomposable ids bound to one backend."""

    __slots__ = ("backend", "bits")

    def __init__(self, backend: Backend, bits: int):
        if bits < 0 or bits >> len(backend.indecs):
            raise InputError("subcat bits out of range for backend")
        self.backend = backend
        self.bits = bits

    # -- constructors ---------------------------------------------------

    @staticmethod
    def empty(backend: Backend) -> "Subcat":
        return Subcat(backend, 0)

    @staticmethod
    def everything(backend: Backend) -> "Subcat":
        return Subcat(backend, (1 << len(backend.indecs)) - 1)

    @staticmethod
    def of(backend: Backend, ids: Iterable[int]) -> "Subcat":
        bits = 0
        for i in ids:
            if not (0 <= i < len(backend.indecs)):
                raise InputError(f"no indecomposable with id {i}")
            bits |= 1 << i
        return Subcat(backend, bits)

    @staticmethod
    def from_labels(backend: Backend, labels: Iterable[str]) -> "Subcat":
        return Subcat.of(backend, (backend.id_of(l) for l in labels))

    # -- set algebra ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subcat)
            and other.backend is self.backend
            and other.bits == self.bits
        )

    def __hash__(self) -> int:
        return hash((id(self.backend), self.bits))

    def __contains__(self, ind_id: int) -> bool:
        return bool((self.bits >> ind_id) & 1)

    def __iter__(self) -> Iterator[int]:
        rest = self.bits
        while rest:
            i = (rest & -rest).bit_length() - 1
            yield i
            rest &= rest - 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    def ids(self) -> list[int]:
        return list(self)

    def labels(self) -> list[str]:
        return [self.backend.label_of(i) for i in self]

    def union(self, other: "Subcat") -> "Subcat":
        self._same(other)
        return Subcat(self.backend, self.bits | other.bits)

    def intersect(self, other: "Subcat") -> "Subcat":
        self._same(other)
        return Subcat(self.backend, self.bits & other.bits)

    def minus(self, other: "Subcat") -> "Subcat":
        self._same(other)
        return Subcat(self.backend, self.bits & ~other.bits)

    def issubset(self, other: "Subcat") -> bool:
        self._same(other)
        return not (self.bits & ~other.bits)

    def shifted(self, k: int) -> "Subcat":
        return Subcat.of(self.backend, (self.backend.shift_id(i, k) for i in self))

    def contains_obj(self, x: Obj) -> bool:
        return all(i in self for i in x.summands)

    def _same(self, other: "Subcat") -> None:
        if other.backend is not self.backend:
            raise InputError("subcats belong to different backends")

    def __repr__(self) -> str:
        return f"Subcat({self.labels()})"


def right_perp(x: Subcat, shift: int) -> Subcat:
    """Indecomposables c with Hom(member[shift], c) = 0 for all members."""
    b = x.backend
    b._need("morphism_calculus")
    shifted = [b.shift_id(i, shift) for i in x]
    out = 0
    for c in range(len(b.indecs)):
        if all(b.hom_dim_pair(s, c) == 0 for s in shifted):
            out |= 1 << c
    return Subcat(b, out)


def left_perp(x: Subcat, shift: int) -> Subcat:
    """Indecomposables c with Hom(c, member[shift]) = 0 for all members."""
    b = x.backend
    b._need("morphism_calculus")
    shifted = [b.shift_id(i, shift) for i in x]
    out = 0
    for c in range(len(b.indecs)):
        if all(b.hom_dim_pair(c, s) == 0 for s in shifted):
            out |= 1 << c
    return Subcat(b, out)


class StarEngine:
    """Star-product membership and closure queries over one backend."""

    def __init__(
        self,
        backend: Backend,
        cap: int = DEFAULT_CAP,
        budget: int = DEFAULT_BUDGET,
    ):
        backend._need("exact_triangles")
        self.backend = backend
        self.cap = cap
        self.budget = budget
        self._peel_memo: dict[tuple[int, int, Obj, int], Optional[tuple]] = {}
        self._pair_ext_cache: dict[tuple[int, int], list[Obj]] = {}

    # -- membership -------------------------------------------------------

    def star_contains(
        self,
        x: Subcat,
        y: Subcat,
        c: Obj,
        engine: str = "auto",
        y_ext_closed: bool = False,
    ) -> Verdict:
        """Is there a triangle X' -> c -> Y' -> X'[1] with capped ends?

        ``y_ext_closed`` asserts that add(y) is closed under extensions;
        only then may the peel engine report YES directly.  Perpendicular
        classes and verified cotorsion-pair sides qualify.
        """
        if engine not in ("auto", "peel", "literal"):
            raise InputError(f"unknown star engine {engine!r}")
        b = self.backend
        if c.is_zero:
            return Verdict.yes(witness={"construction": "zero"})
        if y.is_empty:
            if x.contains_obj(c):
                return Verdict.yes(witness={"construction": "x-only"})
            return Verdict.no(reason="Y side is zero and C is not in add(X)")
        if x.is_empty:
            if y.contains_obj(c):
                return Verdict.yes(witness={"construction": "y-only"})
            return Verdict.no(reason="X side is zero and C is not in add(Y)")
        if x.contains_obj(c) or y.contains_obj(c):
            return Verdict.yes(witness={"construction": "one-sided"})
        use_peel = engine == "peel" or (engine == "auto" and y_ext_closed)
        if use_peel:
            return self._peel_verdict(x, y, c)
        return self._literal_verdict(x, y, c)

    def _peel_verdict(self, x: Subcat, y: Subcat, c: Obj) -> Verdict:
        try:
            chain = self._peel_search(x, y, c, self.cap + 1, [self.budget])
        except BudgetExceeded:
            return Verdict.inconclusive(reason="peel budget exhausted")
        if chain is not None:
            return Verdict.yes(
                witness={
                    "construction": "peel-chain",
                    "chain": [
                        {"peeled": self.backend.label_of(yid), "map": coords}
                        for yid, coords in chain[0]
                    ],
                    "base": self.backend.obj_labels(chain[1]),
                }
            )
        return Verdict.no(
            reason=f"no peel chain up to depth {self.cap + 1} (caps "
            f"{self.cap} and {self.cap + 1} agree)"
        )

    def _peel_search(
        self, x: Subcat, y: Subcat, c: Obj, depth: int, budget: list[int]
    ) -> Optional[tuple[list, Obj]]:
        """Shortest chain of Y-summand peels from c into add(x).

        Zero peel maps are skipped: in a genuine triangle whose second
        map has zero component on every Y-summand, the second map is
        zero outright, which splits the triangle and puts the middle
        term in add(x) already; the membership check at state entry
        covers that branch.
        """
        b = self.backend
        frontier: list[tuple[Obj, list]] = [(c, [])]
        best_seen: dict[Obj, int] = {c: depth}
        for remaining in range(depth, -1, -1):
            next_frontier: list[tuple[Obj, list]] = []
            for obj, chain in frontier:
                if x.contains_obj(obj):
                    return chain, obj
                if remaining == 0:
                    continue
                for yid in y:
                    ysingle = Obj.of(yid)
                    d = b.hom_dim(obj, ysingle)
                    for coords in range(1, 1 << d):
                        budget[0] -= 1
                        if budget[0] < 0:
                            raise BudgetExceeded("peel search budget exhausted")
                        g = Mor(obj, ysingle, coords)
                        cone_obj, _ = b.cone(g)
                        w = b.shift_obj(cone_obj, -1)
                        prev = best_seen.get(w)
                        if prev is not None and prev >= remaining - 1:
                            continue
                        best_seen[w] = remaining - 1
                        next_frontier.append((w, chain + [(yid, coords)]))
            frontier = next_frontier
            if not frontier:
                break
        return None

    def _literal_verdict(self, x: Subcat, y: Subcat, c: Obj) -> Verdict:
        b = self.backend
        try:
            for w in b.triangle_enumerate(
                x.ids(), y.ids(), c, cap=self.cap + 1, budget=self.budget
            ):
                return Verdict.yes(witness=w)
        except BudgetExceeded:
            return Verdict.inconclusive(reason="literal enumeration budget exhausted")
        return Verdict.no(
            reason=f"capped enumeration exhausted at caps {self.cap} "
            f"and {self.cap + 1}"
        )

    def find_witness(self, x: Subcat, y: Subcat, c: Obj, cap: int | None = None):
        """First morphism-level triangle witness, or None, or raises.

        ``cap`` overrides the engine default; witness searches for
        objects wider than the default cap need room for the split
        part of the triangle.
        """
        for w in self.backend.triangle_enumerate(
            x.ids(), y.ids(), c, cap=self.cap if cap is None else cap,
            budget=self.budget,
        ):
            return w
        return None

    # -- star sets ----------------------------------------------------------

    def star_indecs(
        self,
        x: Subcat,
        y: Subcat,
        engine: str = "auto",
        y_ext_closed: bool = False,
        within: Optional[Subcat] = None,
    ) -> tuple[Subcat, bool]:
        """Indecomposables inside the star, plus a completeness flag.

        The flag is False when any membership came back inconclusive;
        such members are excluded from the set, never guessed.
        ``within`` restricts the candidates, for callers that go on to
        intersect the result with a known class anyway.
        """
        b = self.backend
        bits = 0
        complete = True
        candidates = range(len(b.indecs)) if within is None else within.ids()
        for i in candidates:
            v = self.star_contains(
                x, y, Obj.of(i), engine=engine, y_ext_closed=y_ext_closed
            )
            if v.is_yes:
                bits |= 1 << i
            elif v.is_inconclusive:
                complete = False
        return Subcat(b, bits), complete

    # -- extension closure -----------------------------------------------

    def pair_extensions(self, a_id: int, b_id: int) -> list[Obj]:
        """All middle terms of triangles a -> E -> b, exactly.

        Single-indecomposable ends need no cap: every such triangle is
        the cone of one connecting map b[-1] -> a.
        """
        key = (a_id, b_id)
        got = self._pair_ext_cache.get(key)
        if got is not None:
            return got
        b = self.backend
        asingle = Obj.of(a_id)
        bm = Obj.of(b.shift_id(b_id, -1))
        d = b.hom_dim(bm, asingle)
        out = []
        seen = set()
        for coords in range(1 << d):
            cone_obj, _ = b.cone(Mor(bm, asingle, coords))
            if cone_obj not in seen:
                seen.add(cone_obj)
                out.append(cone_obj)
        self._pair_ext_cache[key] = out
        return out

    def is_ext_closed_pairwise(self, x: Subcat) -> bool:
        """Whether every extension of two members has its summands inside.

        This is a necessary condition for closure under extensions; it
        is exact (no caps) because the ends are single indecomposables.
        """
        for a in x:
            for bb in x:
                for mid in self.pair_extensions(a, bb):
                    if not x.contains_obj(mid):
                        return False
        return True

    def ext_closure(self, x: Subcat, engine: str = "literal") -> tuple[Subcat, bool]:
        """Least fixed point of adding star_indecs(R, R), with flag.

        Runs on the literal engine by default since the intermediate
        sets carry no extension-closure guarantee.
        """
        r = x
        complete = True
        while True:
            grown, ok = self.star_indecs(r, r, engine=engine)
            complete = complete and ok
            merged = r.union(grown)
            if merged == r:
                return r, complete
            r = merged


def enumerate_subcats(
    backend: Backend,
    pred: Callable[[Subcat], bool],
    parallel: bool = False,
) -> list[Subcat]:
    """All subcats satisfying pred, in canonical bit order.

    ``parallel`` is accepted for interface stability; evaluation is
    serial and deterministic.
    """
    k = len(backend.indecs)
    if k > MAX_ENUM_INDECS:
        raise InputError(
            f"subcategory enumeration needs at most {MAX_ENUM_INDECS} "
            f"indecomposables, backend has {k}"
        )
    out = []
    for bits in range(1 << k):
        s = Subcat(backend, bits)
        if pred(s):
            out.append(s)
    return out
