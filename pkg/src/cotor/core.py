"""Shared object and morphism model for the concrete triangulated backends.

Objects are finite multisets of indecomposables identified by small
integer ids; morphisms are coordinate vectors over a fixed block basis
of the Hom spaces.  A backend provides the actual calculus (Hom
dimensions, composition, cones); this module fixes the data types, the
capability flags, the error taxonomy, and the three-valued verdicts
that search routines return.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence


class CotorError(Exception):
    """Base class for package errors."""


class InputError(CotorError):
    """Invalid user-supplied data: bad labels, shapes, or parameters."""


class CapabilityError(InputError):
    """The backend does not support the requested operation."""


class BudgetExceeded(CotorError):
    """A bounded search ran out of its work budget."""


class InternalCheckError(CotorError):
    """An invariant that should hold by construction failed."""


class DecompositionMissing(CotorError):
    """A required decomposition triangle could not be found."""


YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Three-valued search result.

    ``state`` is one of yes / no / inconclusive.  Search caps turn a
    failed hunt into "no" only when the no is stable under growing the
    cap; otherwise the inconclusive state propagates to callers and is
    never silently coerced.
    """

    state: str
    witness: Any = None
    reason: Optional[str] = None

    def __post_init__(self) -> None:
        if self.state not in (YES, NO, INCONCLUSIVE):
            raise InputError(f"bad verdict state {self.state!r}")

    @property
    def is_yes(self) -> bool:
        return self.state == YES

    @property
    def is_no(self) -> bool:
        return self.state == NO

    @property
    def is_inconclusive(self) -> bool:
        return self.state == INCONCLUSIVE

    @staticmethod
    def yes(witness: Any = None, reason: Optional[str] = None) -> "Verdict":
        return Verdict(YES, witness, reason)

    @staticmethod
    def no(reason: Optional[str] = None, witness: Any = None) -> "Verdict":
        return Verdict(NO, witness, reason)

    @staticmethod
    def inconclusive(reason: Optional[str] = None) -> "Verdict":
        return Verdict(INCONCLUSIVE, None, reason)

    @staticmethod
    def all_of(verdicts: Iterable["Verdict"]) -> "Verdict":
        """Conjunction: no dominates, then inconclusive, then yes."""
        pending = None
        for v in verdicts:
            if v.is_no:
                return v
            if v.is_inconclusive:
                pending = v
        return pending if pending is not None else Verdict.yes()


@dataclass(frozen=True)
class Indec:
    """One indecomposable object: a stable id and a unique label."""

    id: int
    label: str


@dataclass(frozen=True, order=True)
class Obj:
    """Finite multiset of indecomposable ids, canonically sorted.

    The empty tuple is the zero object.  Equality is multiset equality,
    which is isomorphism by the Krull-Schmidt property of the backends.
    """

    summands: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if tuple(sorted(self.summands)) != self.summands:
            raise InputError("Obj summands must be sorted")

    @staticmethod
    def of(*ids: int) -> "Obj":
        return Obj(tuple(sorted(ids)))

    @staticmethod
    def from_iter(ids: Iterable[int]) -> "Obj":
        return Obj(tuple(sorted(ids)))

    @staticmethod
    def zero() -> "Obj":
        return Obj(())

    @property
    def is_zero(self) -> bool:
        return not self.summands

    def __len__(self) -> int:
        return len(self.summands)

    def plus(self, other: "Obj") -> "Obj":
        return Obj(tuple(sorted(self.summands + other.summands)))

    def remove(self, ids: Sequence[int]) -> "Obj":
        """Multiset difference; raises if ids are not contained."""
        rest = list(self.summands)
        for i in ids:
            rest.remove(i)
        return Obj(tuple(rest))

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for i in self.summands:
            out[i] = out.get(i, 0) + 1
        return out


@dataclass(frozen=True)
class Mor:
    """Morphism as a coordinate bit vector over the block Hom basis.

    The basis is fixed per backend: blocks run over (source position,
    target position) pairs in row-major order, each block using that
    backend's frozen basis of Hom(source summand, target summand).
    """

    src: Obj
    dst: Obj
    coords: int = 0

    def plus(self, other: "Mor") -> "Mor":
        if (self.src, self.dst) != (other.src, other.dst):
            raise InputError("morphism sum needs matching endpoints")
        return Mor(self.src, self.dst, self.coords ^ other.coords)

    @property
    def is_zero(self) -> bool:
        return self.coords == 0


@dataclass(frozen=True)
class Tri:
    """Candidate triangle A -> B -> C -> A[1].

    ``morphism_data`` records whether f, g, h are meaningful; purely
    object-level triangles carry None maps.  When maps are present the
    consecutive composites must vanish, which backends check on
    construction.
    """

    a: Obj
    b: Obj
    c: Obj
    f: Optional[Mor] = None
    g: Optional[Mor] = None
    h: Optional[Mor] = None
    morphism_data: bool = False

    def __post_init__(self) -> None:
        if self.morphism_data and None in (self.f, self.g, self.h):
            raise InputError("morphism_data set but maps missing")


@dataclass(frozen=True)
class BackendCaps:
    """Capability flags; exact triangles presuppose morphism calculus."""

    morphism_calculus: bool
    exact_triangles: bool

    def __post_init__(self) -> None:
        if self.exact_triangles and not self.morphism_calculus:
            raise InputError("exact_triangles requires morphism_calculus")


class Backend:
    """Common interface of the concrete category models.

    Subclasses must provide the object layer (indecomposables, shift,
    extension incidence).  The morphism layer and the triangle layer
    raise CapabilityError unless the corresponding capability flag is
    set and the subclass overrides them.
    """

    spec_string: str = ""
    caps: BackendCaps = BackendCaps(False, False)

    # --- object layer -------------------------------------------------

    @property
    def indecs(self) -> tuple[Indec, ...]:
        raise NotImplementedError

    @property
    def K(self) -> int:
        return len(self.indecs)

    def label_of(self, i: int) -> str:
        return self.indecs[i].label

    def id_of(self, label: str) -> int:
        for ind in self.indecs:
            if ind.label == label:
                return ind.id
        raise InputError(f"unknown indecomposable label {label!r}")

    def shift_id(self, i: int, k: int = 1) -> int:
        raise NotImplementedError

    def shift_obj(self, x: Obj, k: int = 1) -> Obj:
        return Obj.from_iter(self.shift_id(i, k) for i in x.summands)

    def ext_incidence(self, i: int, j: int) -> bool:
        """Whether degree-one maps from indec i to indec j exist."""
        raise NotImplementedError

    def obj_labels(self, x: Obj) -> list[str]:
        return [self.label_of(i) for i in x.summands]

    def obj_from_labels(self, labels: Iterable[str]) -> Obj:
        return Obj.from_iter(self.id_of(l) for l in labels)

    # --- morphism layer -----------------------------------------------

    def _need(self, flag: str) -> None:
        if not getattr(self.caps, flag):
            raise CapabilityError(
                f"backend {self.spec_string!r} lacks capability {flag}"
            )

    def hom_dim_pair(self, i: int, j: int) -> int:
        self._need("morphism_calculus")
        raise NotImplementedError

    def hom_dim(self, x: Obj, y: Obj) -> int:
        return sum(
            self.hom_dim_pair(i, j) for i in x.summands for j in y.summands
        )

    def block_layout(self, x: Obj, y: Obj) -> list[tuple[int, int, int, int]]:
        """Blocks (src position, dst position, offset, length)."""
        out = []
        off = 0
        for p, i in enumerate(x.summands):
            for q, j in enumerate(y.summands):
                d = self.hom_dim_pair(i, j)
                out.append((p, q, off, d))
                off += d
        return out

    def block_of(self, f: Mor, p: int, q: int) -> int:
        for bp, bq, off, d in self.block_layout(f.src, f.dst):
            if (bp, bq) == (p, q):
                return (f.coords >> off) & ((1 << d) - 1)
        raise InputError("no such block")

    def zero_mor(self, x: Obj, y: Obj) -> Mor:
        return Mor(x, y, 0)

    def identity(self, x: Obj) -> Mor:
        self._need("morphism_calculus")
        raise NotImplementedError

    def compose(self, f: Mor, g: Mor) -> Mor:
        """g after f; endpoints must chain as f: X->Y, g: Y->Z."""
        self._need("morphism_calculus")
        raise NotImplementedError

    def hom_elements(self, x: Obj, y: Obj):
        """All morphisms x -> y, zero first, deterministic order."""
        d = self.hom_dim(x, y)
        for c in range(1 << d):
            yield Mor(x, y, c)

    def is_isomorphism(self, f: Mor) -> bool:
        self._need("morphism_calculus")
        raise NotImplementedError

    def shift_mor(self, f: Mor, k: int = 1) -> Mor:
        self._need("exact_triangles")
        raise NotImplementedError

    # --- triangle layer -----------------------------------------------

    def cone(self, f: Mor):
        """Completed triangle on f; returns (cone object, witness)."""
        self._need("exact_triangles")
        raise NotImplementedError

    def triangle_enumerate(self, xset, yset, c: Obj, cap: int, budget=None):
        self._need("exact_triangles")
        raise NotImplementedError

    # --- triangle helpers ---------------------------------------------

    def rotate_left(self, t: Tri) -> Tri:
        """A->B->C->A[1] becomes B->C->A[1]->B[1]."""
        if not t.morphism_data:
            return Tri(t.b, t.c, self.shift_obj(t.a, 1), morphism_data=False)
        return Tri(
            t.b,
            t.c,
            self.shift_obj(t.a, 1),
            t.g,
            t.h,
            self.shift_mor(t.f, 1),
            morphism_data=True,
        )

    def rotate_right(self, t: Tri) -> Tri:
        """A->B->C->A[1] becomes C[-1]->A->B->C."""
        if not t.morphism_data:
            return Tri(self.shift_obj(t.c, -1), t.a, t.b, morphism_data=False)
        return Tri(
            self.shift_obj(t.c, -1),
            t.a,
            t.b,
            self.shift_mor(t.h, -1),
            t.f,
            t.g,
            morphism_data=True,
        )

    def direct_sum_tri(self, parts: Sequence[Tri]) -> Tri:
        """Summand-wise direct sum of triangles with morphism data."""
        if not parts:
            return Tri(Obj.zero(), Obj.zero(), Obj.zero(),
                       Mor(Obj.zero(), Obj.zero()), Mor(Obj.zero(), Obj.zero()),
                       Mor(Obj.zero(), Obj.zero()), morphism_data=True)
        a = _merge_objs([t.a for t in parts])
        b = _merge_objs([t.b for t in parts])
        c = _merge_objs([t.c for t in parts])
        a1 = self.shift_obj(a, 1)
        f = self._assemble_sum(a, b, [(t.a, t.b, t.f) for t in parts])
        g = self._assemble_sum(b, c, [(t.b, t.c, t.g) for t in parts])
        h = self._assemble_sum(c, a1, [(t.c, self.shift_obj(t.a, 1), t.h) for t in parts])
        return Tri(a, b, c, f, g, h, morphism_data=True)

    def _assemble_sum(self, src: Obj, dst: Obj, comps) -> Mor:
        """Block-diagonal morphism from per-part components.

        Parts claim positions in the sorted src/dst multisets greedily
        by id; permuting equal summands is an isomorphism, so any
        consistent assignment represents the same map.
        """
        src_slots = _slot_assignment(src, [c[0] for c in comps])
        dst_slots = _slot_assignment(dst, [c[1] for c in comps])
        coords = 0
        layout = {(p, q): (off, d) for p, q, off, d in self.block_layout(src, dst)}
        for part_idx, (psrc, pdst, pmor) in enumerate(comps):
            if pmor is None:
                raise InputError("direct sum needs morphism data")
            part_layout = self.block_layout(psrc, pdst)
            for pp, qq, off, d in part_layout:
                block = (pmor.coords >> off) & ((1 << d) - 1)
                if block:
                    gp = src_slots[part_idx][pp]
                    gq = dst_slots[part_idx][qq]
                    goff, gd = layout[(gp, gq)]
                    if gd != d:
                        raise InternalCheckError("block size mismatch in sum")
                    coords |= block << goff
        return Mor(src, dst, coords)


def _merge_objs(objs: Sequence[Obj]) -> Obj:
    ids: list[int] = []
    for o in objs:
        ids.extend(o.summands)
    return Obj.from_iter(ids)


def _slot_assignment(total: Obj, parts: Sequence[Obj]) -> list[list[int]]:
    """For each part, positions of its summands inside the sorted total."""
    free: dict[int, list[int]] = {}
    for pos, i in enumerate(total.summands):
        free.setdefault(i, []).append(pos)
    taken = {k: 0 for k in free}
    out: list[list[int]] = []
    for part in parts:
        slots = []
        for i in part.summands:
            idx = taken[i]
            taken[i] += 1
            slots.append(free[i][idx])
        out.append(slots)
    total_used = sum(len(p) for p in out)
    if total_used != len(total):
        raise InternalCheckError("slot assignment did not cover the sum")
    return out


def multisets_over(ids: Sequence[int], size: int):
    """All multisets of the given size over ids, deterministic order."""
    return itertools.combinations_with_replacement(sorted(ids), size)
