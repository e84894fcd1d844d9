"""Command-line front end producing versioned JSON reports.

Every report is a single JSON document under the schema name
``cotor.report/1`` that embeds the backend spec, the search cap, the
recorded seed, and the tool version, so rerunning the same command with
the same configuration reproduces the report byte for byte.  Exit
status encodes the outcome: 0 clean, 1 property violation found, 2
invalid input, 3 a search was inconclusive (suppressed by
``--allow-inconclusive``).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Callable, Optional

from . import __version__, nakayama, polygon
from .core import (
    Backend,
    BudgetExceeded,
    CotorError,
    InputError,
    InternalCheckError,
    Obj,
    Verdict,
)
from .mutation import MutationEngine
from .pairs import (
    CotorsionPair,
    PairEngine,
    TwinCotorsionPair,
    trivial_hovey_tcp,
    trivial_pairs,
)
from .quotient import ZIQuotient
from .subcats import Subcat, left_perp, right_perp

SCHEMA = "cotor.report/1"

_BUILDERS: dict[str, Callable[[str], Backend]] = {
    "nakayama": nakayama.parse_spec,
    "polygon": polygon.parse_spec,
}

_SUITES = ("counts", "conditions", "hovey", "adjunction", "bijection", "all")


def build_backend(spec: str) -> Backend:
    family = spec.split(":", 1)[0]
    builder = _BUILDERS.get(family)
    if builder is None:
        raise InputError(
            f"unknown backend family {family!r}; expected one of "
            + ", ".join(sorted(_BUILDERS))
        )
    return builder(spec)


class _Status:
    """Worst-outcome accumulator behind the exit code."""

    def __init__(self) -> None:
        self.violation = False
        self.inconclusive = False

    def absorb(self, verdict: Verdict) -> None:
        if verdict.is_no:
            self.violation = True
        elif verdict.is_inconclusive:
            self.inconclusive = True

    def code(self, allow_inconclusive: bool) -> int:
        if self.violation:
            return 1
        if self.inconclusive and not allow_inconclusive:
            return 3
        return 0


# -- object and pair parsing ------------------------------------------------

_SIMPLE_ALIAS = re.compile(r"^S(\d+)$")


def _label_map(b: Backend) -> dict[str, int]:
    return {b.label_of(i): i for i in range(len(b.indecs))}


def _resolve_label(b: Backend, text: str) -> int:
    names = _label_map(b)
    text = text.strip()
    if text in names:
        return names[text]
    m = _SIMPLE_ALIAS.match(text)
    if m is not None:
        # Si is shorthand for the length-one module at vertex i.
        alias = f"M({m.group(1)},1)"
        if alias in names:
            return names[alias]
    raise InputError(f"unknown indecomposable label {text!r}")


def _split_labels(inner: str) -> list[str]:
    # Canonical labels carry commas inside parentheses, so only
    # top-level commas separate list entries.
    parts: list[str] = []
    depth = 0
    cur: list[str] = []
    for ch in inner:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputError(f"unbalanced parentheses in {inner!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise InputError(f"unbalanced parentheses in {inner!r}")
    parts.append("".join(cur))
    return parts


def _parse_ids(b: Backend, text: str) -> list[int]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise InputError(f"expected a bracketed label list, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return []
    return [_resolve_label(b, part) for part in _split_labels(inner)]


def _parse_assignments(
    b: Backend, text: str, keys: frozenset[str]
) -> dict[str, list[int]]:
    got: dict[str, list[int]] = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, eq, value = chunk.partition("=")
        if not eq:
            raise InputError(f"expected NAME=[labels] in {chunk!r}")
        name = name.strip()
        if name not in keys:
            raise InputError(
                f"unexpected class name {name!r}; wanted {sorted(keys)}"
            )
        if name in got:
            raise InputError(f"class {name!r} given twice")
        got[name] = _parse_ids(b, value)
    missing = keys - set(got)
    if missing:
        raise InputError(f"missing classes: {sorted(missing)}")
    return got


def _parse_pair(engine: PairEngine, text: str) -> CotorsionPair:
    b = engine.backend
    got = _parse_assignments(b, text, frozenset({"U", "V"}))
    return CotorsionPair(Subcat.of(b, got["U"]), Subcat.of(b, got["V"]))


def _parse_tcp(engine: PairEngine, text: str) -> TwinCotorsionPair:
    """Named twin pair, a doubled pair, or four explicit classes."""
    text = text.strip()
    if text == "trivial-hovey":
        return trivial_hovey_tcp(engine)
    if text.startswith("degenerate:"):
        cp = _parse_pair(engine, text[len("degenerate:") :])
        return engine.make_tcp(cp, cp)
    b = engine.backend
    got = _parse_assignments(b, text, frozenset({"S", "T", "U", "V"}))
    inner = CotorsionPair(Subcat.of(b, got["S"]), Subcat.of(b, got["T"]))
    outer = CotorsionPair(Subcat.of(b, got["U"]), Subcat.of(b, got["V"]))
    return engine.make_tcp(inner, outer)


# -- report plumbing ---------------------------------------------------------


def _cp_record(p: CotorsionPair, flags: bool = True) -> dict[str, Any]:
    rec: dict[str, Any] = p.as_labels()
    if flags:
        rec["flags"] = p.flags()
    return rec


def _envelope(args: argparse.Namespace, payload: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": args.command,
        "backend": getattr(args, "backend", None),
        "cap": getattr(args, "cap", None),
        "jobs": getattr(args, "jobs", 1),
        "seed": getattr(args, "seed", 0),
        "report": payload,
    }


def _emit_text(args: argparse.Namespace, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args: argparse.Namespace, doc: dict) -> None:
    _emit_text(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")


_ENGINE_MEMO: dict[tuple[str, int], PairEngine] = {}


def _engine(args: argparse.Namespace) -> PairEngine:
    # One engine per configuration keeps star and quotient caches warm
    # across the suites of a single invocation.
    if args.backend is None:
        raise InputError("--backend is required for this command")
    key = (args.backend, args.cap)
    got = _ENGINE_MEMO.get(key)
    if got is None:
        got = PairEngine(build_backend(args.backend), cap=args.cap)
        _ENGINE_MEMO[key] = got
    return got


def _claim(
    claims: list[dict], status: _Status, name: str, verdict: Verdict, **extra
) -> None:
    row: dict[str, Any] = {"claim": name, "verdict": verdict.state}
    if verdict.reason:
        row["reason"] = verdict.reason
    row.update(extra)
    claims.append(row)
    status.absorb(verdict)


# -- enumeration commands ----------------------------------------------------


def _cmd_enumerate_cp(args: argparse.Namespace, status: _Status) -> dict:
    engine = _engine(args)
    enum = engine.enumerate_cotorsion()
    if enum.inconclusive:
        status.inconclusive = True
    return {
        "count": len(enum.pairs),
        "pairs": [_cp_record(p) for p in enum.pairs],
        "unresolved": [_cp_record(p, flags=False) for p in enum.inconclusive],
    }


def _cmd_enumerate_tcp(args: argparse.Namespace, status: _Status) -> dict:
    engine = _engine(args)
    need_quotient = args.cond_I or args.cond_II or args.cond_III or args.hovey
    concentric_only = bool(args.concentric or need_quotient)
    tcps, unresolved = engine.enumerate_tcp(concentric_only=concentric_only)
    if unresolved:
        status.inconclusive = True
    rows: list[dict[str, Any]] = []
    for p in tcps:
        rec: dict[str, Any] = p.as_labels()
        rec["flags"] = p.flags()
        rec["concentric"] = engine.is_concentric(p)
        verdicts: dict[str, str] = {}
        keep = True

        def _filter(name: str, verdict: Verdict) -> None:
            # A failed filter drops the row; only undecidable membership
            # degrades the run.
            nonlocal keep
            verdicts[name] = verdict.state
            if verdict.is_inconclusive:
                status.inconclusive = True
            if not verdict.is_yes:
                keep = False

        if args.hovey:
            v, n = engine.is_hovey(p)
            _filter("hovey", v)
            if v.is_yes and n is not None:
                rec["hovey_class"] = sorted(n.labels())
        if args.cond_II:
            _filter("condition_II", engine.check_condition_II(p))
        if args.cond_III:
            _filter("condition_III", engine.check_condition_III(p))
        if args.cond_I:
            _filter("condition_I", engine.check_condition_I(p))
        if verdicts:
            rec["verdicts"] = verdicts
        if keep:
            rows.append(rec)
    return {
        "count": len(rows),
        "concentric_only": concentric_only,
        "twin_pairs": rows,
        "unresolved_constituents": [
            _cp_record(p, flags=False) for p in unresolved
        ],
    }


def _cmd_inspect_pair(args: argparse.Namespace, status: _Status) -> dict:
    engine = _engine(args)
    b = engine.backend
    got = _parse_assignments(b, args.pair, frozenset({"U", "V"}))
    u = Subcat.of(b, got["U"])
    v = Subcat.of(b, got["V"])
    verdict = engine.is_cotorsion_pair(u, v)
    if verdict.is_inconclusive:
        status.inconclusive = True
    rec: dict[str, Any] = {
        "U": u.labels(),
        "V": v.labels(),
        "cotorsion": verdict.state,
        "right_perp_of_U": right_perp(u, -1).labels(),
        "left_perp_of_V": left_perp(v, 1).labels(),
    }
    if verdict.reason:
        rec["reason"] = verdict.reason
    if verdict.is_yes:
        rec["flags"] = CotorsionPair(u, v).flags()
    return rec


# -- quotient commands -------------------------------------------------------


def _cmd_reduce(args: argparse.Namespace, status: _Status) -> dict:
    engine = _engine(args)
    p = _parse_tcp(engine, args.tcp)
    d = engine.derived_sets(p)
    if not d.complete:
        status.inconclusive = True
    q = ZIQuotient.for_pair(engine, p)
    payload = q.summary()
    payload["twin"] = p.as_labels()
    conditions = {
        "condition_II": engine.check_condition_II(p),
        "condition_III": engine.check_condition_III(p),
        "condition_I": engine.check_condition_I(p),
    }
    payload["conditions"] = {k: v.state for k, v in conditions.items()}
    for v in conditions.values():
        if v.is_inconclusive:
            status.inconclusive = True
    return payload


def _cmd_mutate(args: argparse.Namespace, status: _Status) -> dict:
    engine = _engine(args)
    p = _parse_tcp(engine, args.tcp)
    me = MutationEngine(engine, p)
    cp = _parse_pair(engine, args.pair)
    out = me.mutate(cp, args.k)
    return {
        "twin": p.as_labels(),
        "conditions": {
            "condition_I": me.cond_I.state,
            "condition_II": me.cond_II.state,
        },
        "input": _cp_record(cp),
        "k": args.k,
        "output": _cp_record(out),
    }


def _cmd_orbit_graph(args: argparse.Namespace, status: _Status) -> None:
    engine = _engine(args)
    p = _parse_tcp(engine, args.tcp)
    me = MutationEngine(engine, p)
    _emit_text(args, me.orbit_graph())
    return None


# -- verification suites -----------------------------------------------------


def enumerate_by_second_class(engine: PairEngine) -> tuple[list[CotorsionPair], bool]:
    """Independent sweep of second classes; the dual of the main route."""
    b = engine.backend
    out: list[CotorsionPair] = []
    complete = True
    for bits in range(1 << len(b.indecs)):
        v = Subcat(b, bits)
        if not engine.star.is_ext_closed_pairwise(v):
            continue
        u = left_perp(v, 1)
        if right_perp(u, -1) != v:
            continue
        verdict = engine.is_cotorsion_pair(u, v)
        if verdict.is_yes:
            out.append(CotorsionPair(u, v))
        elif verdict.is_inconclusive:
            complete = False
    return out, complete


def _suite_counts_polygon(
    b: polygon.PolygonBackend, claims: list, status: _Status
) -> dict:
    rigid = polygon.enumerate_rigid(b)
    tris = polygon.enumerate_triangulations(b)
    pt = polygon.enumerate_ptolemy(b)
    rigid_bits = {s.bits for s in rigid}
    maximal = {
        s.bits
        for s in rigid
        if not any(s.bits != t and (s.bits & t) == s.bits for t in rigid_bits)
    }
    tri_bits = {s.bits for s in tris}
    _claim(
        claims,
        status,
        "triangulations are exactly the maximal non-crossing sets",
        Verdict.yes() if tri_bits == maximal else Verdict.no(),
    )
    _claim(
        claims,
        status,
        "every triangulation is closed under crossing resolution",
        Verdict.yes()
        if all(polygon.is_ptolemy(b, s) for s in tris)
        else Verdict.no(),
    )
    return {
        "rigid": len(rigid),
        "triangulations": len(tris),
        "crossing_closed": len(pt),
    }


def _suite_counts(args: argparse.Namespace, claims: list, status: _Status) -> dict:
    backend = build_backend(args.backend)
    if isinstance(backend, polygon.PolygonBackend):
        return _suite_counts_polygon(backend, claims, status)
    engine = _engine(args)
    enum = engine.enumerate_cotorsion()
    if enum.inconclusive:
        status.inconclusive = True
    dual, dual_complete = enumerate_by_second_class(engine)
    if not dual_complete:
        status.inconclusive = True
    same = {p.key() for p in enum.pairs} == {p.key() for p in dual}
    _claim(
        claims,
        status,
        "first-class sweep and second-class sweep find the same pairs",
        Verdict.yes() if same else Verdict.no(),
    )
    zero, whole = trivial_pairs(engine)
    present = {zero.key(), whole.key()} <= {p.key() for p in enum.pairs}
    _claim(
        claims,
        status,
        "both one-sided trivial pairs are present",
        Verdict.yes() if present else Verdict.no(),
    )
    tcps, _ = engine.enumerate_tcp()
    concentric = [p for p in tcps if engine.is_concentric(p)]
    return {
        "cotorsion_pairs": len(enum.pairs),
        "twin_pairs": len(tcps),
        "concentric_twin_pairs": len(concentric),
    }


def _concentric_tcps(engine: PairEngine, status: _Status) -> list[TwinCotorsionPair]:
    tcps, unresolved = engine.enumerate_tcp(concentric_only=True)
    if unresolved:
        status.inconclusive = True
    return tcps


def _tcp_name(p: TwinCotorsionPair) -> str:
    lbl = p.as_labels()
    return (
        f"S={lbl['S']} T={lbl['T']} U={lbl['U']} V={lbl['V']}"
    )


def _suite_conditions(
    args: argparse.Namespace, claims: list, status: _Status
) -> dict:
    engine = _engine(args)
    rows = []
    for p in _concentric_tcps(engine, status):
        v2 = engine.check_condition_II(p)
        v3 = engine.check_condition_III(p)
        v1 = engine.check_condition_I(p)
        rows.append(
            {
                "twin": p.as_labels(),
                "condition_I": v1.state,
                "condition_II": v2.state,
                "condition_III": v3.state,
            }
        )
        for v in (v1, v2):
            if v.is_inconclusive:
                status.inconclusive = True
        if v3.is_yes:
            if v1.is_no or v2.is_no:
                verdict = Verdict.no(reason=_tcp_name(p))
            elif v1.is_yes and v2.is_yes:
                verdict = Verdict.yes()
            else:
                verdict = Verdict.inconclusive(reason=_tcp_name(p))
            _claim(
                claims,
                status,
                "two-sided vanishing implies both one-sided conditions",
                verdict,
                twin=p.as_labels(),
            )
    return {"checked": len(rows), "twin_pairs": rows}


def _suite_hovey(args: argparse.Namespace, claims: list, status: _Status) -> dict:
    engine = _engine(args)
    rows = []
    everything = sorted(Subcat.everything(engine.backend).labels())
    widest = trivial_hovey_tcp(engine).key()
    for p in _concentric_tcps(engine, status):
        verdict, n = engine.is_hovey(p)
        row: dict[str, Any] = {"twin": p.as_labels(), "hovey": verdict.state}
        if verdict.is_inconclusive:
            status.inconclusive = True
        if n is not None:
            row["hovey_class"] = sorted(n.labels())
        rows.append(row)
        flags = p.flags()
        if flags["degenerate"]:
            _claim(
                claims,
                status,
                "doubled pair is compatible with the all-object class",
                Verdict.yes()
                if verdict.is_yes and n is not None
                and sorted(n.labels()) == everything
                else Verdict.no(reason=_tcp_name(p)),
                twin=p.as_labels(),
            )
        if p.key() == widest:
            _claim(
                claims,
                status,
                "widest twin pair is compatible with the empty class",
                Verdict.yes()
                if verdict.is_yes and n is not None and n.bits == 0
                else Verdict.no(reason=_tcp_name(p)),
                twin=p.as_labels(),
            )
        dual_ok = (
            p.u == left_perp(p.v, 1)
            and p.t == right_perp(p.s, -1)
        )
        _claim(
            claims,
            status,
            "each class is recovered as a perpendicular of its partner",
            Verdict.yes() if dual_ok else Verdict.no(reason=_tcp_name(p)),
            twin=p.as_labels(),
        )
    return {"checked": len(rows), "twin_pairs": rows}


def _suite_adjunction(
    args: argparse.Namespace, claims: list, status: _Status
) -> dict:
    engine = _engine(args)
    rows = []
    for p in _concentric_tcps(engine, status):
        d = engine.derived_sets(p)
        if not d.complete:
            _claim(
                claims,
                status,
                "shift adjunction on quotient dimensions",
                Verdict.inconclusive(reason="derived class search incomplete"),
                twin=p.as_labels(),
            )
            continue
        q = ZIQuotient.for_pair(engine, p)
        reps = q.zi_objects()
        ok = True
        for x in reps:
            for y in reps:
                lhs = q.hom_mod_I(q.Sigma_obj(Obj.of(x)), Obj.of(y)).dim
                rhs = q.hom_mod_I(Obj.of(x), q.Omega_obj(Obj.of(y))).dim
                if lhs != rhs:
                    ok = False
        _claim(
            claims,
            status,
            "shift adjunction on quotient dimensions",
            Verdict.yes() if ok else Verdict.no(reason=_tcp_name(p)),
            twin=p.as_labels(),
        )
        v1 = engine.check_condition_I(p)
        v2 = engine.check_condition_II(p)
        if v1.is_yes and v2.is_yes:
            inverse = True
            for r in reps:
                fwd = q.class_of(q.Sigma_obj(q.Omega_obj(Obj.of(r))))
                back = q.class_of(q.Omega_obj(q.Sigma_obj(Obj.of(r))))
                if fwd != q.class_of(Obj.of(r)) or back != q.class_of(Obj.of(r)):
                    inverse = False
            _claim(
                claims,
                status,
                "suspension and loop are mutually inverse on classes",
                Verdict.yes() if inverse else Verdict.no(reason=_tcp_name(p)),
                twin=p.as_labels(),
            )
        rows.append({"twin": p.as_labels(), "objects": len(reps)})
    return {"checked": len(rows), "twin_pairs": rows}


def _suite_bijection(
    args: argparse.Namespace, claims: list, status: _Status
) -> dict:
    engine = _engine(args)
    enum = engine.enumerate_cotorsion()
    if enum.inconclusive:
        status.inconclusive = True
    targets: list[TwinCotorsionPair] = [trivial_hovey_tcp(engine)]
    for cp in enum.pairs:
        targets.append(engine.make_tcp(cp, cp))
    for p in _concentric_tcps(engine, status):
        if p.flags()["zz_setting"]:
            targets.append(p)
    seen: set[tuple[int, int, int, int]] = set()
    rows = []
    for p in targets:
        if p.key() in seen:
            continue
        seen.add(p.key())
        me = MutationEngine(engine, p)
        row: dict[str, Any] = {
            "twin": p.as_labels(),
            "condition_I": me.cond_I.state,
            "condition_II": me.cond_II.state,
        }
        if not me.preconditions_met:
            state = (
                Verdict.no(reason=_tcp_name(p))
                if me.cond_I.is_no or me.cond_II.is_no
                else Verdict.inconclusive(reason=_tcp_name(p))
            )
            _claim(
                claims,
                status,
                "quotient conditions hold on the designated twin pair",
                state,
                twin=p.as_labels(),
            )
            rows.append(row)
            continue
        report = me.verify_bijection()
        row["mutable_count"] = report["mutable_count"]
        row["quotient_count"] = report["quotient_count"]
        rows.append(row)
        _claim(
            claims,
            status,
            "descent and lift are mutually inverse bijections",
            Verdict.yes()
            if report["ok"]
            else Verdict.no(reason="; ".join(report["failures"])),
            twin=p.as_labels(),
        )
    return {"checked": len(rows), "twin_pairs": rows}


_SUITE_FUNCS: dict[str, Callable[[argparse.Namespace, list, _Status], dict]] = {
    "counts": _suite_counts,
    "conditions": _suite_conditions,
    "hovey": _suite_hovey,
    "adjunction": _suite_adjunction,
    "bijection": _suite_bijection,
}


def _cmd_verify(args: argparse.Namespace, status: _Status) -> dict:
    names = list(_SUITE_FUNCS) if args.suite == "all" else [args.suite]
    claims: list[dict] = []
    results: dict[str, Any] = {}
    for name in names:
        results[name] = _SUITE_FUNCS[name](args, claims, status)
    return {"suites": results, "claims": claims}


# -- backend matching --------------------------------------------------------


def _shift_orbits(b: Backend) -> list[list[int]]:
    seen: set[int] = set()
    orbits: list[list[int]] = []
    for i in range(len(b.indecs)):
        if i in seen:
            continue
        orb = [i]
        seen.add(i)
        j = b.shift_id(i, 1)
        while j != i:
            orb.append(j)
            seen.add(j)
            j = b.shift_id(j, 1)
        orbits.append(orb)
    return orbits


def match_backends(a: Backend, b: Backend) -> Optional[dict[str, str]]:
    """Bijection matching degree-one incidence and conjugating the shift.

    Exact backtracking over shift orbits: picking the image of one orbit
    member forces the whole orbit, so the branching factor is the number
    of same-length orbits rather than the number of indecomposables.
    """
    ka, kb = len(a.indecs), len(b.indecs)
    if ka != kb:
        return None
    if ka > 24:
        raise InputError("exact matching is limited to 24 indecomposables")
    orbits = sorted(_shift_orbits(a), key=len, reverse=True)
    orbit_len_b = {}
    for orb in _shift_orbits(b):
        for i in orb:
            orbit_len_b[i] = len(orb)
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def _consistent(new: dict[int, int]) -> bool:
        pool = list(assignment.items()) + list(new.items())
        for x, fx in new.items():
            for y, fy in pool:
                if a.ext_incidence(x, y) != b.ext_incidence(fx, fy):
                    return False
                if a.ext_incidence(y, x) != b.ext_incidence(fy, fx):
                    return False
        return True

    def _place(idx: int) -> bool:
        if idx == len(orbits):
            return True
        orb = orbits[idx]
        for start in range(kb):
            if start in used or orbit_len_b.get(start) != len(orb):
                continue
            new: dict[int, int] = {}
            tgt = start
            for x in orb:
                new[x] = tgt
                tgt = b.shift_id(tgt, 1)
            if any(fx in used for fx in new.values()):
                continue
            if not _consistent(new):
                continue
            assignment.update(new)
            used.update(new.values())
            if _place(idx + 1):
                return True
            for x in new:
                used.discard(assignment.pop(x))
        return False

    if not _place(0):
        return None
    for x in range(ka):
        if assignment[a.shift_id(x, 1)] != b.shift_id(assignment[x], 1):
            raise InternalCheckError("matching does not conjugate the shift")
        for y in range(ka):
            if a.ext_incidence(x, y) != b.ext_incidence(
                assignment[x], assignment[y]
            ):
                raise InternalCheckError("matching breaks incidence")
    return {
        a.label_of(x): b.label_of(fx) for x, fx in sorted(assignment.items())
    }


def _cmd_match_backends(args: argparse.Namespace, status: _Status) -> dict:
    ba = build_backend(args.spec_a)
    bb = build_backend(args.spec_b)
    found = match_backends(ba, bb)
    return {
        "spec_a": args.spec_a,
        "spec_b": args.spec_b,
        "size_a": len(ba.indecs),
        "size_b": len(bb.indecs),
        "match": found,
    }


# -- argument wiring ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cotor",
        description=(
            "Enumerate, reduce, and mutate cotorsion-pair structures over "
            "small triangulated categories."
        ),
    )
    top.add_argument(
        "--version", action="version", version=f"cotor {__version__}"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--backend", help="backend spec, e.g. nakayama:m=2,n=2 or polygon:N=5"
    )
    common.add_argument(
        "--cap", type=int, default=4, help="search width cap, at least 2"
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="worker budget hint; execution is serial",
    )
    common.add_argument(
        "--seed", type=int, default=0, help="sampling seed recorded in reports"
    )
    common.add_argument(
        "--out", help="write the report to this path instead of stdout"
    )
    common.add_argument(
        "--allow-inconclusive",
        action="store_true",
        help="exit 0 even when a search was inconclusive",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "enumerate-cp", parents=[common], help="list all cotorsion pairs"
    )
    p.set_defaults(func=_cmd_enumerate_cp)

    p = sub.add_parser(
        "enumerate-tcp", parents=[common], help="list all twin cotorsion pairs"
    )
    p.add_argument("--concentric", action="store_true")
    p.add_argument("--hovey", action="store_true")
    p.add_argument("--cond-I", action="store_true")
    p.add_argument("--cond-II", action="store_true")
    p.add_argument("--cond-III", action="store_true")
    p.set_defaults(func=_cmd_enumerate_tcp)

    p = sub.add_parser(
        "inspect-pair",
        parents=[common],
        help="check one candidate pair and show its perpendiculars",
    )
    p.add_argument("--pair", required=True, help='classes as "U=[..];V=[..]"')
    p.set_defaults(func=_cmd_inspect_pair)

    p = sub.add_parser(
        "reduce",
        parents=[common],
        help="build the subquotient of a twin pair and report its structure",
    )
    p.add_argument(
        "--tcp",
        required=True,
        help='twin pair: trivial-hovey, degenerate:U=[..];V=[..], '
        'or "S=[..];T=[..];U=[..];V=[..]"',
    )
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser(
        "mutate",
        parents=[common],
        help="mutate a cotorsion pair inside a twin pair's mutable class",
    )
    p.add_argument("--tcp", required=True)
    p.add_argument("--pair", required=True, help='classes as "U=[..];V=[..]"')
    p.add_argument("--k", type=int, required=True, help="mutation exponent")
    p.set_defaults(func=_cmd_mutate)

    p = sub.add_parser(
        "verify",
        parents=[common],
        help="run a verification suite and report per-claim verdicts",
    )
    p.add_argument("--suite", required=True, choices=_SUITES)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser(
        "orbit-graph",
        parents=[common],
        help="emit the mutation orbit graph as DOT",
    )
    p.add_argument("--tcp", required=True)
    p.set_defaults(func=_cmd_orbit_graph)

    p = sub.add_parser(
        "match-backends",
        parents=[common],
        help="search for a structure-preserving bijection between backends",
    )
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.set_defaults(func=_cmd_match_backends)
    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cap", 2) < 2:
        print("error: --cap must be at least 2", file=sys.stderr)
        return 2
    status = _Status()
    try:
        payload = args.func(args, status)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 0 if args.allow_inconclusive else 3
    except CotorError as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return 1
    if payload is not None:
        _emit_json(args, _envelope(args, payload))
    return status.code(args.allow_inconclusive)


if __name__ == "__main__":
    raise SystemExit(main())
