"""Session-file driver.

A session is a JSON document

    {"declare": {name: object, ...}, "tasks": [{"op": ..., "args": {...}, "id": ...}, ...]}

Declarations are built in order and may only refer to earlier names.
``xsq check FILE`` validates, ``xsq run FILE`` executes, ``xsq explain OP``
lists the axioms a verifier enforces.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable

import numpy as np

from . import __version__
from .commutators import higgins_commutator, huq_commutator, ternary_commutator_normal, z_tensor_invariants
from .config import DEFAULT, Config
from .double import box_double_groupoid, build_cat2_group, diagonal_xmod_report, normalize_double_groupoid
from .errors import ParseError, UnknownReference, ValidationError, XsqError, _plain
from .fpgroup import Presentation, todd_coxeter
from .groups import (
    FiniteGroup,
    abelian_from_invariants,
    abelian_invariants,
    build_group,
    find_isomorphism,
    make_hom,
    parse_standard,
    subgroup_closure,
)
from .lie import (
    LIE_XSQ_AXIOMS,
    LieAction,
    LieIdeal,
    abelian_lie,
    adjoint_action,
    build_lie_algebra,
    identity_lie_xmod,
    lie_intersection_square,
    lie_tensor,
    make_lie_pair,
    make_lie_xmod,
    nonabelian2,
    rat,
    rat_array,
    sl2,
    universal_lie_morphism,
    verify_lie_action,
    verify_lie_crossed_square,
    verify_lie_pairing,
    verify_lie_xmod,
    zero_lie_xmod,
)
from .lie.linalg import rank, to_strings
from .report import Report
from .squares import (
    WEAK_AXIOMS,
    XSQ_AXIOMS,
    find_xsq_isomorphism,
    h_image_equals_commutator,
    intersection_square,
    verify_crossed_square,
    verify_weak_crossed_square,
    weak_from_tensor,
)
from .tensor import make_pair, tensor_group, tensor_swap_isomorphism
from .xmod import (
    conjugation_action,
    find_xmod_isomorphism,
    identity_xmod,
    inclusion_xmod,
    make_action,
    make_crossed_module,
    normalize_groupoid,
    trivial_action,
    trivial_xmod,
    verify_crossed_module,
    xmod_to_reflexive_graph,
)


@dataclass
class Task:
    op: str
    args: dict
    id: str


@dataclass
class Session:
    objects: dict = field(default_factory=dict)
    kinds: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    config: Config = DEFAULT
    _groups: dict = field(default_factory=dict, repr=False)

    def group(self, name: str, path: str) -> FiniteGroup:
        """A declared group; presentations are enumerated on first use."""
        obj = self.get(name, path)
        if isinstance(obj, Presentation):
            if name not in self._groups:
                self._groups[name] = todd_coxeter(obj, self.config.max_cosets, self.config.order_bound)[0]
            return self._groups[name]
        if not isinstance(obj, FiniteGroup):
            raise ValidationError(f"{path}: {name!r} is not a group", witness={"path": path})
        return obj

    def get(self, name, path: str, kinds=None):
        if not isinstance(name, str) or name not in self.objects:
            raise UnknownReference(f"{path}: unknown reference {name!r}", witness={"path": path, "name": _plain(name)})
        if kinds is not None and self.kinds[name] not in kinds:
            raise ValidationError(f"{path}: {name!r} has kind {self.kinds[name]!r}, expected one of {sorted(kinds)}",
                                  witness={"path": path})
        return self.objects[name]


# ---------------------------------------------------------------------------
# declarations

GROUP_KINDS = {"standard", "table", "presentation", "abelian"}
XMOD_KINDS = {"xmod", "inclusion_xmod", "identity_xmod", "trivial_xmod"}
ACTION_KINDS = {"action", "conjugation", "trivial_action"}
LIE_KINDS = {"lie_algebra", "lie_standard"}
LIE_XMOD_KINDS = {"lie_xmod", "lie_identity_xmod", "lie_zero_xmod", "lie_ideal_xmod"}


def _field(obj: dict, key: str, path: str):
    if key not in obj:
        raise ParseError(f"{path}: missing field {key!r}", witness={"path": f"{path}.{key}"})
    return obj[key]


def _int_list(v, path):
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ParseError(f"{path}: expected a list of integers", witness={"path": path})
    return v


def _subgroup(s: Session, obj, path):
    G = s.group(_field(obj, "group", path), f"{path}.group")
    gens = _int_list(_field(obj, "generators", path), f"{path}.generators")
    if any(g < 0 or g >= G.order for g in gens):
        raise ValidationError(f"{path}: generator out of range", witness={"path": f"{path}.generators"})
    return subgroup_closure(G, gens)


def _lie_algebra_ref(s, name, path):
    return s.get(name, path, LIE_KINDS)


def _declare(s: Session, kind: str, obj: dict, path: str):
    f = lambda k: _field(obj, k, path)  # noqa: E731
    sub = lambda k: f"{path}.{k}"  # noqa: E731
    if kind == "standard":
        return parse_standard(f("spec"))
    if kind == "table":
        return build_group(f("table"))
    if kind == "abelian":
        return abelian_from_invariants(_int_list(f("invariants"), sub("invariants")), s.config.order_bound)
    if kind == "presentation":
        rels = f("relators")
        if not isinstance(rels, list):
            raise ParseError(f"{path}: relators must be a list", witness={"path": sub("relators")})
        return Presentation(int(f("ngens")), [_int_list(r, f"{sub('relators')}[{i}]") for i, r in enumerate(rels)])
    if kind == "subgroup":
        return _subgroup(s, obj, path)
    if kind == "hom":
        G = s.group(f("domain"), sub("domain"))
        H = s.group(f("codomain"), sub("codomain"))
        return make_hom(G, H, _int_list(f("images"), sub("images")))
    if kind == "action":
        L = s.group(f("acting"), sub("acting"))
        M = s.group(f("acted"), sub("acted"))
        return make_action(L, M, np.asarray(f("perms")))
    if kind == "conjugation":
        return conjugation_action(s.group(f("group"), sub("group")))
    if kind == "trivial_action":
        return trivial_action(s.group(f("acting"), sub("acting")), s.group(f("acted"), sub("acted")))
    if kind == "xmod":
        return make_crossed_module(s.get(f("boundary"), sub("boundary"), {"hom"}),
                                   s.get(f("action"), sub("action"), ACTION_KINDS))
    if kind == "inclusion_xmod":
        L = s.group(f("group"), sub("group"))
        S = s.get(f("subgroup"), sub("subgroup"), {"subgroup"})
        if S.parent is not L:
            raise ValidationError(f"{path}: subgroup belongs to another group", witness={"path": sub("subgroup")})
        return inclusion_xmod(L, S)
    if kind == "identity_xmod":
        return identity_xmod(s.group(f("group"), sub("group")))
    if kind == "trivial_xmod":
        return make_crossed_module(*_trivial_parts(s.group(f("group"), sub("group")), s.group(f("base"), sub("base"))))
    if kind == "pair":
        return make_pair(s.get(f("mu"), sub("mu"), XMOD_KINDS), s.get(f("nu"), sub("nu"), XMOD_KINDS))
    if kind == "lie_algebra":
        return build_lie_algebra(rat_array(f("constants")))
    if kind == "lie_standard":
        name = f("name")
        if name == "sl2":
            return sl2()
        if name in ("aff1", "nonabelian2"):
            return nonabelian2()
        if name == "abelian":
            return abelian_lie(int(f("dim")))
        raise ParseError(f"{path}: unknown Lie algebra {name!r}", witness={"path": sub("name")})
    if kind == "lie_action":
        a = LieAction(_lie_algebra_ref(s, f("acting"), sub("acting")), _lie_algebra_ref(s, f("acted"), sub("acted")),
                      rat_array(f("rho")))
        rep = verify_lie_action(a)
        if not rep.ok:
            bad = rep.failures()[0]
            raise ValidationError(f"{path}: {bad.name} fails", witness={"path": path, "witness": bad.witness})
        return a
    if kind == "lie_adjoint":
        return adjoint_action(_lie_algebra_ref(s, f("algebra"), sub("algebra")))
    if kind == "lie_xmod":
        return make_lie_xmod(rat_array(f("boundary")), s.get(f("action"), sub("action"), {"lie_action", "lie_adjoint"}))
    if kind == "lie_identity_xmod":
        return identity_lie_xmod(_lie_algebra_ref(s, f("algebra"), sub("algebra")))
    if kind == "lie_zero_xmod":
        return make_lie_xmod(*_lie_zero_parts(_lie_algebra_ref(s, f("algebra"), sub("algebra")),
                                              _lie_algebra_ref(s, f("base"), sub("base"))))
    if kind == "lie_ideal":
        return LieIdeal(_lie_algebra_ref(s, f("algebra"), sub("algebra")), rat_array(f("span")))
    if kind == "lie_ideal_xmod":
        return s.get(f("ideal"), sub("ideal"), {"lie_ideal"}).xmod()
    if kind == "lie_pair":
        return make_lie_pair(s.get(f("mu"), sub("mu"), LIE_XMOD_KINDS), s.get(f("nu"), sub("nu"), LIE_XMOD_KINDS))
    raise ParseError(f"{path}: unknown kind {kind!r}", witness={"path": f"{path}.kind"})


def _trivial_parts(X, L):
    cm = trivial_xmod(X, L)
    return cm.boundary, cm.action


def _lie_zero_parts(M, L):
    cm = zero_lie_xmod(M, L)
    return cm.boundary, cm.action


def parse_session(text: str, config: Config = DEFAULT) -> Session:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                         witness={"line": exc.lineno, "column": exc.colno}) from None
    if not isinstance(doc, dict):
        raise ParseError("session must be a JSON object", witness={"path": ""})
    unknown = set(doc) - {"declare", "tasks"}
    if unknown:
        raise ParseError(f"unknown top-level fields {sorted(unknown)}", witness={"path": sorted(unknown)[0]})
    decl = doc.get("declare", {})
    tasks = doc.get("tasks", [])
    if not isinstance(decl, dict):
        raise ParseError("declare must be an object", witness={"path": "declare"})
    if not isinstance(tasks, list):
        raise ParseError("tasks must be a list", witness={"path": "tasks"})
    s = Session(config=config)
    for name, obj in decl.items():
        path = f"declare.{name}"
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ParseError(f"{path}: declaration must be an object with a kind", witness={"path": path})
        try:
            s.objects[name] = _declare(s, obj["kind"], obj, path)
        except (ParseError, UnknownReference, ValidationError):
            raise
        except XsqError as exc:
            raise ValidationError(f"{path}: {exc}", witness={"path": path, "code": exc.code,
                                                             "witness": _plain(exc.witness)}) from exc
        except (ValueError, TypeError, KeyError, IndexError) as exc:
            raise ParseError(f"{path}: {exc}", witness={"path": path}) from exc
        s.kinds[name] = obj["kind"]
    seen = set()
    for i, t in enumerate(tasks):
        path = f"tasks[{i}]"
        if not isinstance(t, dict) or "op" not in t:
            raise ParseError(f"{path}: task must be an object with an op", witness={"path": path})
        if t["op"] not in TASKS:
            raise ParseError(f"{path}: unknown op {t['op']!r}", witness={"path": f"{path}.op"})
        args = t.get("args", {})
        if not isinstance(args, dict):
            raise ParseError(f"{path}: args must be an object", witness={"path": f"{path}.args"})
        tid = str(t.get("id", f"t{i}"))
        if tid in seen:
            raise ParseError(f"{path}: duplicate task id {tid!r}", witness={"path": f"{path}.id"})
        seen.add(tid)
        _check_refs(s, TASKS[t["op"]][1], args, path)
        s.tasks.append(Task(t["op"], args, tid))
    return s


def _check_refs(s: Session, ref_args, args, path):
    for key in ref_args:
        if key in args:
            vals = args[key] if isinstance(args[key], list) else [args[key]]
            for v in vals:
                if isinstance(v, str) and v not in s.objects:
                    raise UnknownReference(f"{path}.args.{key}: unknown reference {v!r}",
                                           witness={"path": f"{path}.args.{key}", "name": v})


# ---------------------------------------------------------------------------
# tasks: each returns (verdict, result dict)


def _report_dict(rep: Report):
    return {"ok": rep.ok, "failed": [c.to_dict() for c in rep.failures()], "checked": len(rep.checks)}


def _pair(s, a, p):
    return s.get(a["pair"], p, {"pair"})


def _sub(s, a, key, p):
    return s.get(a[key], f"{p}.{key}", {"subgroup"})


def t_group_order(s, a, p):
    G = s.group(a["group"], p)
    out = {"order": G.order, "abelian": G.abelian}
    if G.abelian:
        out["invariants"] = abelian_invariants(G)
    return True, out


def t_enumerate(s, a, p):
    pres = s.get(a["presentation"], p, {"presentation"})
    G, _ = todd_coxeter(pres, a.get("max_cosets", s.config.max_cosets), s.config.order_bound)
    return True, {"order": G.order}


def t_isomorphic(s, a, p):
    iso = find_isomorphism(s.group(a["a"], p), s.group(a["b"], p), s.config.iso_bound)
    return True, {"isomorphic": iso is not None}


def t_commutator(s, a, p):
    G = s.group(a["group"], p)
    M, N = _sub(s, a, "M", p), _sub(s, a, "N", p)
    kind = a.get("kind", "higgins")
    C = huq_commutator(G, M, N) if kind == "huq" else higgins_commutator(G, M, N)
    return True, {"kind": kind, "order": C.order, "elements": list(C.elements)}


def t_ternary(s, a, p):
    G = s.group(a["group"], p)
    C = ternary_commutator_normal(G, _sub(s, a, "K", p), _sub(s, a, "M", p), _sub(s, a, "N", p))
    return True, {"order": C.order, "elements": list(C.elements)}


def t_z_tensor(s, a, p):
    return True, {"invariants": z_tensor_invariants(s.group(a["M"], p), s.group(a["N"], p))}


def t_tensor(s, a, p):
    pair = _pair(s, a, p)
    T = tensor_group(pair, s.config.max_cosets, s.config.order_bound)
    rep = T.verify()
    out = {"order": T.order, "generators": pair.M.order * pair.N.order}
    if T.group.abelian:
        out["invariants"] = abelian_invariants(T.group)
    out["verify"] = _report_dict(rep)
    return rep.ok, out


def t_tensor_symmetry(s, a, p):
    pair = _pair(s, a, p)
    T = tensor_group(pair, s.config.max_cosets, s.config.order_bound)
    Ts = tensor_group(pair.swapped(), s.config.max_cosets, s.config.order_bound)
    f = tensor_swap_isomorphism(T, Ts)
    ok = f.is_bijective()
    return ok, {"order": T.order, "swapped_order": Ts.order, "swap_is_isomorphism": ok}


def t_verify_xmod(s, a, p):
    rep = verify_crossed_module(s.get(a["xmod"], p, XMOD_KINDS))
    return rep.ok, {"verify": _report_dict(rep)}


def t_groupoid_roundtrip(s, a, p):
    cm = s.get(a["xmod"], p, XMOD_KINDS)
    back = normalize_groupoid(xmod_to_reflexive_graph(cm))
    f = find_xmod_isomorphism(back, cm, bound=s.config.iso_bound)
    return f is not None, {"isomorphic": f is not None}


def _square(s, a, p):
    if "intersection" in a:
        G, M, N = a["intersection"]
        return intersection_square(s.group(G, p), s.get(M, p, {"subgroup"}), s.get(N, p, {"subgroup"}))
    if "tensor" in a:
        pair = s.get(a["tensor"], p, {"pair"})
        return tensor_group(pair, s.config.max_cosets, s.config.order_bound).crossed_square()
    raise ParseError(f"{p}: square needs 'intersection' or 'tensor'", witness={"path": f"{p}.args"})


def t_verify_xsq(s, a, p):
    cs = _square(s, a, p)
    if "corrupt" in a:
        m, n, v = a["corrupt"]
        h = cs.h.copy()
        h[m, n] = v
        cs = cs.with_pairing(h)
    rep = verify_crossed_square(cs)
    return rep.ok, {"P": cs.P.order, "failed_axioms": sorted(rep.failed_groups()), "verify": _report_dict(rep)}


def t_image_law(s, a, p):
    rep = h_image_equals_commutator(s.group(a["group"], p), _sub(s, a, "M", p), _sub(s, a, "N", p),
                                    s.config.max_cosets)
    return rep.ok, {"tensor_order": rep.tensor_order, "image_order": rep.image_order, "verify": _report_dict(rep)}


def t_cat2(s, a, p):
    T = tensor_group(_pair(s, a, p), s.config.max_cosets, s.config.order_bound)
    Q = build_cat2_group(T, s.config.order_bound)
    cs = normalize_double_groupoid(Q)
    iso = find_xsq_isomorphism(cs, T.crossed_square(), bound=s.config.iso_bound) is not None
    return iso, {"order": Q.A.order, "tensor_order": T.order, "associative": True,
                 "groupoids": Q.is_double_groupoid(), "normalization_isomorphic": iso}


def t_box(s, a, p):
    G = s.group(a["group"], p)
    M, N = _sub(s, a, "M", p), _sub(s, a, "N", p)
    B = box_double_groupoid(G, M, N, s.config.order_bound)
    cs = normalize_double_groupoid(B)
    iso = find_xsq_isomorphism(cs, intersection_square(G, M, N), bound=s.config.iso_bound) is not None
    xi = diagonal_xmod_report(cs).ok
    return iso and xi, {"order": B.A.order, "normalization_isomorphic": iso, "diagonal_xmod": xi}


def t_verify_weak(s, a, p):
    T = tensor_group(_pair(s, a, p), s.config.max_cosets, s.config.order_bound)
    w = weak_from_tensor(T)
    if "corrupt" in a:
        t_, v = a["corrupt"]
        img = w.h_hom.image.copy()
        img[t_] = v
        w = w.with_h(img)
    rep = verify_weak_crossed_square(w, s.config.max_cosets, s.config.generator_bound)
    return rep.ok, {"failed_axioms": sorted(rep.failed_groups()), "verify": _report_dict(rep)}


def t_lie_tensor(s, a, p):
    T = lie_tensor(s.get(a["pair"], p, {"lie_pair"}))
    rep = T.verify()
    out = {"dim": T.dim, "rho_M_rank": rank(T.rho_M) if T.rho_M.size else 0,
           "bracket": to_strings(T.algebra.c), "verify": _report_dict(rep)}
    return rep.ok, out


def t_lie_verify_xmod(s, a, p):
    rep = verify_lie_xmod(s.get(a["xmod"], p, LIE_XMOD_KINDS))
    return rep.ok, {"verify": _report_dict(rep)}


def t_lie_verify_xsq(s, a, p):
    if "intersection" in a:
        L, I, J = a["intersection"]
        sq = lie_intersection_square(_lie_algebra_ref(s, L, p), s.get(I, p, {"lie_ideal"}), s.get(J, p, {"lie_ideal"}))
    else:
        sq = lie_tensor(s.get(a["pair"], p, {"lie_pair"})).crossed_square()
    if "corrupt" in a:
        i, j, k, v = a["corrupt"]
        h = sq.h.copy()
        h[i, j, k] = rat(v)
        sq = sq.with_pairing(h)
    rep = verify_lie_crossed_square(sq)
    return rep.ok, {"failed_axioms": sorted(rep.failed_groups()), "verify": _report_dict(rep)}


def t_lie_pairing(s, a, p):
    pair = s.get(a["pair"], p, {"lie_pair"})
    P = _lie_algebra_ref(s, a["target"], p)
    h = rat_array(a["h"])
    rep = verify_lie_pairing(pair, P, h)
    out = {"verify": _report_dict(rep)}
    if rep.ok:
        out["phi"] = to_strings(universal_lie_morphism(lie_tensor(pair), P, h))
    return rep.ok, out


# op -> (function, argument names that refer to declarations)
TASKS: dict[str, tuple[Callable, tuple]] = {
    "group-order": (t_group_order, ("group",)),
    "enumerate": (t_enumerate, ("presentation",)),
    "isomorphic": (t_isomorphic, ("a", "b")),
    "commutator": (t_commutator, ("group", "M", "N")),
    "ternary-commutator": (t_ternary, ("group", "K", "M", "N")),
    "z-tensor": (t_z_tensor, ("M", "N")),
    "tensor": (t_tensor, ("pair",)),
    "tensor-symmetry": (t_tensor_symmetry, ("pair",)),
    "verify-xmod": (t_verify_xmod, ("xmod",)),
    "groupoid-roundtrip": (t_groupoid_roundtrip, ("xmod",)),
    "verify-xsq": (t_verify_xsq, ("intersection", "tensor")),
    "image-law": (t_image_law, ("group", "M", "N")),
    "cat2": (t_cat2, ("pair",)),
    "box": (t_box, ("group", "M", "N")),
    "verify-weak": (t_verify_weak, ("pair",)),
    "lie-tensor": (t_lie_tensor, ("pair",)),
    "lie-verify-xmod": (t_lie_verify_xmod, ("xmod",)),
    "lie-verify-xsq": (t_lie_verify_xsq, ("pair", "intersection")),
    "lie-pairing": (t_lie_pairing, ("pair", "target")),
}

EXPLAIN = {
    "verify-xmod": {"precrossed": "d(^l m) = l d(m) l^-1", "peiffer": "^{d m} m' = m m' m^-1"},
    "groupoid-roundtrip": {"groupoid": "[K_d, K_c] = 1", "roundtrip": "normalising the graph of a crossed module gives it back"},
    "verify-xsq": XSQ_AXIOMS,
    "verify-weak": WEAK_AXIOMS,
    "tensor": {
        "relations": "(mm')(x)n = (^m m' (x) ^m n)(m(x)n) and m(x)(nn') = (m(x)n)(^n m (x) ^n n')",
        "pi": "pi_M(m(x)n) = m ^n m^-1 and pi_N(m(x)n) = ^m n n^-1",
        "lambda": "mu pi_M = nu pi_N, and M(x)N -> L is a crossed module",
        "l_action": "^l(m(x)n) = ^l m (x) ^l n",
    },
    "image-law": {"image": "the image of M(x)N -> M meet N is [M, N]"},
    "cat2": {"order": "|A| = |M(x)N| |M| |N| |L|", "groupoids": "all four graphs are groupoids",
             "normalization": "normalisation is isomorphic to the tensor square"},
    "box": {"normalization": "normalising the box of M and N gives the intersection square"},
    "lie-verify-xsq": LIE_XSQ_AXIOMS,
    "lie-verify-xmod": {"equivariance": "d(^l m) = [l, d m]", "peiffer": "^{d m} m' = [m, m']"},
    "lie-tensor": {
        "relations": "[m,m'](x)n = m(x)^{m'}n - m'(x)^m n and m(x)[n,n'] = ^{n'}m(x)n - ^n m(x)n'",
        "bracket": "[m(x)n, m'(x)n'] = -(^n m)(x)(^{m'} n'), antisymmetric and Jacobi",
        "rho": "rho_M(m(x)n) = -^n m and rho_N(m(x)n) = ^m n",
        "l_action": "^l(m(x)n) = ^l m (x) n + m (x) ^l n",
    },
    "lie-pairing": {
        "axiom1": "h([m,m'],n) = h(m,^{m'}n) - h(m',^m n)",
        "axiom2": "h(m,[n,n']) = h(^{n'}m,n) - h(^n m,n')",
        "axiom3": "h(^n m, ^{m'} n') = -[h(m,n), h(m',n')]",
    },
}


def run(session: Session, config: Config = None) -> dict:
    """Execute every task; errors are recorded per task."""
    if config is not None and config is not session.config:
        session = replace(session, config=config, _groups={})
    results, timings = [], {}
    for t in session.tasks:
        fn = TASKS[t.op][0]
        path = f"task {t.id}"
        start = time.perf_counter()
        entry: dict[str, Any] = {"id": t.id, "op": t.op}
        try:
            ok, out = fn(session, t.args, path)
            entry["status"] = "pass" if ok else "fail"
            entry["result"] = _plain(out)
        except XsqError as exc:
            entry["status"] = "error"
            entry["error"] = exc.to_dict()
        except (KeyError, ValueError, TypeError, IndexError) as exc:
            entry["status"] = "error"
            entry["error"] = ValidationError(f"{path}: bad arguments ({exc!r})").to_dict()
        timings[t.id] = round(time.perf_counter() - start, 6)
        results.append(entry)
    return {
        "tool": "xsq",
        "version": __version__,
        "config": session.config.as_dict(),
        "ok": all(r["status"] == "pass" for r in results),
        "tasks": results,
        "timings": timings,
    }


def emit_report(report: dict, format: str = "json", timings: bool = True) -> bytes:
    rep = dict(report)
    if not timings:
        rep.pop("timings", None)
    if format == "json":
        return (json.dumps(rep, indent=2) + "\n").encode()
    lines = [f"xsq {rep.get('version', '')}: {'all tasks pass' if rep.get('ok', True) else 'FAILURES'}"]
    for r in rep.get("tasks", []):
        detail = r.get("result", r.get("error", {}))
        brief = ", ".join(f"{k}={_short(v)}" for k, v in detail.items() if k not in ("verify", "bracket", "phi"))
        lines.append(f"[{r['status']}] {r['id']} {r['op']}: {brief}")
        for c in detail.get("verify", {}).get("failed", []):
            lines.append(f"    failed {c['name']} witness={c.get('witness')}")
    if "timings" in rep:
        lines.append("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in rep["timings"].items()))
    return ("\n".join(lines) + "\n").encode()


def _short(v):
    s = json.dumps(v)
    return s if len(s) <= 60 else s[:57] + "..."


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="xsq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in ("check", "run"):
        sp = sub.add_parser(verb)
        sp.add_argument("session", help="session JSON file, or - for stdin")
        sp.add_argument("--max-cosets", type=int, default=DEFAULT.max_cosets)
        sp.add_argument("--order-bound", type=int, default=DEFAULT.order_bound)
        sp.add_argument("--no-timings", action="store_true")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
    sp = sub.add_parser("explain")
    sp.add_argument("task", help="task op, e.g. verify-xsq")
    args = ap.parse_args(argv)

    if args.verb == "explain":
        if args.task not in EXPLAIN:
            print(f"no axiom list for {args.task!r}; known: {', '.join(sorted(EXPLAIN))}", file=sys.stderr)
            return 2
        for k, v in EXPLAIN[args.task].items():
            print(f"{k}: {v}")
        return 0

    cfg = replace(DEFAULT, max_cosets=args.max_cosets, order_bound=args.order_bound)
    text = sys.stdin.read() if args.session == "-" else open(args.session, encoding="utf-8").read()
    try:
        session = parse_session(text, cfg)
    except XsqError as exc:
        rep = {"tool": "xsq", "version": __version__, "ok": False, "error": exc.to_dict()}
        _write(emit_report(rep, args.format, False), args.output)
        return 2
    if args.verb == "check":
        rep = {"tool": "xsq", "version": __version__, "ok": True,
               "declarations": len(session.objects), "tasks": [{"id": t.id, "op": t.op, "status": "valid"} for t in session.tasks]}
        _write(emit_report(rep, args.format, False), args.output)
        return 0
    report = run(session)
    _write(emit_report(report, args.format, not args.no_timings), args.output)
    return 0 if report["ok"] else 1


def _write(data: bytes, path):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


if __name__ == "__main__":
    sys.exit(main())
