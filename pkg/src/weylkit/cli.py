"""Command line interface: JSON in, canonical JSON out.

Exit status is 0 on success, 1 on bad input and 2 when a checked identity
fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from math import lcm

from . import affine as af
from . import checks
from . import gentrace as gt
from .cartan import fundamental_group, load_datum, weyl_group_order
from .fixtures import load_fixture, load_json, module_from_json, scalar_to_json
from .lattice import coinvariants, det_one_minus
from .packets import PacketDescription, packet_classes, packet_partition, verify_eq_M
from .parallel import pmap
from .twist import (
    element_from_json,
    element_to_json,
    enumerate_fiber_classes,
    finite_word,
    is_sigma_torsion,
    is_sigma_torsion_bruteforce,
    linear_order,
    load_sigma,
    parse_finite_word,
    sigma_norm,
)


class InputError(Exception):
    pass


class IdentityViolation(Exception):
    def __init__(self, payload):
        super().__init__("identity violated")
        self.payload = payload


def dumps(obj) -> str:
    """Compact JSON keeping the insertion order chosen by each command."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


# ---------------------------------------------------------------------------
# argument helpers


def _datum(args):
    if not args.datum:
        raise InputError("--datum is required")
    return load_datum(args.datum)


def _sigma(args, d):
    return load_sigma(d, args.sigma) if args.sigma else load_sigma(d, None)


def _element(d, text):
    if text is None:
        raise InputError("an element is required")
    text = text.strip()
    if text.startswith("{"):
        return element_from_json(d, json.loads(text))
    return af.parse_word(d, text)


# ---------------------------------------------------------------------------
# commands


def cmd_roots(args):
    d = _datum(args)
    return {
        "datum": d.to_json(),
        "cartan_matrix": [list(r) for r in d.cartan_matrix],
        "simple_roots": [list(a) for a in d.simple_roots],
        "simple_coroots": [list(a) for a in d.simple_coroots],
        "positive_roots": [list(a) for a in d.positive_roots],
        "highest_root": list(d.highest_root),
        "highest_coroot": list(d.highest_coroot),
        "weyl_order": weyl_group_order(d.cartan_type, d.rank),
        "fundamental_group": str(fundamental_group(d)),
        "omega": [af.element_word(o) if not o.is_identity() else "1" for o in af.omega_group(d)] if not d.central_rank else None,
    }


def cmd_length(args):
    d = _datum(args)
    x = _element(d, args.w)
    word, om = af.reduced_word(x)
    inv = af.inversion_count(x)
    out = {"element": af.element_word(x), "len": x.length(), "reduced_word": af.format_word(word, om), "inversions": inv}
    out.update(element_to_json(x))
    if not (out["len"] == len(word) == inv):
        raise IdentityViolation(out)
    return out


def cmd_demazure(args):
    d = _datum(args)
    u = _element(d, args.u)
    v = _element(d, args.v)
    z = af.demazure(u, v)
    return {"result": af.element_word(z), "len": z.length()}


def cmd_regular(args):
    d = _datum(args)
    x = _element(d, args.w)
    counts = [{"root": list(a), "count": af.pairing_count(a, x)} for a in d.positive_roots]
    reg = min(af.pairing_count(a, x) for a in d.roots)
    out = {"element": af.element_word(x), "pairing_counts": counts, "regularity": reg}
    if args.m is not None:
        out["m"] = args.m
        out["m_regular"] = af.is_m_regular(x, args.m)
        if out["m_regular"] != (reg >= args.m):
            raise IdentityViolation(out)
    return out


def cmd_torsion(args):
    d = _datum(args)
    sigma = _sigma(args, d)
    x = _element(d, args.w)
    t = is_sigma_torsion(x, sigma)
    out = {"element": af.element_word(x), "torsion": t}
    if t:
        bound = lcm(linear_order(x.w, sigma), sigma.order)
        k = next(k for k in range(1, bound + 1) if sigma_norm(x, k, sigma).is_identity())
        out["norm_order"] = k
    if t != is_sigma_torsion_bruteforce(x, sigma):
        raise IdentityViolation(out)
    return out


def cmd_classify(args):
    d = _datum(args)
    sigma = _sigma(args, d)
    wbar = parse_finite_word(d, args.wbar or "")
    acting = args.acting
    classes = enumerate_fiber_classes(wbar, sigma, acting)
    return {
        "fiber": finite_word(d, wbar),
        "classes": [element_to_json(c.base) for c in classes],
        "count": len(classes),
    }


def cmd_coinvariants(args):
    if args.matrix is None:
        raise InputError("--matrix is required")
    try:
        u = json.loads(args.matrix)
    except json.JSONDecodeError as e:
        raise InputError(f"bad --matrix: {e}") from None
    if not isinstance(u, list) or not u or any(not isinstance(r, list) or len(r) != len(u) for r in u):
        raise InputError("--matrix must be a square integer matrix")
    if any(not isinstance(x, int) or isinstance(x, bool) for r in u for x in r):
        raise InputError("--matrix must be a square integer matrix")
    A = coinvariants(u)
    out = {"invariant_factors": list(A.invariant_factors), "det1mu": det_one_minus(u)}
    if A.free_rank:
        out["free_rank"] = A.free_rank
    return out


def _trace_report(G, M):
    rep = gt.verify_trace_formula(M, G)
    out = {
        "lhs": scalar_to_json(rep.lhs),
        "rhs": scalar_to_json(rep.rhs),
        "terms": [{"lambda": list(lam), "value": scalar_to_json(v)} for lam, v in rep.terms],
        "homology": [{"degree": j, "dim": h.dim, "trace": scalar_to_json(h.trace())} for j, h in enumerate(gt.homology(G, M))],
        "equal": rep.equal,
    }
    return out, rep.equal


def cmd_trace_formula(args):
    if not args.fixture:
        raise InputError("--fixture is required")
    G, M = load_fixture(args.fixture)
    if not G.elliptic:
        raise InputError("u is not elliptic")
    out, ok = _trace_report(G, M)
    if not ok:
        raise IdentityViolation(out)
    return out


def cmd_packet(args):
    d = _datum(args)
    sigma = _sigma(args, d)
    wbar = parse_finite_word(d, args.wbar or "")
    p = PacketDescription(d, sigma, wbar)
    rep = packet_classes(p)
    index = {c: i for i, c in enumerate(rep.classes)}
    blocks = packet_partition(p)
    out = {
        "fiber": finite_word(d, wbar),
        "classes": [element_to_json(c.base) for c in rep.classes],
        "count": rep.count,
        "det": rep.det,
        "partition": [[index[c] for c in b] for b in blocks],
    }
    if args.fixture:
        obj = load_json(args.fixture)
        M = module_from_json(obj["module"] if "module" in obj else obj)
        G = p.delta_group()
        if "group" in obj and [list(r) for r in obj["group"]["u"]] != G.umat:
            raise InputError("fixture group does not match the linearization of wbar sigma")
        eq = verify_eq_M(p, M)
        out["eq_M"] = {
            "lhs": scalar_to_json(eq.lhs),
            "rhs": scalar_to_json(eq.rhs),
            "terms": [{"lambda": list(lam), "value": scalar_to_json(v)} for lam, v in eq.terms],
            "equal": eq.equal,
        }
        if not eq.equal:
            raise IdentityViolation(out)
    return out


def cmd_selftest(args):
    suite = checks.selftest_suite(args.seed, args.bound or 1)
    results = pmap(lambda f: f(), suite)
    out = {"seed": args.seed, "checks": [r.to_json() for r in results], "ok": all(r.ok for r in results)}
    if not out["ok"]:
        raise IdentityViolation(out)
    return out


COMMANDS = {
    "roots": cmd_roots,
    "length": cmd_length,
    "demazure": cmd_demazure,
    "regular": cmd_regular,
    "torsion": cmd_torsion,
    "classify-embeddings": cmd_classify,
    "coinvariants": cmd_coinvariants,
    "trace-formula": cmd_trace_formula,
    "packet": cmd_packet,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylkit", description="Affine Weyl group and generalized trace toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *flags):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", default=True, help="JSON output (the default)")
        for f in flags:
            f(p)
        return p

    datum = lambda p: p.add_argument("--datum", help="root datum JSON file")
    sigma = lambda p: p.add_argument("--sigma", help="Frobenius twist JSON file")
    fixture = lambda p: p.add_argument("--fixture", help="module fixture JSON file")
    seed = lambda p: p.add_argument("--seed", type=int, default=0)
    bound = lambda p: p.add_argument("--bound", type=int, default=None)
    w = lambda p: p.add_argument("--w", help="element, e.g. 's0*s1*o1' or '{\"t\":[...],\"w\":\"s1\"}'")
    wbar = lambda p: p.add_argument("--wbar", help="finite Weyl group word, e.g. 's1*s2' or 'cox'")

    add("roots", "root data summary", datum)
    add("length", "length, reduced word and inversion count", datum, w)
    add("demazure", "Demazure product", datum, lambda p: p.add_argument("--u"), lambda p: p.add_argument("--v"))
    add("regular", "pairing counts and m-regularity", datum, w, lambda p: p.add_argument("--m", type=int))
    add("torsion", "sigma-torsion test", datum, sigma, w)
    add("classify-embeddings", "conjugacy classes in the fiber over wbar sigma", datum, sigma, wbar,
        lambda p: p.add_argument("--acting", choices=["lambda", "lambda_G"], default="lambda"))
    add("coinvariants", "coinvariants of a lattice automorphism", lambda p: p.add_argument("--matrix"))
    add("trace-formula", "verify the trace formula for a module fixture", fixture, seed)
    add("packet", "packet classes, partition and optional trace identity", datum, sigma, wbar, fixture)
    add("selftest", "run the invariant suite", seed, bound)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    try:
        payload = COMMANDS[args.command](args)
    except IdentityViolation as e:
        out.write(dumps(e.payload) + "\n")
        return 2
    except (InputError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        sys.stderr.write(f"error: {msg}\n")
        return 1
    out.write(dumps(payload) + "\n")
    return 0


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
