"""JSON encodings of exact scalars, matrices and module fixtures.

A scalar is an int, a ``"p/q"`` string or ``{"cyc": N, "coeffs": [...]}``
(coefficients in the power basis of Q(zeta_N), themselves ints or strings).
A module fixture is ``{"group": {"u": ...}, "module": {...}}`` where the
module carries a ``type`` tag: ``finite``, ``free``, ``induced``, ``sum`` or
``twist``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .cyclotomic import Cyc, as_cyc
from .gentrace import DeltaGroup, DirectSum, FiniteDim, Free, Induced, Twist


def _frac_from_json(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValueError(f"bad rational {x!r}")


def _frac_to_json(q: Fraction):
    q = Fraction(q)
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_from_json(x) -> Cyc:
    if isinstance(x, dict):
        if set(x) != {"cyc", "coeffs"}:
            raise ValueError(f"bad cyclotomic scalar {x!r}")
        n = int(x["cyc"])
        if n < 1:
            raise ValueError("cyclotomic order must be positive")
        return Cyc(n, [_frac_from_json(c) for c in x["coeffs"]])
    return as_cyc(_frac_from_json(x))


def scalar_to_json(c) -> object:
    s = as_cyc(c).simplify()
    if s.n == 1:
        return _frac_to_json(s.c[0])
    coeffs = list(s.c)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return {"cyc": s.n, "coeffs": [_frac_to_json(a) for a in coeffs]}


def matrix_from_json(M):
    if not isinstance(M, list) or any(not isinstance(r, list) for r in M):
        raise ValueError("matrix must be a list of rows")
    n = len(M[0]) if M else 0
    if any(len(r) != n for r in M):
        raise ValueError("ragged matrix")
    return [[scalar_from_json(x) for x in r] for r in M]


def matrix_to_json(M):
    return [[scalar_to_json(x) for x in r] for r in M]


def int_matrix_from_json(M):
    if not isinstance(M, list) or any(not isinstance(r, list) for r in M):
        raise ValueError("matrix must be a list of rows")
    if any(not isinstance(x, int) or isinstance(x, bool) for r in M for x in r):
        raise ValueError("integer matrix expected")
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("square integer matrix expected")
    return [list(r) for r in M]


def module_from_json(obj):
    t = obj.get("type")
    if t == "finite":
        return FiniteDim([matrix_from_json(m) for m in obj["rho"]], matrix_from_json(obj["U"]))
    if t == "free":
        return Free(matrix_from_json(obj["V"]))
    if t == "induced":
        return Induced([list(map(int, v)) for v in obj["basis"]], module_from_json(obj["inner"]))
    if t == "sum":
        return DirectSum([module_from_json(p) for p in obj["parts"]])
    if t == "twist":
        return Twist(module_from_json(obj["inner"]), scalar_from_json(obj["chi"]))
    raise ValueError(f"unknown module type {t!r}")


def module_to_json(M) -> dict:
    if isinstance(M, FiniteDim):
        return {"type": "finite", "rho": [matrix_to_json(m) for m in M.rho], "U": matrix_to_json(M.U)}
    if isinstance(M, Free):
        return {"type": "free", "V": matrix_to_json(M.V)}
    if isinstance(M, Induced):
        return {"type": "induced", "basis": [list(v) for v in M.basis], "inner": module_to_json(M.inner)}
    if isinstance(M, DirectSum):
        return {"type": "sum", "parts": [module_to_json(p) for p in M.parts]}
    if isinstance(M, Twist):
        return {"type": "twist", "inner": module_to_json(M.inner), "chi": scalar_to_json(M.chi)}
    raise TypeError(f"not a module: {M!r}")


def load_json(src):
    """Accept a dict, JSON text or a path."""
    if isinstance(src, dict):
        return src
    if isinstance(src, Path) or (isinstance(src, str) and not src.lstrip().startswith("{")):
        return json.loads(Path(src).read_text())
    return json.loads(src)


def load_fixture(src):
    """(DeltaGroup, module) from a fixture."""
    obj = load_json(src)
    if "group" not in obj or "module" not in obj:
        raise ValueError("fixture needs 'group' and 'module'")
    G = DeltaGroup(int_matrix_from_json(obj["group"]["u"]))
    M = module_from_json(obj["module"])
    M.validate(G)
    return G, M


def fixture_to_json(G: DeltaGroup, M) -> dict:
    return {"group": {"u": G.umat}, "module": module_to_json(M)}


def canonical_dumps(obj) -> str:
    """Byte-stable JSON text."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
