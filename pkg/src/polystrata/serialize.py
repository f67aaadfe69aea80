"""JSON codecs: exact "p/q" strings for every rational quantity.

Counts, ranks and labels are plain JSON integers; anything carrying a
coordinate, height or matrix entry is an exact decimal-free string such as
"3" or "-2/5".  Parsing is lenient (JSON integers are accepted wherever a
rational is expected); emission is strict and canonical so payloads are
byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError


def frac_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, bool):
        raise InputError(f"expected a rational, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational {s!r}") from exc
    raise InputError(f"expected a rational, got {type(s).__name__}")


def vec_str(v) -> list[str]:
    return [frac_str(x) for x in v]


def parse_vec(v) -> tuple[Fraction, ...]:
    return tuple(parse_frac(x) for x in v)


def mat_str(m) -> list[list[str]]:
    return [vec_str(r) for r in m]


def parse_mat(m) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(parse_vec(r) for r in m)


def int_vec(v) -> list[int]:
    out = []
    for x in v:
        f = parse_frac(x)
        if f.denominator != 1:
            raise InputError(f"expected an integer, got {x!r}")
        out.append(int(f))
    return out


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


# -- object codecs ----------------------------------------------------------


def encode_config(config) -> dict:
    return {"points": mat_str(config.points)}


def decode_config(obj):
    from .polytopes import PointConfiguration

    if "points" not in obj:
        raise InputError("configuration JSON needs a 'points' field")
    return PointConfiguration(parse_mat(obj["points"]))


def decode_heights(obj, n: int):
    if isinstance(obj, list):
        return [parse_frac(x) for x in obj]
    if isinstance(obj, dict):
        return {int(k): parse_frac(v) for k, v in obj.items()}
    raise InputError("heights must be a list or a label->value map")


def encode_heights(values) -> dict:
    return {str(i): frac_str(v) for i, v in enumerate(values)}


def encode_subdivision(sub) -> dict:
    return {"cells": [list(c) for c in sub.cells]}


def decode_subdivision(obj, config):
    from .subdivisions import MarkedSubdivision

    if "cells" not in obj:
        raise InputError("subdivision JSON needs a 'cells' field")
    return MarkedSubdivision(config, [tuple(c) for c in obj["cells"]])


def encode_polytope(p) -> dict:
    return {"vertices": [list(v) for v in p.vertices]}


def decode_polytope(obj):
    from .polytopes import LatticePolytope

    if "vertices" not in obj:
        raise InputError("polytope JSON needs a 'vertices' field")
    return LatticePolytope([int_vec(v) for v in obj["vertices"]])


def encode_form(q) -> dict:
    return {"g": q.g, "matrix": mat_str(q.matrix)}


def decode_form(obj):
    from .periodic import QuadraticForm

    if "matrix" not in obj:
        raise InputError("form JSON needs a 'matrix' field")
    return QuadraticForm(parse_mat(obj["matrix"]))


def decode_residues(obj):
    from .periodic import ResidueFunction

    basis = [int_vec(r) for r in obj["period_basis"]]
    values = {}
    for key, val in obj["values"].items():
        res = tuple(int(x) for x in key.split(","))
        values[res] = parse_frac(val)
    return ResidueFunction(basis, values)


def encode_graph(g) -> dict:
    return {"vertices": g.num_vertices, "edges": [list(e) for e in g.edges]}


def decode_graph(obj):
    from .periodic import Graph

    return Graph(int(obj["vertices"]), tuple((int(u), int(v)) for u, v in obj["edges"]))


def encode_vector_system(vs) -> dict:
    return {"r": vs.r, "vectors": [list(v) for v in vs.vectors]}


def decode_vector_system(obj):
    from .matroids import VectorSystem

    return VectorSystem(int(obj["r"]), tuple(tuple(int_vec(v)) for v in obj["vectors"]))


def encode_rank_function(rf) -> dict:
    return {
        "n": rf.n,
        "r": rf.r,
        "block_dims": list(rf.block_dims),
        "d": {str(mask): rf.d[mask] for mask in range(1 << rf.n) if rf.d[mask]},
    }


def decode_rank_function(obj):
    from .matroids import RankFunction

    d = {int(k): int(v) for k, v in obj.get("d", {}).items()}
    return RankFunction(int(obj["n"]), int(obj["r"]), [int(x) for x in obj["block_dims"]], d)


def decode_complex(obj):
    from .complexes import validate_complex

    cells = sorted(obj["cells"], key=lambda c: int(c["id"]))
    ids = [int(c["id"]) for c in cells]
    if ids != list(range(len(ids))):
        raise InputError("cell ids must be 0..k-1")
    return validate_complex([[int_vec(v) for v in c["vertices"]] for c in cells])


def decode_markings(obj):
    return {int(k): [tuple(int_vec(p)) for p in pts] for k, pts in obj.items()}


def encode_periodic_subdivision(d) -> dict:
    return {
        "g": d.g,
        "period_basis": [list(r) for r in d.period_basis],
        "cells": [
            {"vertices": mat_str(c.vertices), "marking": [list(m) for m in c.marking]}
            for c in d.cells
        ],
    }
