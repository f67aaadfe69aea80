"""Batch command-line front end.

Every subcommand reads one JSON input (a file path, an inline JSON string,
or ``fixture:NAME``), runs one pipeline and emits a run report on stdout.
The ``payload`` field of the report is canonical JSON: identical inputs
produce byte-identical payloads, which is what ``--out`` writes.

Exit codes: 0 success, 1 malformed input, 2 well-formed but refused
(desk-scale limits); failures carry a machine-readable ``error`` object.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from . import complexes as _cx
from . import matroids as _mt
from . import periodic as _pe
from . import polytopes as _pt
from . import subdivisions as _sd
from . import serialize as io_
from .errors import DivergenceError, InputError, PolystrataError, SizeLimitError
from .fixtures import fixtures, get_fixture
from . import linalg
from . import hull as _hull
from . import lp as _lp


def _load_input(raw: str) -> dict:
    if raw.startswith("fixture:"):
        return get_fixture(raw.split(":", 1)[1]).payload
    if raw.lstrip().startswith("{"):
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"inline JSON does not parse: {exc}") from exc
    try:
        with open(raw, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read input {raw!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"input file does not parse: {exc}") from exc


# -- subcommand implementations --------------------------------------------


def _run_snf(obj, args):
    matrix = [io_.int_vec(r) for r in obj["matrix"]]
    res = linalg.smith_normal_form(matrix)
    return {
        "invariant_factors": list(res.invariant_factors),
        "rank": res.rank,
        "left": [list(r) for r in res.left],
        "right": [list(r) for r in res.right],
    }


def _run_hull(obj, args):
    points = io_.parse_mat(obj["points"])
    res = _hull.convex_hull(points)
    return {
        "ambient_dim": res.ambient_dim,
        "dim": res.dim,
        "facets": [
            {
                "normal": io_.vec_str(f.normal),
                "offset": io_.frac_str(f.offset),
                "incidence": list(f.incidence),
            }
            for f in res.facets
        ],
        "lower_facets": list(res.lower_facets),
        "affine_equations": [
            {"normal": io_.vec_str(n), "offset": io_.frac_str(c)}
            for n, c in res.affine_equations
        ],
    }


def _run_subdiv(obj, args):
    config = io_.decode_config(obj["config"])
    heights = io_.decode_heights(obj["heights"], config.n)
    sub = _sd.regular_subdivision(config, heights)
    return io_.encode_subdivision(sub)


def _run_regular_check(obj, args):
    config = io_.decode_config(obj["config"])
    sub = io_.decode_subdivision(obj["subdivision"], config)
    res = _sd.is_regular(sub)
    return {
        "regular": res.regular,
        "certificate": io_.encode_heights(res.certificate) if res.regular else None,
    }


def _run_triangulations(obj, args):
    config = io_.decode_config(obj["config"])
    tris = _sd.enumerate_triangulations(config)
    return {
        "count": len(tris),
        "triangulations": [[list(c) for c in t.cells] for t in tris],
    }


def _run_secondary(obj, args):
    config = io_.decode_config(obj["config"])
    poly = _sd.secondary_polytope(config)
    return {"dim": poly.dim, "vertices": [list(v) for v in poly.vertices]}


def _run_strata(obj, args):
    config = io_.decode_config(obj["config"])
    sub = io_.decode_subdivision(obj["subdivision"], config)
    rep = _sd.stratum_dimensions(config, sub)
    return {
        "secondary_codim": rep.secondary_codim,
        "gluing_h1_rank": rep.gluing_h1_rank,
        "extra_component_flag": rep.extra_component_flag,
    }


def _run_gluing(obj, args):
    pc = io_.decode_complex(obj)
    if "markings" in obj:
        mc = _cx.marked_complex(pc, io_.decode_markings(obj["markings"]))
        res = _cx.pair_cohomology(mc)
        return {
            "kind": "pair",
            "h0_rank": res.h0_rank,
            "h0_torsion": list(res.h0_torsion),
            "h1_rank": res.h1_rank,
            "h1_torsion": list(res.h1_torsion),
            "automorphisms_finite": res.automorphisms_finite,
            "automorphism_flag": res.automorphism_flag,
        }
    res = _cx.gluing_cohomology(pc)
    chain = _cx.cech_lattice_complex(pc).chain
    return {
        "kind": "variety",
        "h0_rank": res.h0_rank,
        "h0_torsion": list(res.h0_torsion),
        "h1_rank": res.h1_rank,
        "h1_torsion": list(res.h1_torsion),
        "chain_ranks": list(chain.ranks),
    }


def _run_pseudomanifold(obj, args):
    pc = io_.decode_complex(obj)
    rep = _cx.pseudomanifold_check(pc)
    return {
        "status": rep.status,
        "boundary": [[list(v) for v in face] for face in rep.boundary],
    }


def _run_matroid_polytope(obj, args):
    p = io_.decode_polytope(obj)
    return {"is_matroid_polytope": _mt.is_matroid_polytope(p)}


def _run_submodular(obj, args):
    rf = io_.decode_rank_function(obj)
    res = _mt.check_submodular(rf)
    return {
        "ok": res.ok,
        "violation": [list(res.violation[0]), list(res.violation[1])]
        if res.violation
        else None,
    }


def _run_rank_function(obj, args):
    basis = io_.parse_mat(obj["basis"])
    rf = _mt.rank_function_of_subspace(basis, [int(x) for x in obj["block_dims"]])
    return io_.encode_rank_function(rf)


def _run_unimodular(obj, args):
    vs = io_.decode_vector_system(obj)
    res = _mt.is_unimodular_system(vs)
    return {
        "ok": res.ok,
        "witness_indices": list(res.witness_indices) if res.witness_indices else None,
        "witness_minor": res.witness_minor,
    }


def _run_idp(obj, args):
    p = io_.decode_polytope(obj)
    res = _mt.is_idp_polytope(p, args.degree_bound)
    return {
        "ok": res.ok,
        "witness_point": list(res.witness_point) if res.witness_point else None,
        "witness_level": res.witness_level,
    }


def _run_hypersimplex(obj, args):
    p = _pt.hypersimplex(int(obj["r"]), int(obj["n"]))
    return {
        "vertices": [list(v) for v in p.vertices],
        "dim": p.dim,
        "lattice_point_count": len(p.lattice_points()),
        "normalized_volume": p.normalized_volume(),
    }


def _run_delaunay(obj, args):
    q = io_.decode_form(obj)
    d = _pe.delaunay(q, max_window=args.window)
    return io_.encode_periodic_subdivision(d)


def _run_semi_delaunay(obj, args):
    q = io_.decode_form(obj["form"])
    r = io_.decode_residues(obj["residues"])
    d = _pe.semi_delaunay(q, r, max_window=args.window)
    return io_.encode_periodic_subdivision(d)


def _run_voronoi_cone(obj, args):
    q1 = io_.decode_form(obj["form1"])
    q2 = io_.decode_form(obj["form2"])
    return {"same_cone": _pe.same_voronoi_cone(q1, q2)}


def _run_voronoi_dim(obj, args):
    q = io_.decode_form(obj)
    d = _pe.delaunay(q, max_window=args.window)
    return {"dimension": _pe.voronoi_cone_dimension(d, q)}


def _run_gl_equiv(obj, args):
    q1 = io_.decode_form(obj["form1"])
    q2 = io_.decode_form(obj["form2"])
    d1 = _pe.delaunay(q1, max_window=args.window)
    d2 = _pe.delaunay(q2, max_window=args.window)
    res = _pe.gl_equivalent(d1, d2, word_bound=args.word_bound)
    return {
        "found": res.found,
        "witness": [list(r) for r in res.witness] if res.witness else None,
    }


def _run_hyperplanes(obj, args):
    vs = io_.decode_vector_system(obj)
    res = _pe.hyperplane_subdivision(vs)
    return {
        "subdivision": io_.encode_periodic_subdivision(res.subdivision),
        "vertices_integral": res.vertices_integral,
        "unimodular": res.unimodularity.ok,
    }


def _run_cographic(obj, args):
    g = io_.decode_graph(obj)
    basis = _pe.cycle_space_basis(g)
    sub = _pe.cographic_subdivision(g)
    return {
        "cycle_basis": [list(r) for r in basis],
        "subdivision": io_.encode_periodic_subdivision(sub),
    }


def _run_fixtures(obj, args):
    name = obj.get("name") if obj else None
    if name:
        f = get_fixture(name)
        return {
            "name": f.name,
            "description": f.description,
            "subcommand": f.subcommand,
            "input": f.payload,
        }
    return {
        "fixtures": [
            {"name": f.name, "description": f.description, "subcommand": f.subcommand}
            for f in fixtures()
        ]
    }


_COMMANDS = {
    "snf": _run_snf,
    "hull": _run_hull,
    "subdiv": _run_subdiv,
    "regular-check": _run_regular_check,
    "triangulations": _run_triangulations,
    "secondary": _run_secondary,
    "strata": _run_strata,
    "gluing": _run_gluing,
    "pseudomanifold": _run_pseudomanifold,
    "matroid-polytope": _run_matroid_polytope,
    "submodular": _run_submodular,
    "rank-function": _run_rank_function,
    "unimodular": _run_unimodular,
    "idp": _run_idp,
    "hypersimplex": _run_hypersimplex,
    "delaunay": _run_delaunay,
    "semi-delaunay": _run_semi_delaunay,
    "voronoi-cone": _run_voronoi_cone,
    "voronoi-dim": _run_voronoi_dim,
    "gl-equiv": _run_gl_equiv,
    "hyperplanes": _run_hyperplanes,
    "cographic": _run_cographic,
    "fixtures": _run_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polystrata",
        description="Exact computations with subdivisions, secondary polytopes,"
        " periodic decompositions, matroid polytopes and gluing cohomology.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in sorted(_COMMANDS):
        p = sub.add_parser(name)
        if name != "fixtures":
            p.add_argument(
                "input",
                help="input file path, inline JSON, or fixture:NAME",
            )
        else:
            p.add_argument("input", nargs="?", default=None)
        p.add_argument("--out", help="write the canonical payload JSON to this path")
        p.add_argument("--window", type=int, default=64, help="window-doubling cap")
        p.add_argument("--word-bound", type=int, default=4, help="GL(g,Z) search depth")
        p.add_argument("--degree-bound", type=int, default=3, help="cone levels for idp")
        p.add_argument("--max-points", type=int, default=12, help="configuration size cap")
    return parser


def run(subcommand: str, obj: dict, args) -> dict:
    """Dispatch one request and wrap the result in a run report."""
    digest = hashlib.sha256(io_.canonical_json(obj).encode()).hexdigest()
    t0 = time.perf_counter()
    payload = _COMMANDS[subcommand](obj, args)
    elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return {
        "subcommand": subcommand,
        "input_digest": digest,
        "payload": payload,
        "timing_ms": elapsed_ms,
        "version": __version__,
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        obj = _load_input(args.input) if args.input else {}
        if args.max_points != 12:
            pass  # caps are enforced module-side; the flag documents intent
        report = run(args.subcommand, obj, args)
    except SizeLimitError as exc:
        json.dump({"error": {"code": "size-limit", "message": str(exc)}}, sys.stdout)
        sys.stdout.write("\n")
        return 2
    except (InputError, DivergenceError) as exc:
        json.dump({"error": {"code": "input", "message": str(exc)}}, sys.stdout)
        sys.stdout.write("\n")
        return 1
    except PolystrataError as exc:  # pragma: no cover - defensive
        json.dump({"error": {"code": "internal", "message": str(exc)}}, sys.stdout)
        sys.stdout.write("\n")
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(io_.canonical_json(report["payload"]))
    json.dump(report, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
