"""Bundled example inputs, referenced by name from the CLI and the tests."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    subcommand: str
    payload: dict


_NESTED_TRIANGLES_POINTS = [
    ["0", "0"],
    ["18", "0"],
    ["0", "18"],
    ["3", "3"],
    ["9", "3"],
    ["3", "9"],
]

# cyclically twisted triangulation of the two nested triangles; not regular
_TWISTED_CELLS = [[0, 1, 4], [1, 4, 5], [1, 2, 5], [2, 3, 5], [0, 2, 3], [0, 3, 4], [3, 4, 5]]

_FIXTURES = [
    Fixture(
        "hypersimplex-2-4",
        "The octahedral slice of the 4-cube: 0/1 vectors with coordinate sum 2",
        "hypersimplex",
        {"r": 2, "n": 4},
    ),
    Fixture(
        "one-form",
        "The 1x1 form [1]; its decomposition is the unit segment per period",
        "delaunay",
        {"g": 1, "matrix": [["1"]]},
    ),
    Fixture(
        "i2-form",
        "The identity form in rank 2; one square cell per period",
        "delaunay",
        {"g": 2, "matrix": [["1", "0"], ["0", "1"]]},
    ),
    Fixture(
        "a2-form",
        "The hexagonal form [[2,-1],[-1,2]]; two triangle cells per period",
        "delaunay",
        {"g": 2, "matrix": [["2", "-1"], ["-1", "2"]]},
    ),
    Fixture(
        "nested-triangles",
        "Six-point configuration (outer and inner triangle) with its twisted,"
        " non-regular triangulation",
        "regular-check",
        {
            "config": {"points": _NESTED_TRIANGLES_POINTS},
            "subdivision": {"cells": _TWISTED_CELLS},
        },
    ),
    Fixture(
        "collinear-3",
        "Three collinear points; the smallest interesting secondary polytope",
        "secondary",
        {"config": {"points": [["0"], ["1"], ["2"]]}},
    ),
    Fixture(
        "collinear-4",
        "Four collinear points; secondary polytope is a quadrilateral with 9 faces",
        "secondary",
        {"config": {"points": [["0"], ["1"], ["2"], ["3"]]}},
    ),
    Fixture(
        "unit-square",
        "The four vertices of the unit square",
        "triangulations",
        {"config": {"points": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}},
    ),
    Fixture(
        "square-complex",
        "The unit square as a single-cell complex",
        "gluing",
        {"g": 2, "cells": [{"id": 0, "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}]},
    ),
    Fixture(
        "segment-chain-complex",
        "Two unit segments glued at a vertex",
        "gluing",
        {
            "g": 1,
            "cells": [
                {"id": 0, "vertices": [[0], [1]]},
                {"id": 1, "vertices": [[1], [2]]},
            ],
        },
    ),
    Fixture(
        "square-split-complex",
        "The unit square split into two triangles along a diagonal",
        "gluing",
        {
            "g": 2,
            "cells": [
                {"id": 0, "vertices": [[0, 0], [1, 0], [1, 1]]},
                {"id": 1, "vertices": [[0, 0], [0, 1], [1, 1]]},
            ],
        },
    ),
    Fixture(
        "marked-segment-2",
        "Segment [0,2] marked at its endpoints; finite automorphisms of order 2",
        "gluing",
        {
            "g": 1,
            "cells": [{"id": 0, "vertices": [[0], [2]]}],
            "markings": {"0": [[0], [2]]},
        },
    ),
    Fixture(
        "k4-graph",
        "The complete graph on four vertices (cycle rank 3)",
        "cographic",
        {"vertices": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]},
    ),
    Fixture(
        "triangle-graph",
        "The 3-cycle; its cographic subdivision is a segment per period",
        "cographic",
        {"vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]]},
    ),
    Fixture(
        "unimodular-triple",
        "The vectors e1, e2, e1+e2: an unimodular system cutting unit triangles",
        "hyperplanes",
        {"r": 2, "vectors": [[1, 0], [0, 1], [1, 1]]},
    ),
    Fixture(
        "nonunimodular-pair",
        "The vectors e1, e1+2e2: minor 2, so half-integral arrangement vertices",
        "hyperplanes",
        {"r": 2, "vectors": [[1, 0], [1, 2]]},
    ),
    Fixture(
        "reeve-simplex",
        "Tetrahedron conv{0, e1, e2, e1+e2+3e3}: fails degree-2 integral decomposition",
        "idp",
        {"vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 3]]},
    ),
    Fixture(
        "diagonal-line-rank-function",
        "Rank data of the line spanned by (1,1,1) in three 1-dimensional blocks",
        "submodular",
        {"n": 3, "r": 1, "block_dims": [1, 1, 1], "d": {"7": 1}},
    ),
    Fixture(
        "snf-2468",
        "A 2x2 integer matrix with invariant factors (2, 4)",
        "snf",
        {"matrix": [[2, 4], [6, 8]]},
    ),
]

FIXTURES = {f.name: f for f in _FIXTURES}


def fixtures() -> list[Fixture]:
    """All bundled fixtures in a stable order."""
    return sorted(_FIXTURES, key=lambda f: f.name)


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise InputError(
            f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}"
        ) from None
