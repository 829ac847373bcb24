"""Built-in models: coordinate charts and pointwise tensors with expected labels."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .acstruct import ChartStructure, Lemma1Structure
from .clinalg import RealSubspace, c2r
from .nijenhuis import PointTensor, strong_normal_form

# ---------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------

CHARTS = {
    "flat2": {"coords": ["z1", "z2"], "J": {"z1": {"dz1": "i"}, "z2": {"dz2": "i"}}},
    "flat3": {"coords": ["z1", "z2", "z3"], "J": {f"z{k}": {f"dz{k}": "i"} for k in (1, 2, 3)}},
    "flat4": {"coords": ["z1", "z2", "z3", "z4"], "J": {f"z{k}": {f"dz{k}": "i"} for k in (1, 2, 3, 4)}},
    "submax": {"coords": ["z", "w"], "J": {"z": {"dz": "i", "dw_": "w"}, "w": {"dw": "i"}}},
    "torus": {"coords": ["z", "w"], "J": {"z": {"dz": "i", "dw_": "exp(pi*i*(w + w_))"}, "w": {"dw": "i"}}},
    "lemma1": {
        "coords": ["z", "w"],
        "J": {"z": {"dz": "(5/4)*i", "dz_": "3/4", "dw": "(i/3)*w_", "dw_": "w"}, "w": {"dw": "i"}},
    },
    "onfor": {
        "coords": ["z", "w", "zeta"],
        "J": {"z": {"dz": "i", "dw_": "w"}, "w": {"dw": "i"}, "zeta": {"dzeta": "i"}},
    },
    "nofor": {
        "coords": ["z", "zeta", "w"],
        "J": {"z": {"dz": "i", "dw_": "zeta"}, "zeta": {"dzeta": "i"}, "w": {"dw": "i"}},
    },
    "m1": {
        "coords": ["z", "w", "u1", "u2"],
        "J": {"z": {"dz": "i", "dw_": "w"}, "w": {"dw": "i"}, "u1": {"du1": "i"}, "u2": {"du2": "i"}},
    },
    "m2": {
        "coords": ["z", "zeta", "w", "u"],
        "J": {"z": {"dz": "i", "dw_": "zeta"}, "zeta": {"dzeta": "i"}, "w": {"dw": "i"}, "u": {"du": "i"}},
    },
}

CHART_LABELS = {
    "flat2": "INTEGRABLE",
    "flat3": "INTEGRABLE",
    "flat4": "INTEGRABLE",
    "submax": "DIM4_NONZERO",
    "torus": "DIM4_NONZERO",
    "lemma1": "DIM4_NONZERO",
    "onfor": "DG2(1)",
    "nofor": "DG2(2)",
    "m1": "GENERAL(m=1, W∩Z=0)",
    "m2": "GENERAL(m=1, W⊂Z)",
    "generic4": "DIM4_NONZERO",
}

# Lemma-1 form charts (α, β); Π is non-integrable here, so an e-structure exists
LEMMA1_CHARTS = {"generic4": ("w+z_", "z")}


@lru_cache(maxsize=None)
def chart(name: str) -> ChartStructure | Lemma1Structure:
    if name in LEMMA1_CHARTS:
        return Lemma1Structure.from_exprs(*LEMMA1_CHARTS[name], name=name)
    if name not in CHARTS:
        raise KeyError(f"unknown chart model {name!r}")
    d = CHARTS[name]
    return ChartStructure.from_rows(d["coords"], d["J"], name)


# ---------------------------------------------------------------------
# point tensors
# ---------------------------------------------------------------------

LAMBDA, PHI, PSI = 2.0, math.pi / 5, math.pi / 7

_REL = {
    "ndg1": (3, [(1, 2, 2, 1), (1, 3, 3, LAMBDA), (2, 3, 1, cmath.exp(1j * PHI))]),
    "ndg2": (3, [(1, 2, 2, 1), (1, 3, 3, 1), (1, 3, 2, 1), (2, 3, 1, cmath.exp(1j * PHI))]),
    "ndg3": (3, [(1, 2, 3, cmath.exp(-1j * PSI)), (1, 3, 2, -cmath.exp(1j * PSI)), (2, 3, 1, cmath.exp(1j * PHI))]),
    "ndg4": (3, [(1, 2, 1, 1), (1, 3, 2, 1), (2, 3, 2, 1), (2, 3, 3, 1)]),
    "neqs1": (3, [(1, 2, 2, 1), (1, 3, 3, -1), (2, 3, 1, 1)]),
    "neqs2": (3, [(1, 2, 3, 1), (1, 3, 2, 1), (2, 3, 1, 1)]),
    "neqs3": (3, [(1, 2, 3, 1), (3, 1, 2, 1), (2, 3, 1, 1)]),
    "dg1": (3, [(1, 3, 1, 1), (2, 3, 2, 1)]),
    "dg2_1": (3, [(1, 2, 1, 1)]),
    "dg2_2": (3, [(1, 2, 3, 1)]),
    "zero3": (3, []),
    "dim4": (2, [(1, 2, 1, 1)]),
    "n4_m1_transversal": (4, [(1, 2, 1, 1)]),
    "n4_m1_contained": (4, [(1, 2, 3, 1)]),
    "n4_m2": (4, [(1, 2, 1, 1), (3, 4, 1, 1)]),
}

# moduli λ_i^{js} of the strongly non-degenerate example, keys (i, j, s)
STRONG_LAMBDAS = {
    (1, 1, 1): 2.0, (1, 1, 2): -1.0, (1, 2, 1): 0.5j, (1, 2, 2): 3.0,
    (2, 1, 1): -2.0, (2, 1, 2): 1.0 + 1.0j, (2, 2, 1): 0.25, (2, 2, 2): -3.0j,
}

TENSOR_LABELS = {
    "ndg1": "NDG(1)-candidate",
    "ndg2": "NDG(2)-candidate",
    "ndg3": "NDG(3)-candidate",
    "ndg4": "NDG(4)-candidate",
    "neqs1": "NDG(3)-candidate",
    "neqs2": "NDG(3)-candidate",
    "neqs3": "NDG(3)-candidate",
    "dg1": "DG1",
    "dg2_1": "DG2(1)",
    "dg2_2": "DG2(2)",
    "zero3": "INTEGRABLE",
    "dim4": "DIM4_NONZERO",
    "n4_m1_transversal": "GENERAL(m=1, W∩Z=0)",
    "n4_m1_contained": "GENERAL(m=1, W⊂Z)",
    "n4_m2": "GENERAL(m=2, W∩Z=0)",
    "strong4": "GENERAL(rImage=4)",
}

# (transversal, incident) fixed-point counts for the n = 3 non-degenerate normal forms
FIXED_POINT_COUNTS = {"ndg1": (1, 2), "ndg2": (1, 1), "ndg3": (3, 0), "ndg4": (0, 1)}


@lru_cache(maxsize=None)
def point_tensor(name: str) -> PointTensor:
    if name == "strong4":
        t = strong_normal_form(STRONG_LAMBDAS)
        return PointTensor(4, t.c, "strong4")
    if name not in _REL:
        raise KeyError(f"unknown tensor model {name!r}")
    n, rels = _REL[name]
    return PointTensor.from_relations(n, rels, name)


def strong_splitting() -> tuple[RealSubspace, RealSubspace]:
    """P1 = <e_1^1, e_1^2>, P2 = <e_2^1, e_2^2> in the basis order of strong_normal_form."""
    E = np.eye(4, dtype=complex)

    def plane(cols):
        vecs = []
        for c in cols:
            vecs.append(c2r(E[c]))
            vecs.append(c2r(1j * E[c]))
        return RealSubspace.span(vecs, 8)

    return plane([0, 1]), plane([2, 3])


def model_names() -> dict:
    return {"charts": sorted(list(CHARTS) + list(LEMMA1_CHARTS)), "tensors": sorted(list(_REL) + ["strong4"])}


def resolve(name: str):
    """``models:<name>`` or bare name -> ChartStructure | PointTensor."""
    key = name.split(":", 1)[1] if name.startswith("models:") else name
    if key in CHARTS or key in LEMMA1_CHARTS:
        return chart(key)
    return point_tensor(key)


def self_test() -> list[str]:
    """Cheap structural checks on the catalog; returns a list of problems."""
    from .acstruct import validate
    from .nijenhuis import classify

    problems = []
    for name in model_names()["charts"]:
        S = chart(name)
        v = validate(S, samples=5)
        if v:
            problems.append(f"{name}: {v[0]}")
    for name, label in TENSOR_LABELS.items():
        got = classify(point_tensor(name)).type_label
        if got != label:
            problems.append(f"{name}: expected {label}, got {got}")
    return problems
