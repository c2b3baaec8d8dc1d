"""Predicate definitions with closed-form signed distances.

A predicate carves the state space into a satisfying set and its complement.
``signed_distance`` returns the Euclidean margin of a state with respect to
that set: positive inside (distance to the complement's closure), negative
outside (minus the distance to the set's closure), zero on the boundary.
The Boolean reading is ``signed_distance >= 0``, so boundaries count as
satisfying, matching the closed ">= 0"-style sets below.

Supported families:

* ``Halfspace(a, b)``      -- {x : a.x + b >= 0}, margin (a.x + b)/|a|.
* ``NormBall(pos, center, radius, norm)`` -- {x : |x[pos] - center| <= radius}
  in the L2 or Linf norm.  ``center`` is either a constant point or a
  ``StateSlice`` read from the same state vector; a slice center is treated
  as a reference point (the margin is measured in the ``pos`` coordinates
  with the center held fixed).
* ``Complement(inner)``    -- set complement, flipping the sign.
* ``CustomPredicate(fn)``  -- an arbitrary margin function, for embedders.

A JSON predicate table maps names to definitions::

    {"near_goal": {"kind": "ball", "pos": [0, 1], "center": [7.0, 2.0],
                   "radius": 0.7, "norm": "l2"},
     "above":     {"kind": "halfspace", "a": [0.0, 1.0], "b": -1.0},
     "off_limits":{"kind": "ball", "pos": [0, 1], "center": {"slice": [2, 3]},
                   "radius": 0.5, "norm": "linf", "complement": true}}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, Union

from .errors import DimensionError, FormatError

__all__ = [
    "StateSlice",
    "Halfspace",
    "NormBall",
    "Complement",
    "CustomPredicate",
    "PredicateDef",
    "signed_distance",
    "load_predicates",
    "parse_predicate_table",
]

L2 = "l2"
LINF = "linf"


@dataclass(frozen=True)
class StateSlice:
    """Indices into the state vector, used as a predicate's moving center."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx or any(i < 0 for i in idx):
            raise ValueError(f"state slice needs non-negative indices, got {self.indices!r}")
        object.__setattr__(self, "indices", idx)


@dataclass(frozen=True)
class Halfspace:
    a: tuple
    b: float

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        if not a or all(v == 0.0 for v in a):
            raise ValueError("halfspace normal must be a non-zero vector")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))


@dataclass(frozen=True)
class NormBall:
    pos: tuple
    center: Union[tuple, StateSlice]
    radius: float
    norm: str = L2

    def __post_init__(self):
        pos = tuple(int(i) for i in self.pos)
        if not pos or any(i < 0 for i in pos):
            raise ValueError(f"pos must be non-negative state indices, got {self.pos!r}")
        center = self.center
        if not isinstance(center, StateSlice):
            center = tuple(float(v) for v in center)
        if len(center.indices if isinstance(center, StateSlice) else center) != len(pos):
            raise ValueError("pos and center must have equal length")
        if not (float(self.radius) > 0.0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if self.norm not in (L2, LINF):
            raise ValueError(f"norm must be {L2!r} or {LINF!r}, got {self.norm!r}")
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class Complement:
    inner: "PredicateDef"


@dataclass(frozen=True)
class CustomPredicate:
    fn: Callable[[Sequence[float]], float]


PredicateDef = Union[Halfspace, NormBall, Complement, CustomPredicate]


def _component(state: Sequence[float], index: int) -> float:
    if index >= len(state):
        raise DimensionError(
            f"predicate needs state component {index}, state has dim {len(state)}"
        )
    return float(state[index])


def signed_distance(p: PredicateDef, state: Sequence[float]) -> float:
    """Euclidean margin of ``state`` with respect to the predicate's set."""
    if isinstance(p, Halfspace):
        if len(state) != len(p.a):
            raise DimensionError(
                f"halfspace of dim {len(p.a)} applied to state of dim {len(state)}"
            )
        dot = sum(ai * float(si) for ai, si in zip(p.a, state))
        return (dot + p.b) / math.hypot(*p.a)
    if isinstance(p, NormBall):
        point = [_component(state, i) for i in p.pos]
        if isinstance(p.center, StateSlice):
            center = [_component(state, i) for i in p.center.indices]
        else:
            center = list(p.center)
        diffs = [abs(x - c) for x, c in zip(point, center)]
        if p.norm == L2:
            return p.radius - math.hypot(*diffs)
        # Linf box: inside, the closest exit is through the nearest face;
        # outside, the closest boundary point clamps per coordinate.
        if max(diffs) <= p.radius:
            return min(p.radius - d for d in diffs)
        return -math.hypot(*(max(d - p.radius, 0.0) for d in diffs))
    if isinstance(p, Complement):
        return -signed_distance(p.inner, state)
    if isinstance(p, CustomPredicate):
        return float(p.fn(state))
    raise TypeError(f"not a predicate definition: {p!r}")


def parse_predicate_table(data: dict) -> dict:
    """Build a name -> PredicateDef mapping from decoded JSON."""
    if not isinstance(data, dict):
        raise FormatError("predicate table must be a JSON object")
    table = {}
    for name, spec in data.items():
        try:
            table[name] = _parse_one(spec)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"predicate {name!r}: {exc}") from None
    return table


def _parse_one(spec: dict) -> PredicateDef:
    kind = spec["kind"]
    if kind == "halfspace":
        p: PredicateDef = Halfspace(tuple(spec["a"]), spec["b"])
    elif kind == "ball":
        center = spec["center"]
        if isinstance(center, dict):
            center = StateSlice(tuple(center["slice"]))
        else:
            center = tuple(center)
        p = NormBall(tuple(spec["pos"]), center, spec["radius"], spec.get("norm", L2))
    else:
        raise ValueError(f"unknown predicate kind {kind!r}")
    if spec.get("complement", False):
        p = Complement(p)
    return p


def load_predicates(path) -> dict:
    """Load a predicate table from a JSON file."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from None
    return parse_predicate_table(data)
