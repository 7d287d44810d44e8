"""Finite-dimensional unital associative algebras over F_p by structure constants.

``mult[i, j]`` is the coordinate vector of ``e_i * e_j``. Left modules over an
algebra are handled as right modules over its opposite, so every module in the
library is a right module over some *acting* algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np

from . import exactla as la
from .errors import BadParams, BadUnit, InputError, NonAssociative, UnknownKey

RIGHT = "right"
LEFT = "left"
SIDES = (RIGHT, LEFT)


def flip_side(side: str) -> str:
    return LEFT if side == RIGHT else RIGHT


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    name: str
    p: int
    mult: np.ndarray  # (d, d, d)
    unit: np.ndarray  # (d,)
    declared_gorenstein: int | None = None

    def __post_init__(self):
        la.FieldSpec(self.p)
        mult = np.asarray(self.mult, dtype=np.int64) % self.p
        unit = np.asarray(self.unit, dtype=np.int64) % self.p
        d = unit.shape[0] if unit.ndim == 1 else -1
        if d < 1 or mult.shape != (d, d, d):
            raise BadParams(f"algebra {self.name!r}: mult must be {d}x{d}x{d}, got {mult.shape}")
        mult.flags.writeable = False
        unit.flags.writeable = False
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "unit", unit)

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    @cached_property
    def key(self) -> tuple:
        return (self.p, self.dim, self.mult.tobytes(), self.unit.tobytes())

    def __eq__(self, other):
        return isinstance(other, AlgebraPresentation) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"AlgebraPresentation({self.name!r}, p={self.p}, dim={self.dim})"

    @cached_property
    def op(self) -> "AlgebraPresentation":
        return opposite_algebra(self)

    @cached_property
    def right_mult(self) -> np.ndarray:
        """``right_mult[j]`` is the matrix of ``x -> x * e_j`` (row vectors)."""
        return np.ascontiguousarray(self.mult.transpose(1, 0, 2))

    @cached_property
    def left_mult(self) -> np.ndarray:
        """``left_mult[j]`` is the matrix of ``x -> e_j * x`` (row vectors)."""
        return self.mult.copy()

    def product(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.einsum("i,j,ijk->k", a, b, self.mult) % self.p

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices that generate the algebra together with the unit.

        Intertwining conditions only need checking on these.
        """
        p, d = self.p, self.dim
        chosen: list[int] = []
        sub = la.span(self.unit.reshape(1, -1), p, d)
        for j in range(d):
            if sub.dim == d:
                break
            e = np.zeros(d, dtype=np.int64)
            e[j] = 1
            if sub.contains(e, p):
                continue
            chosen.append(j)
            sub = self._closure([self.unit] + [_unit_vec(d, c) for c in chosen])
        return tuple(chosen)

    def _closure(self, elems) -> la.Subspace:
        p = self.p
        sub = la.span(np.array(elems), p, self.dim)
        while True:
            b = sub.basis
            prods = np.einsum("ai,bj,ijk->abk", b, b, self.mult).reshape(-1, self.dim) % p
            new = la.span(np.vstack([b, prods]), p, self.dim)
            if new.dim == sub.dim:
                return new
            sub = new


def _unit_vec(d: int, j: int) -> np.ndarray:
    e = np.zeros(d, dtype=np.int64)
    e[j] = 1
    return e


def validate_algebra(a: AlgebraPresentation) -> dict[str, Any]:
    """Check associativity and the unit law by full basis enumeration."""
    p, d, m = a.p, a.dim, a.mult
    # (e_i e_j) e_k versus e_i (e_j e_k), all triples at once
    left = np.einsum("ijl,lkm->ijkm", m, m) % p
    right = np.einsum("jkl,ilm->ijkm", m, m) % p
    bad = np.argwhere(np.any(left != right, axis=3))
    if bad.size:
        i, j, k = (int(t) for t in bad[0])
        raise NonAssociative(i, j, k)
    eye = np.eye(d, dtype=np.int64)
    lu = np.einsum("i,ijk->jk", a.unit, m) % p
    ru = np.einsum("j,ijk->ik", a.unit, m) % p
    for i in range(d):
        if not (np.array_equal(lu[i], eye[i]) and np.array_equal(ru[i], eye[i])):
            raise BadUnit(i)
    return {"name": a.name, "p": p, "dim": d, "associative": True, "unital": True}


def opposite_algebra(a: AlgebraPresentation) -> AlgebraPresentation:
    name = a.name[:-3] if a.name.endswith("^op") else a.name + "^op"
    return AlgebraPresentation(
        name=name,
        p=a.p,
        mult=a.mult.transpose(1, 0, 2).copy(),
        unit=a.unit.copy(),
        declared_gorenstein=a.declared_gorenstein,
    )


# ---------------------------------------------------------------- catalog


def _poly_table(m: int) -> np.ndarray:
    mult = np.zeros((m, m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            if i + j < m:
                mult[i, j, i + j] = 1
    return mult


def _cyclic_group_table(n: int) -> np.ndarray:
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mult[i, j, (i + j) % n] = 1
    return mult


def nakayama_table(kupisch: list[int]) -> tuple[np.ndarray, np.ndarray, list[tuple[int, int]], bool]:
    """Structure constants of the Nakayama algebra with the given Kupisch series.

    Vertex ``i`` has an arrow to ``i+1``; the series lists ``dim e_i A``. A series
    ending in 1 gives the linearly oriented quiver, otherwise the cyclic one.
    Basis elements are paths ``(start, length)`` with ``length < kupisch[start]``.
    """
    n = len(kupisch)
    if n == 0 or any((not isinstance(c, int)) or c < 1 for c in kupisch):
        raise BadParams(f"Kupisch series must be positive integers, got {kupisch}")
    linear = kupisch[-1] == 1
    if linear:
        for i in range(n - 1):
            if kupisch[i] > kupisch[i + 1] + 1:
                raise BadParams(f"inadmissible Kupisch series {kupisch} at vertex {i}")
    else:
        for i in range(n):
            if kupisch[i] > kupisch[(i + 1) % n] + 1:
                raise BadParams(f"inadmissible Kupisch series {kupisch} at vertex {i}")
    paths = [(i, ln) for i in range(n) for ln in range(kupisch[i])]
    index = {pth: t for t, pth in enumerate(paths)}
    d = len(paths)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for (i, a), s in index.items():
        for (j, b), t in index.items():
            end = (i + a) % n if not linear else i + a
            if end == j and a + b < kupisch[i]:
                mult[s, t, index[(i, a + b)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    for i in range(n):
        unit[index[(i, 0)]] = 1
    return mult, unit, paths, linear


def _parse_key(key: str) -> tuple[str, str]:
    key = key.strip()
    for sep in (":", " "):
        if sep in key:
            head, tail = key.split(sep, 1)
            return head.strip(), tail.strip()
    return key, ""


def catalog_algebra(key: str, p: int, params: dict | None = None) -> AlgebraPresentation:
    """Build a named test algebra.

    Keys: ``field``, ``truncated_poly <m>``, ``group_C<n>``, ``triangular_2``,
    ``nakayama <c0,c1,...>``. Parameters may be given after a space or a colon,
    or in ``params`` (``m``, ``n``, ``kupisch``).
    """
    params = dict(params or {})
    head, tail = _parse_key(key)
    if head.startswith("group_C") and head != "group_C":
        tail = tail or head[len("group_C"):]
        head = "group_C"
    try:
        if head == "field":
            a = AlgebraPresentation("field", p, np.ones((1, 1, 1), np.int64), np.ones(1, np.int64), 0)
        elif head == "truncated_poly":
            m = int(params.get("m", tail or 2))
            if m < 1:
                raise BadParams("truncated_poly needs m >= 1")
            a = AlgebraPresentation(f"truncated_poly_{m}", p, _poly_table(m), _unit_vec(m, 0), 0)
        elif head == "group_C":
            n = int(params.get("n", tail or 2))
            if n < 1:
                raise BadParams("group_C needs n >= 1")
            a = AlgebraPresentation(f"group_C{n}", p, _cyclic_group_table(n), _unit_vec(n, 0), 0)
        elif head == "triangular_2":
            mult, unit, _, _ = nakayama_table([2, 1])
            a = AlgebraPresentation("triangular_2", p, mult, unit, 1)
        elif head == "nakayama":
            kup = params.get("kupisch")
            if kup is None:
                if not tail:
                    raise BadParams("nakayama needs a Kupisch series, e.g. 'nakayama 3,2'")
                kup = [int(t) for t in tail.replace(" ", "").split(",") if t]
            mult, unit, _, _ = nakayama_table(list(kup))
            a = AlgebraPresentation("nakayama_" + "_".join(str(c) for c in kup), p, mult, unit, None)
        else:
            raise UnknownKey(f"unknown catalog algebra {key!r}")
    except ValueError as exc:
        raise BadParams(str(exc)) from exc
    validate_algebra(a)
    return a


# ---------------------------------------------------------------- JSON


def algebra_to_json(a: AlgebraPresentation) -> dict:
    return {
        "name": a.name,
        "p": int(a.p),
        "dim": a.dim,
        "unit": [int(x) for x in a.unit],
        "mult": a.mult.tolist(),
        "gorenstein_n": a.declared_gorenstein,
    }


def algebra_from_json(obj: dict) -> AlgebraPresentation:
    try:
        dim = int(obj["dim"])
        a = AlgebraPresentation(
            name=str(obj["name"]),
            p=int(obj["p"]),
            mult=np.array(obj["mult"], dtype=np.int64),
            unit=np.array(obj["unit"], dtype=np.int64),
            declared_gorenstein=obj.get("gorenstein_n"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad algebra JSON: {exc}") from exc
    if a.dim != dim:
        raise InputError(f"algebra JSON: dim {dim} does not match unit length {a.dim}")
    validate_algebra(a)
    return a


def load_algebra(path: str) -> AlgebraPresentation:
    with open(path, encoding="utf-8") as fh:
        return algebra_from_json(json.load(fh))
