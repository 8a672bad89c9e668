"""JSON input and output for groups, endomorphisms, matrices and extensions.

Group definitions::

    {"library": "S3"}
    {"cayley": [[...], ...], "identity": 0, "labels": [...]}
    {"permutations": [[2, 1, 3], [2, 3, 1]]}              # images, 1-based
    {"permutations": ["(1 2)", "(1 2 3)"], "degree": 3}    # cycle notation

Endomorphism definitions (element indices of the built group)::

    {"map": [...]}   {"generator_images": {"1": 1, "2": 0}}   {"kind": "identity" | "trivial"}

Extensions::

    {"n": 2, "F": <group>, "theta": {"1": [[-1, 0], [0, -1]]},
     "endo": {"M": [[2, 0], [0, 2]], "psi": <endo>, "c": {"1": [0, 0]}}}

``theta`` may list every element of F or just a generating set.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from tbf.abelian import FgAbelian, FgAbelianEndo
from tbf.errors import ParseError
from tbf.groups import (
    FiniteEndo,
    FiniteGroup,
    build_from_cayley,
    build_from_permutations,
    endo_from_generator_images,
    identity_endo,
    perm_from_cycles,
    trivial_endo,
    validate_endo,
)
from tbf.intlinalg import INFINITE, as_matrix


def load_json(source):
    """Parse a path, a JSON string, or pass a dict or list through."""
    if isinstance(source, (dict, list)):
        return source
    text = source
    where = "<string>"
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith(("{", "["))):
        where = str(source)
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ParseError(str(exc), field=where) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}", field=where) from exc


def _key(k, order, what):
    try:
        i = int(k)
    except (TypeError, ValueError):
        raise ParseError(f"key {k!r} is not an element index", field=what) from None
    if not 0 <= i < order:
        raise ParseError(f"element {i} out of range", field=what)
    return i


def _cycles(text):
    out = []
    for grp in re.findall(r"\(([^()]*)\)", text):
        pts = [int(p) for p in re.split(r"[\s,]+", grp.strip()) if p]
        if pts:
            out.append(tuple(pts))
    return out


def parse_group(data) -> FiniteGroup:
    data = load_json(data)
    if not isinstance(data, dict):
        raise ParseError("group definition must be an object", field="group")
    if "library" in data:
        from tbf.library import named_group

        try:
            return named_group(str(data["library"]))
        except KeyError as exc:
            raise ParseError(str(exc), field="library") from None
    if "cayley" in data:
        return build_from_cayley(data["cayley"], identity=data.get("identity"), labels=data.get("labels"))
    if "permutations" in data:
        gens = data["permutations"]
        if not isinstance(gens, list) or not gens:
            raise ParseError("expected a nonempty list", field="permutations")
        if all(isinstance(g, str) for g in gens):
            if "degree" not in data:
                raise ParseError("cycle notation needs 'degree'", field="degree")
            perms = [perm_from_cycles(_cycles(g), int(data["degree"])) for g in gens]
        else:
            try:
                perms = [tuple(int(v) - 1 for v in g) for g in gens]
            except (TypeError, ValueError):
                raise ParseError("permutation images must be integers", field="permutations") from None
            for p in perms:
                if sorted(p) != list(range(len(perms[0]))):
                    raise ParseError(f"{[v + 1 for v in p]} is not a permutation", field="permutations")
        return build_from_permutations(perms)
    raise ParseError("expected one of 'library', 'cayley', 'permutations'", field="group")


def group_to_json(G: FiniteGroup) -> dict:
    out = {"cayley": [list(r) for r in G.mul], "identity": 0}
    if G.element_labels is not None:
        out["labels"] = list(G.element_labels)
    return out


def parse_endo(G: FiniteGroup, data) -> FiniteEndo:
    data = load_json(data)
    if isinstance(data, list):
        return validate_endo(G, data)
    if not isinstance(data, dict):
        raise ParseError("endomorphism definition must be an object or list", field="endo")
    if "map" in data:
        return validate_endo(G, data["map"])
    if "generator_images" in data:
        imgs = data["generator_images"]
        assignment = {
            _key(k, G.order, "generator_images"): _key(v, G.order, "generator_images") for k, v in imgs.items()
        }
        return endo_from_generator_images(G, assignment)
    kind = data.get("kind")
    if kind == "identity":
        return identity_endo(G)
    if kind == "trivial":
        return trivial_endo(G)
    raise ParseError("expected 'map', 'generator_images' or 'kind'", field="endo")


def endo_to_json(phi: FiniteEndo) -> dict:
    return {"map": list(phi.map)}


def parse_matrix(text) -> list:
    data = load_json(text) if isinstance(text, str) else text
    try:
        M = as_matrix(data)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"not an integer matrix: {exc}", field="matrix") from None
    if not M or len(M) != len(M[0]):
        raise ParseError("matrix must be square and nonempty", field="matrix")
    return M


def parse_fg_abelian(data) -> FgAbelianEndo:
    """``{"rank": r, "torsion": [...], "matrix": [[...]]}``."""
    data = load_json(data)
    A = FgAbelian(int(data.get("rank", 0)), tuple(data.get("torsion", ())))
    return FgAbelianEndo(A, parse_matrix(data["matrix"]))


def parse_extension(data):
    """Returns an ExtensionEndo (or the bare LatticeExtension when no 'endo' is given)."""
    from tbf.extension import LatticeExtension, extension_from_generators, validate_extension_endo

    data = load_json(data)
    for key in ("n", "F", "theta"):
        if key not in data:
            raise ParseError("missing", field=key)
    n = int(data["n"])
    F = parse_group(data["F"])
    theta = {_key(k, F.order, "theta"): parse_matrix(v) for k, v in data["theta"].items()}
    if len(theta) == F.order:
        ext = LatticeExtension(n, F, tuple(tuple(tuple(r) for r in theta[f]) for f in range(F.order)))
    else:
        ext = extension_from_generators(n, F, theta)
    if "endo" not in data:
        return ext
    e = data["endo"]
    if "M" not in e:
        raise ParseError("missing", field="endo.M")
    psi = parse_endo(F, e.get("psi", {"kind": "identity"}))
    c = {_key(k, F.order, "endo.c"): list(v) for k, v in e.get("c", {}).items()}
    return validate_extension_endo(ext, parse_matrix(e["M"]), psi, c)


def extension_to_json(phi) -> dict:
    ext = phi.ext
    return {
        "n": ext.n,
        "F": group_to_json(ext.F),
        "theta": {str(f): [list(r) for r in T] for f, T in enumerate(ext.theta)},
        "endo": {
            "M": [list(r) for r in phi.M],
            "psi": endo_to_json(phi.psi),
            "c": {str(f): list(v) for f, v in enumerate(phi.c) if any(v)},
        },
    }


def parse_rep(G: FiniteGroup, data):
    """``{"field_order": m, "generators": {"g": [[entry, ...], ...]}}``.

    Entries are ints, ``"p/q"`` strings, or coordinate lists over Q(zeta_m).
    """
    from tbf.characters import build_rep

    data = load_json(data)
    if "generators" not in data:
        raise ParseError("missing", field="generators")
    mats = {_key(k, G.order, "generators"): v for k, v in data["generators"].items()}
    try:
        return build_rep(G, int(data.get("field_order", 1)), mats)
    except ValueError as exc:
        raise ParseError(str(exc), field="generators") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_default)


def _default(o):
    if o is INFINITE:
        return "infinite"
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    if isinstance(o, np.integer):
        return int(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")

