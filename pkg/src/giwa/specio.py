"""JSON ingestion for graph, group, voltage and tower specs.

Schemas (documented in the README):

  graph   {"vertices": [names], "edges": [[u, v], [u, v, id], ...]}
  group   {"type": "cyclic", "order": m}
          {"type": "product", "factors": [group, group, ...]}
          {"type": "dihedral8"}
          {"type": "sl2", "ell": p, "level": n}
  voltage {"graph": g, "group": G, "alpha": {edge id: element string},
           "orientation": [id or "~id", ...]?}
  tower   {"graph": g, "ell": p, "alpha": {edge id: int},
           "beta_group": G?, "beta": {edge id: element string}?,
           "levels": n?, "orientation": [...]?}

Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json

from .errors import ValidationError
from .graphs import Multigraph, Orientation, build_multigraph
from .groups import (FiniteGroup, cyclic, dihedral_8, product,
                     sl2_level_quotient, DIHEDRAL_ROTATION, DIHEDRAL_REFLECTION,
                     _perm_mul)
from .iwasawa import tower
from .voltage import VoltageAssignment, voltage_assignment


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ValidationError(f"{where}: unknown fields {sorted(unknown)}")


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"spec file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON in {path}: {exc}") from None


def graph_from_spec(spec: dict) -> Multigraph:
    if not isinstance(spec, dict):
        raise ValidationError("graph spec must be an object")
    _check_keys(spec, {"vertices", "edges"}, "graph spec")
    if "vertices" not in spec or "edges" not in spec:
        raise ValidationError("graph spec needs 'vertices' and 'edges'")
    return build_multigraph(spec["vertices"], spec["edges"])


def group_from_spec(spec: dict) -> FiniteGroup:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ValidationError("group spec must be an object with a 'type'")
    kind = spec["type"]
    if kind == "cyclic":
        _check_keys(spec, {"type", "order"}, "cyclic group spec")
        return cyclic(int(spec["order"]))
    if kind == "product":
        _check_keys(spec, {"type", "factors"}, "product group spec")
        factors = [group_from_spec(f) for f in spec["factors"]]
        if len(factors) < 2:
            raise ValidationError("product needs at least two factors")
        out = factors[0]
        for f in factors[1:]:
            out = product(out, f)
        return out
    if kind == "dihedral8":
        _check_keys(spec, {"type"}, "dihedral group spec")
        return dihedral_8()
    if kind == "sl2":
        _check_keys(spec, {"type", "ell", "level"}, "sl2 group spec")
        return sl2_level_quotient(int(spec["ell"]), int(spec["level"])).group
    raise ValidationError(f"unknown group type {kind!r}")


def _split_top_level(body: str) -> list:
    parts = []
    depth = 0
    cur = []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_element(group: FiniteGroup, text) -> object:
    """Parse one element from its spec string (or int for cyclic groups)."""
    if isinstance(text, int):
        text = str(text)
    text = text.strip()
    name = group.name
    if group.factors is None and name.startswith("Z/"):
        try:
            return int(text) % group.order
        except ValueError:
            raise ValidationError(f"bad residue {text!r} for {name}") from None
    if group.factors is not None:         # direct product: "(a,b)"
        if not (text.startswith("(") and text.endswith(")")):
            raise ValidationError(f"product element must look like '(a,b)': {text!r}")
        parts = _split_top_level(text[1:-1])
        if len(parts) != 2:
            # products associate left, so "(a,b,c)" means "((a,b),c)"
            parts = ["(" + ",".join(parts[:-1]) + ")", parts[-1]]
        g1, g2 = group.factors
        return (parse_element(g1, parts[0]), parse_element(g2, parts[1]))
    if name == "D8":
        return _parse_dihedral_word(text)
    if name.startswith("SL2ker"):
        try:
            rows = json.loads(text)
            flat = (rows[0][0], rows[0][1], rows[1][0], rows[1][1])
        except Exception:
            raise ValidationError(f"bad SL2 element {text!r}") from None
        if not group.contains(flat):
            raise ValidationError(f"matrix {text} is not in {name}")
        return flat
    raise ValidationError(f"no element parser for group {name}")


def _parse_dihedral_word(text: str):
    ident = (0, 1, 2, 3)
    if text in ("1", "e", ""):
        return ident
    out = ident
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "r":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            power = int(text[i + 1:j]) if j > i + 1 else 1
            for _ in range(power % 4):
                out = _perm_mul(out, DIHEDRAL_ROTATION)
            i = j
        elif ch == "t":
            out = _perm_mul(out, DIHEDRAL_REFLECTION)
            i += 1
        else:
            raise ValidationError(f"bad dihedral word {text!r}")
    return out


def orientation_from_spec(graph: Multigraph, entries: list | None) -> Orientation:
    if entries is None:
        return graph.default_orientation()
    id_to_k = {eid: k for k, eid in enumerate(graph.edge_ids)}
    chosen = []
    seen = set()
    for entry in entries:
        flip = isinstance(entry, str) and entry.startswith("~")
        eid = entry[1:] if flip else entry
        if eid not in id_to_k:
            raise ValidationError(f"orientation names unknown edge {eid!r}")
        if eid in seen:
            raise ValidationError(f"orientation repeats edge {eid!r}")
        seen.add(eid)
        chosen.append(2 * id_to_k[eid] + (1 if flip else 0))
    if len(seen) != graph.undirected_edge_count:
        raise ValidationError("orientation must list every edge exactly once")
    return Orientation(tuple(chosen))


def voltage_from_spec(spec: dict) -> VoltageAssignment:
    _check_keys(spec, {"graph", "group", "alpha", "orientation"}, "voltage spec")
    for key in ("graph", "group", "alpha"):
        if key not in spec:
            raise ValidationError(f"voltage spec needs '{key}'")
    graph = graph_from_spec(spec["graph"])
    group = group_from_spec(spec["group"])
    orientation = orientation_from_spec(graph, spec.get("orientation"))
    values = {eid: parse_element(group, text) for eid, text in spec["alpha"].items()}
    return voltage_assignment(graph, group, values, orientation)


def tower_from_spec(spec: dict) -> tuple:
    """Returns (tower, beta voltage assignment or None, requested levels or None)."""
    _check_keys(spec, {"graph", "ell", "alpha", "beta", "beta_group",
                       "levels", "orientation"}, "tower spec")
    for key in ("graph", "ell", "alpha"):
        if key not in spec:
            raise ValidationError(f"tower spec needs '{key}'")
    graph = graph_from_spec(spec["graph"])
    orientation = orientation_from_spec(graph, spec.get("orientation"))
    ell = int(spec["ell"])
    alpha = {}
    for eid, v in spec["alpha"].items():
        if not isinstance(v, int):
            raise ValidationError(f"tower voltage on {eid!r} must be an integer")
        alpha[eid] = v
    t = tower(graph, ell, alpha, orientation)
    va_beta = None
    if ("beta" in spec) != ("beta_group" in spec):
        raise ValidationError("'beta' and 'beta_group' must be given together")
    if "beta" in spec:
        group = group_from_spec(spec["beta_group"])
        values = {eid: parse_element(group, text)
                  for eid, text in spec["beta"].items()}
        va_beta = voltage_assignment(graph, group, values, orientation)
    levels = spec.get("levels")
    return t, va_beta, None if levels is None else int(levels)
