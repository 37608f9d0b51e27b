"""JSON wire formats. Rationals always travel as "p/q" strings."""
from __future__ import annotations

import json

from .arith import Q, format_rational
from .errors import ValidationError
from .plmap import PLCircleMap, PLHomeo, _build


def map_to_json(f: PLHomeo) -> dict:
    d = {
        "circumference": format_rational(f.src),
        "f0": format_rational(f.f0),
        "pieces": [{"left": format_rational(a), "slope": format_rational(s)} for a, s in f.pieces],
    }
    if f.dst != f.src:
        d["targetCircumference"] = format_rational(f.dst)
    return d


def map_from_json(d) -> PLHomeo:
    try:
        src = Q(d["circumference"])
        dst = Q(d.get("targetCircumference", d["circumference"]))
        pieces = [(Q(p["left"]), Q(p["slope"])) for p in d["pieces"]]
        f0 = Q(d["f0"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed map JSON: {exc}") from exc
    try:
        return _build(src, dst, pieces, f0)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def load_map(path) -> PLCircleMap:
    with open(path) as fh:
        d = json.load(fh)
    if isinstance(d, dict) and "maps" in d:
        d = d["maps"][0]
    return map_from_json(d)
