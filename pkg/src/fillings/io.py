"""JSON reading and writing for complexes, metrics, maps and chains.

Complex: ``{"vertex_count": n, "simplices": {"0": [[0], ...], "1": [[0, 1], ...]}}``;
faces may be omitted and are closed on reading.  Metric: an extra
``"edge_lengths": [[i, j, "1.25"], ...]`` with lengths as decimal strings
(or ``"p/q"``), parsed exactly.  Map: ``{"source": ..., "target": ...,
"vertex_map": [...]}`` where source and target are complex or metric objects.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, Union

from .complex import SimplicialComplex, validate_complex
from .errors import BadIndex, ValidationError
from .metric import MetricComplex, parse_length


def length_to_json(value):
    """Exact lengths as decimal (or ``p/q``) strings; floats stay JSON numbers
    so that reading them back keeps float arithmetic."""
    if isinstance(value, float):
        return value
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den == 1:
        # terminating decimal
        digits = 0
        while (q * 10 ** digits).denominator != 1:
            digits += 1
        sign = "-" if q < 0 else ""
        scaled = abs(q.numerator * 10 ** digits // q.denominator)
        text = str(scaled).rjust(digits + 1, "0")
        return f"{sign}{text[:-digits]}.{text[-digits:]}"
    return f"{q.numerator}/{q.denominator}"


def complex_to_json(cx: SimplicialComplex) -> Dict:
    return {"vertex_count": cx.vertex_count,
            "simplices": {str(d): [list(s) for s in level] for d, level in enumerate(cx.simplices)}}


def metric_to_json(mc: MetricComplex) -> Dict:
    out = complex_to_json(mc.complex)
    out["edge_lengths"] = [[a, b, length_to_json(ell)] for (a, b), ell in sorted(mc.edge_lengths.items())]
    return out


def complex_from_json(data) -> Union[SimplicialComplex, MetricComplex]:
    """A :class:`MetricComplex` when ``edge_lengths`` is present, else a complex."""
    if not isinstance(data, dict):
        raise BadIndex("complex JSON must be an object")
    cx = validate_complex(data, close=True)
    if "edge_lengths" not in data:
        return cx
    lengths = {}
    for item in data["edge_lengths"]:
        try:
            i, j, ell = item
        except (TypeError, ValueError):
            raise ValidationError(f"bad edge_lengths entry {item!r}") from None
        i, j = int(i), int(j)
        if i >= j:
            raise BadIndex(f"edge [{i}, {j}] must have i < j")
        if (i, j) in lengths:
            raise ValidationError(f"edge [{i}, {j}] has two lengths")
        try:
            lengths[(i, j)] = parse_length(ell)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"bad length {ell!r}") from None
    return MetricComplex(cx, lengths)


def load_json(path) -> Dict:
    with open(Path(path), encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def dump_json(data, path=None) -> str:
    text = json.dumps(data, indent=1, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def map_from_json(data):
    """``(f, source_metric_or_None, target_metric_or_None)`` from map JSON."""
    from .maps import SimplicialMap

    try:
        src = complex_from_json(data["source"])
        tgt = complex_from_json(data["target"])
        vm = data["vertex_map"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed map JSON: missing {exc}") from None
    scx = src.complex if isinstance(src, MetricComplex) else src
    tcx = tgt.complex if isinstance(tgt, MetricComplex) else tgt
    f = SimplicialMap(scx, tcx, tuple(vm))
    return (f, src if isinstance(src, MetricComplex) else None,
            tgt if isinstance(tgt, MetricComplex) else None)


def map_to_json(f, source=None, target=None) -> Dict:
    return {"source": metric_to_json(source) if source is not None else complex_to_json(f.source),
            "target": metric_to_json(target) if target is not None else complex_to_json(f.target),
            "vertex_map": list(f.vertex_map)}
