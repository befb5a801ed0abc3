"""JSON and CSV formats for layouts, realizer dumps and run statistics."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import replace
from typing import Any, Iterable, Mapping, Sequence

from .geometry import GeometryError, Layout, Rect, fmt_number, parse_number
from .octo import Skeleton

STATS_FIELDS = ("instance", "n", "iterations", "error", "ms")


def _rect_json(r: Rect) -> list:
    return [fmt_number(c) for c in r.as_tuple()]


def layout_to_dict(layout: Layout, **extra: Any) -> dict:
    """Plain-data form of a layout; rationals become ``"p/q"`` strings.

    ``extra`` entries are copied verbatim (for example ``mode`` or
    per-vertex ``pressure``).
    """
    labels = layout.labels
    out: dict[str, Any] = {"vertices": list(labels), "bbox": _rect_json(layout.bbox)}
    if layout.lam is not None:
        out["lambda"] = fmt_number(layout.lam)
    if layout.columns is not None:
        out["columns"] = {labels[v]: fmt_number(c) for v, c in enumerate(layout.columns)}
    out["polygons"] = {labels[v]: [[fmt_number(x), fmt_number(y)] for x, y in p] for v, p in enumerate(layout.polygons)}
    if layout.parts is not None:
        out["rects"] = {labels[v]: {k: _rect_json(r) for k, r in d.items()} for v, d in enumerate(layout.parts)}
    if layout.auxiliary:
        out["auxiliary"] = [labels[v] for v in layout.auxiliary]
    out.update(extra)
    return out


def dump_layout(layout: Layout, **extra: Any) -> str:
    return json.dumps(layout_to_dict(layout, **extra), indent=1) + "\n"


def layout_from_dict(data: Mapping[str, Any]) -> Layout:
    try:
        labels = tuple(data.get("vertices") or data["polygons"].keys())
        index = {s: k for k, s in enumerate(labels)}
        bbox = Rect(*(parse_number(c) for c in data["bbox"]))
        polys = tuple(
            tuple((parse_number(x), parse_number(y)) for x, y in data["polygons"][s]) for s in labels
        )
        lam = parse_number(data["lambda"]) if "lambda" in data else None
        columns = tuple(parse_number(data["columns"][s]) for s in labels) if "columns" in data else None
        parts = None
        if "rects" in data:
            parts = tuple(
                {k: Rect(*(parse_number(c) for c in r)) for k, r in data["rects"].get(s, {}).items()} for s in labels
            )
        aux = tuple(index[s] for s in data.get("auxiliary", ()))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise GeometryError(f"malformed layout: {exc}") from None
    return Layout(polys, bbox, labels, lam, columns, parts, aux)


def parse_layout(text: str) -> tuple[Layout, dict]:
    """Layout plus the raw dictionary (for fields such as ``mode``)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"malformed layout: {exc}") from None
    return layout_from_dict(data), data


def with_parts(layout: Layout, parts: Sequence[Mapping[str, Rect]]) -> Layout:
    return replace(layout, parts=tuple(dict(p) for p in parts))


def realizer_to_dict(sk: Skeleton) -> dict:
    """Per vertex its three parents (``null`` at the roots), canonical number and rank."""
    labels = sk.graph.labels
    s = sk.realizer
    name = lambda v: None if v is None else labels[v]  # noqa: E731
    return {
        "roots": [labels[v] for v in s.roots],
        "order": [labels[v] for v in sk.order.seq],
        "vertices": {
            labels[v]: {
                "phi1": name(s.phi1.get(v)),
                "phi2": name(s.phi2.get(v)),
                "phi3": name(s.phi3.get(v)),
                "canon": sk.order.canon[v],
                "pi": sk.pi[v],
            }
            for v in range(sk.n)
        },
    }


def dump_realizer(sk: Skeleton) -> str:
    return json.dumps(realizer_to_dict(sk), indent=1) + "\n"


def stats_csv(rows: Iterable[Mapping[str, Any]], fields: Sequence[str] = STATS_FIELDS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k)) for k in fields})
    return buf.getvalue()


def _cell(x: Any) -> Any:
    if isinstance(x, float):
        return f"{x:.6g}"
    return x


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
