"""Hull files in, JSON and CSV out.

Floats are written with 17 significant digits so every emitted number
re-parses to the same double.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from pathlib import Path

from .hull import Hull, HullError, primitive_from_dict

__all__ = ["HullFileError", "parse_hull", "load_hull", "load_hulls", "dumps_json", "dumps_csv", "write_text",
           "fmt_float"]

FIELDS = {
    "rect": ("x_lo", "x_hi", "h"),
    "halfdisk": ("x0", "r"),
    "vslit": ("x0", "h"),
    "slit": ("foot", "vertices"),
}


class HullFileError(ValueError):
    """Malformed hull file; the message carries ``source:line`` and the offending field."""


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _entry_offsets(text: str) -> list[int]:
    """Character offsets of the entries of the top-level ``primitives`` array."""
    m = re.search(r'"primitives"\s*:\s*\[', text)
    if not m:
        return []
    dec = json.JSONDecoder()
    i = m.end()
    out = []
    ws = " \t\r\n"
    while True:
        while i < len(text) and text[i] in ws:
            i += 1
        if i >= len(text) or text[i] == "]":
            return out
        out.append(i)
        try:
            _, i = dec.raw_decode(text, i)
        except json.JSONDecodeError:
            return out
        while i < len(text) and text[i] in ws + ",":
            i += 1


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise HullFileError(f"{where}: expected a number, got {json.dumps(v)}")
    x = float(v)
    if not math.isfinite(x):
        raise HullFileError(f"{where}: number must be finite")
    return x


def _check_entry(d, where: str) -> dict:
    if not isinstance(d, dict):
        raise HullFileError(f"{where}: expected an object")
    kind = d.get("kind")
    if kind not in FIELDS:
        raise HullFileError(f"{where}.kind: unknown primitive kind {json.dumps(kind)} (expected one of {sorted(FIELDS)})")
    need = FIELDS[kind]
    extra = sorted(set(d) - set(need) - {"kind"})
    if extra:
        raise HullFileError(f"{where}: unexpected field(s) {extra} for kind {kind!r}")
    for f in need:
        if f not in d:
            raise HullFileError(f"{where}.{f}: missing field")
    out = {"kind": kind}
    if kind == "slit":
        out["foot"] = _number(d["foot"], f"{where}.foot")
        verts = d["vertices"]
        if not isinstance(verts, list) or not verts:
            raise HullFileError(f"{where}.vertices: expected a non-empty list of [x, y] pairs")
        vs = []
        for j, v in enumerate(verts):
            if not isinstance(v, list) or len(v) != 2:
                raise HullFileError(f"{where}.vertices[{j}]: expected [x, y]")
            vs.append([_number(v[0], f"{where}.vertices[{j}][0]"), _number(v[1], f"{where}.vertices[{j}][1]")])
        out["vertices"] = vs
    else:
        for f in need:
            out[f] = _number(d[f], f"{where}.{f}")
    return out


def parse_hull(text: str, source: str = "<string>") -> Hull:
    """Parse and validate a hull document ``{"primitives": [...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise HullFileError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    if not isinstance(doc, dict) or "primitives" not in doc:
        raise HullFileError(f'{source}:1: top level must be an object with a "primitives" array')
    extra = sorted(set(doc) - {"primitives"})
    if extra:
        raise HullFileError(f"{source}:1: unexpected top-level field(s) {extra}")
    prims = doc["primitives"]
    if not isinstance(prims, list) or not prims:
        raise HullFileError(f'{source}:1: "primitives" must be a non-empty array')
    offsets = _entry_offsets(text)
    out = []
    for i, d in enumerate(prims):
        line = _line_of(text, offsets[i]) if i < len(offsets) else 1
        where = f"{source}:{line}: primitives[{i}]"
        entry = _check_entry(d, where)
        try:
            out.append(primitive_from_dict(entry))
        except HullError as e:
            raise HullFileError(f"{where}: {e}") from None
    return Hull(out)


def load_hull(path: str | Path) -> Hull:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise HullFileError(f"{p}: cannot read ({e.strerror})") from None
    return parse_hull(text, str(p))


def load_hulls(paths) -> list[tuple[str, Hull]]:
    """Files and directories (their ``*.json``, sorted) to ``(stem, Hull)`` pairs."""
    items = []
    for path in paths:
        p = Path(path)
        files = sorted(p.glob("*.json")) if p.is_dir() else [p]
        if p.is_dir() and not files:
            raise HullFileError(f"{p}: directory has no .json hull files")
        items.extend((f.stem, load_hull(f)) for f in files)
    return items


# ------------------------------------------------------------------ output


def fmt_float(x: float) -> str:
    return format(x, ".17g")


def _enc(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot encode {obj} in JSON")
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "to_dict"):
        return _enc(obj.to_dict(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_enc(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _enc(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _enc(obj.item(), indent, level)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    return _enc(obj, indent, 0) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)
