"""Canonical JSON rendering: sorted keys, floats at 17 significant digits.

All reports the CLI emits go through this serializer so that identical
computations produce byte-identical output.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError


def _render(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    closing = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise DomainError(f"non-finite float {obj!r} in a report")
        return format(obj, ".17g")
    if isinstance(obj, Fraction):
        return _render(f"{obj.numerator}/{obj.denominator}", indent, level)
    if isinstance(obj, str):
        out = ['"']
        for ch in obj:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ch == "\n":
                out.append("\\n")
            elif ch == "\t":
                out.append("\\t")
            elif ord(ch) < 0x20:
                out.append(f"\\u{ord(ch):04x}")
            elif ord(ch) < 0x7F:
                out.append(ch)
            else:
                for unit in ch.encode("utf-16-be"):
                    pass
                encoded = ch.encode("utf-16-be")
                for k in range(0, len(encoded), 2):
                    out.append(f"\\u{int.from_bytes(encoded[k:k+2], 'big'):04x}")
        out.append('"')
        return "".join(out)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [_render(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(pad + it for it in items) + "\n" + closing + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise DomainError(f"non-string key {key!r} in a report")
            items.append(
                pad + _render(key, indent, level + 1) + ": " + _render(obj[key], indent, level + 1)
            )
        return "{\n" + ",\n".join(items) + "\n" + closing + "}"
    # numpy scalars and similar duck-typed numbers
    if hasattr(obj, "item"):
        return _render(obj.item(), indent, level)
    raise DomainError(f"cannot serialize {type(obj).__name__} into a report")


def canonical_dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text with a trailing newline."""
    return _render(obj, indent, 0) + "\n"
