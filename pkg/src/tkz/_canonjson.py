"""Canonical JSON writer: floats at 17 significant digits, stable ordering.

Identical in-memory reports serialize to byte-identical files.
"""

import math

from .errors import ConfigurationError


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ConfigurationError("non-finite float in report")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ", ".join(dumps_canonical(v, indent) for v in obj)
        if len(inner) <= 100:
            return f"[{inner}]"
        items = (",\n" + pad + "  ").join(dumps_canonical(v, indent + 2) for v in obj)
        return "[\n" + pad + "  " + items + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (",\n" + pad + "  ").join(
            f"{dumps_canonical(str(k))}: {dumps_canonical(v, indent + 2)}"
            for k, v in obj.items()
        )
        return "{\n" + pad + "  " + items + "\n" + pad + "}"
    raise ConfigurationError(f"cannot serialize {type(obj).__name__} canonically")


def dump_canonical(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(obj))
        fh.write("\n")
