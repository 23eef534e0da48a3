"""Reading and writing quadrature rules as CSV or JSON.

Floats are written with ``repr`` (shortest round-tripping form), so an
export, import, export cycle reproduces the file byte for byte.
"""

import csv
import io
import json
import math
from pathlib import Path

from .errors import RuleFormatError
from .quadgen import QuadratureRule

CSV_HEADER = ("re_node", "im_node", "re_weight", "im_weight")
FORMAT_NAME = "cauchyquad-rule"


def tool_version():
    try:
        from importlib.metadata import version
        return version("artifact")
    except Exception:
        return "0+unknown"


def _f(x):
    return repr(float(x))


def rule_to_csv(rule):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for z, c in zip(rule.nodes, rule.weights):
        w.writerow([_f(z.real), _f(z.imag), _f(c.real), _f(c.imag)])
    return buf.getvalue()


def _opt_float(x):
    if x is None:
        return None
    x = float(x)
    # JSON has no inf/nan
    return x if math.isfinite(x) else repr(x)


def rule_to_json(rule, version=None):
    doc = {
        "format": FORMAT_NAME,
        "tool_version": version or tool_version(),
        "degree": rule.degree,
        "approx_error": _opt_float(rule.approx_error),
        "contour_length": _opt_float(rule.contour_length),
        "provenance": rule.provenance,
        "constant": [float(rule.constant.real), float(rule.constant.imag)],
        "nodes": [[float(z.real), float(z.imag)] for z in rule.nodes],
        "weights": [[float(c.real), float(c.imag)] for c in rule.weights],
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def export_rule(rule, path, format=None):
    """Write ``rule`` to ``path``; the format defaults to the file suffix."""
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "csv":
        text = rule_to_csv(rule)
    elif fmt == "json":
        text = rule_to_json(rule)
    else:
        raise ValueError(f"unknown rule format {fmt!r}; use csv or json")
    path.write_text(text, encoding="utf-8")
    return path


def _parse_float(text, line):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise RuleFormatError(f"not a number: {text!r}", line=line) from None


def rule_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(c.strip() for c in rows[0]) != CSV_HEADER:
        raise RuleFormatError("expected header " + ",".join(CSV_HEADER), line=1)
    nodes, weights = [], []
    for k, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 4:
            raise RuleFormatError(f"expected 4 fields, found {len(row)}", line=k)
        a, b, c, d = (_parse_float(v, k) for v in row)
        nodes.append(complex(a, b))
        weights.append(complex(c, d))
    return QuadratureRule(nodes, weights)


def _line_of(text, pos):
    return text.count("\n", 0, pos) + 1


def _entry_pos(text, key, k):
    """Offset of entry ``k`` of the top-level list ``key`` (best effort)."""
    start = text.find(f'"{key}"')
    if start < 0:
        return 0
    pos = text.find("[", start)
    depth, count, in_str = 0, -1, False
    for i in range(pos, len(text)):
        ch = text[i]
        if in_str:
            in_str = ch != '"' or text[i - 1] == "\\"
            continue
        if ch == '"':
            in_str = True
        elif ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
        if depth == 1 and ch in "[,":
            # next non-blank character starts an entry
            j = i + 1
            while j < len(text) and text[j] in " \t\r\n":
                j += 1
            count += 1
            if count == k:
                return j
    return start


def _pairs(doc, key, text):
    vals = doc.get(key)
    if not isinstance(vals, list):
        raise RuleFormatError(f"missing list {key!r}", line=1)
    out = []
    for k, p in enumerate(vals):
        if (not isinstance(p, list) or len(p) != 2
                or not all(isinstance(v, (int, float)) for v in p)):
            raise RuleFormatError(f"{key}[{k}] is not a [re, im] pair",
                                  line=_line_of(text, _entry_pos(text, key, k)))
        out.append(complex(p[0], p[1]))
    return out


def _meta_float(v):
    if v is None:
        return None
    return float(v)


def rule_from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleFormatError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise RuleFormatError(f"not a {FORMAT_NAME} document", line=1)
    nodes = _pairs(doc, "nodes", text)
    weights = _pairs(doc, "weights", text)
    if len(nodes) != len(weights):
        raise RuleFormatError("nodes and weights differ in length", line=1)
    if doc.get("degree") not in (None, len(nodes)):
        raise RuleFormatError("degree does not match the node count", line=1)
    const = doc.get("constant", [0.0, 0.0])
    return QuadratureRule(nodes, weights, complex(const[0], const[1]),
                          _meta_float(doc.get("approx_error")),
                          _meta_float(doc.get("contour_length")),
                          doc.get("provenance", ""))


def import_rule(path, format=None):
    """Read a rule written by :func:`export_rule`.

    Raises
    ------
    RuleFormatError
        Malformed content; ``line`` gives the 1-based line number.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "csv":
        return rule_from_csv(text)
    if fmt == "json":
        return rule_from_json(text)
    raise ValueError(f"unknown rule format {fmt!r}; use csv or json")
