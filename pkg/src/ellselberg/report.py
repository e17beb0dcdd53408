"""Scenario reports and their JSON/CSV serialization.

Reports are plain records with a fixed field order; complex values are
serialized as two-element [re, im] arrays.  Writers are deterministic:
identical report lists produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

ABS_FALLBACK = 1e-12

# The documented field order for both JSON objects and CSV columns.
FIELD_ORDER = (
    "scenario",
    "seed_index",
    "n",
    "p",
    "q",
    "t",
    "a",
    "balancing",
    "k",
    "r",
    "i",
    "grid_N",
    "lhs",
    "rhs",
    "abs_err",
    "rel_err",
    "tol",
    "passed",
    "runtime_ms",
    "tail_tol",
    "max_terms",
    "constraint_exponent",
    "detail",
)


@dataclass(frozen=True)
class ScenarioReport:
    """One verdict: an identity's two sides, their distance, and pass/fail.

    rel_err is |lhs-rhs| / max(|lhs|, |rhs|), falling back to the absolute
    error when both sides are below 1e-12; scenarios comparing against an
    exact zero (rhs = 0) divide by their own reference scale instead and
    say so in ``detail``.  ``passed`` is rel_err <= tol.  runtime_ms is None
    when timing is disabled (the byte-reproducible default).
    """

    scenario: str
    seed_index: int
    n: int
    p: complex
    q: complex
    t: complex | None
    a: tuple
    balancing: str | None
    k: int | None
    r: int | None
    i: int | None
    grid_N: int
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    runtime_ms: int | None
    tail_tol: float
    max_terms: int
    constraint_exponent: int | None = None
    detail: str = ""


def relative_error(lhs: complex, rhs: complex) -> tuple[float, float]:
    """(abs_err, rel_err) with the absolute fallback below 1e-12 magnitude."""
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    return abs_err, abs_err / scale if scale > ABS_FALLBACK else abs_err


COMPLEX_FIELDS = ("p", "q", "t", "lhs", "rhs")


def _encode(name, value):
    if name == "a":
        return [[complex(v).real, complex(v).imag] for v in value]
    if name in COMPLEX_FIELDS and value is not None:
        v = complex(value)
        return [v.real, v.imag]
    return value


def report_to_dict(rep: ScenarioReport) -> dict:
    return {name: _encode(name, getattr(rep, name)) for name in FIELD_ORDER}


def to_json(reports: list[ScenarioReport]) -> str:
    """A bare JSON array of report objects in fixed field order."""
    return json.dumps([report_to_dict(r) for r in reports], indent=2) + "\n"


def _flat_pairs(name, value, a_width):
    if name == "a":
        vals = list(value)
        for idx in range(a_width):
            v = vals[idx] if idx < len(vals) else None
            yield f"a{idx + 1}_re", "" if v is None else repr(complex(v).real)
            yield f"a{idx + 1}_im", "" if v is None else repr(complex(v).imag)
    elif name in COMPLEX_FIELDS:
        v = None if value is None else complex(value)
        yield f"{name}_re", "" if v is None else repr(v.real)
        yield f"{name}_im", "" if v is None else repr(v.imag)
    elif value is None:
        yield name, ""
    elif isinstance(value, bool):
        yield name, "true" if value else "false"
    elif isinstance(value, float):
        yield name, repr(value)
    else:
        yield name, str(value)


def to_csv(reports: list[ScenarioReport]) -> str:
    """The same fields flattened; complex columns split into _re/_im."""
    a_width = max((len(r.a) for r in reports), default=6)
    buf = io.StringIO()
    writer = None
    for rep in reports:
        row = {}
        for name in FIELD_ORDER:
            for col, cell in _flat_pairs(name, getattr(rep, name), a_width):
                row[col] = cell
        if writer is None:
            writer = csv.DictWriter(buf, fieldnames=list(row.keys()), lineterminator="\n")
            writer.writeheader()
        writer.writerow(row)
    return buf.getvalue()


def write_report(reports: list[ScenarioReport], path: str, fmt: str = "json"):
    text = to_json(reports) if fmt == "json" else to_csv(reports)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
