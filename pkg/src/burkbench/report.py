"""Experiment reports and canonical, diffable serialization."""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field, asdict
from typing import Any

SCHEMA_VERSION = 1

VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_NOT_ASSERTED = "not-asserted"


@dataclass
class ExperimentReport:
    """Structured record of one experiment run.

    verdict is "not-asserted" whenever a module precondition failed before
    the experiment could assert anything; the violated precondition is then
    named in precondition_failures.
    """

    name: str
    parameters: dict = field(default_factory=dict)
    samples: int | None = None
    metrics: dict = field(default_factory=dict)
    max_gap: float | None = None
    argmax_point: list | None = None
    verdict: str = VERDICT_NOT_ASSERTED
    precondition_failures: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)
    schema: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return self.verdict == VERDICT_PASS

    def to_dict(self) -> dict:
        return asdict(self)


def _canonical_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)):
        return str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            # JSON has no inf/nan; encode as strings to keep files parseable
            return '"%s"' % repr(v)
        return format(v, ".17g")
    if isinstance(v, str):
        out = ['"']
        for ch in v:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ord(ch) < 0x20:
                out.append("\\u%04x" % ord(ch))
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    raise TypeError(f"unsupported scalar {type(v)}")


def canonical_json(obj: Any, indent: int = 0) -> str:
    """Serialize with sorted keys and 17-significant-digit floats.

    Deterministic byte-for-byte given equal inputs; round-trips through any
    JSON parser.
    """
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    try:
        import numpy as _np

        if isinstance(obj, _np.generic):
            obj = obj.item()
        elif isinstance(obj, _np.ndarray):
            obj = obj.tolist()
    except ImportError:  # pragma: no cover
        pass
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k in sorted(obj):
            items.append(pad_in + _canonical_scalar(str(k)) + ": " + canonical_json(obj[k], indent + 1))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad_in + canonical_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _canonical_scalar(obj)


def emit_report(report: ExperimentReport | dict, path: str) -> None:
    """Write a report as canonical JSON; identical reports are byte-identical."""
    payload = report.to_dict() if isinstance(report, ExperimentReport) else report
    text = canonical_json(payload) + "\n"
    try:
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"failed to write report to {path!r}: {exc}") from exc


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    try:
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    except OSError as exc:
        raise OSError(f"failed to write CSV to {path!r}: {exc}") from exc
