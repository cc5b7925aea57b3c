"""Check results and scenario reports, with JSON and CSV round-trips."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Optional

STATUSES = ("holds", "fails", "inconclusive")


@dataclass(frozen=True)
class CheckResult:
    """One premise or conclusion: what was expected and what the grid showed.

    A check expected to fail is met only when it fails with a witness.
    """

    name: str
    expect: str
    status: str
    witness: Optional[object] = None
    max_violation: Optional[float] = None
    tol: Optional[float] = None

    def __post_init__(self):
        if self.expect not in ("holds", "fails") or self.status not in STATUSES:
            raise ValueError(f"bad expect/status {self.expect!r}/{self.status!r}")

    @property
    def met(self) -> bool:
        if self.status != self.expect:
            return False
        return self.expect == "holds" or self.witness is not None

    def to_dict(self):
        d = asdict(self)
        d["met"] = self.met
        return d

    @classmethod
    def from_dict(cls, d):
        witness = d.get("witness")
        if isinstance(witness, list):
            witness = tuple(witness)
        return cls(d["name"], d["expect"], d["status"], witness, d.get("max_violation"), d.get("tol"))


@dataclass
class Report:
    scenario_id: str
    description: str
    kind: str
    premises: list = field(default_factory=list)
    conclusions: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def overall(self) -> str:
        checks = self.premises + self.conclusions
        if self.error is not None or any(c.status == "inconclusive" for c in checks):
            return "inconclusive"
        return "pass" if all(c.met for c in checks) else "fail"

    def verdicts(self):
        """Everything except timings; identical for identical settings."""
        return {
            "scenario_id": self.scenario_id,
            "overall": self.overall,
            "premises": [c.to_dict() for c in self.premises],
            "conclusions": [c.to_dict() for c in self.conclusions],
            "diagnostics": self.diagnostics,
            "error": self.error,
        }

    def to_dict(self):
        d = self.verdicts()
        d["description"] = self.description
        d["kind"] = self.kind
        d["timings"] = self.timings
        return d

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, default=_jsonable)

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["scenario_id"],
            d.get("description", ""),
            d.get("kind", ""),
            [CheckResult.from_dict(c) for c in d.get("premises", [])],
            [CheckResult.from_dict(c) for c in d.get("conclusions", [])],
            d.get("diagnostics", {}),
            d.get("timings", {}),
            d.get("error"),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"{self.scenario_id}: {self.overall.upper()}  ({self.description})"]
        for section, checks in (("premise", self.premises), ("conclusion", self.conclusions)):
            for c in checks:
                mark = "ok " if c.met else "BAD"
                extra = f" witness={c.witness}" if c.witness is not None else ""
                mv = "" if c.max_violation is None else f" max_violation={c.max_violation:.3g}"
                lines.append(f"  [{mark}] {section}: {c.name}: {c.status} (expected {c.expect}){mv}{extra}")
        if self.error:
            lines.append(f"  error: {self.error}")
        for key, value in self.diagnostics.items():
            lines.append(f"  {key}: {json.dumps(value, default=_jsonable)}")
        return "\n".join(lines)


CSV_FIELDS = ["scenario_id", "overall", "section", "name", "expect", "status", "met", "witness", "max_violation", "tol"]


def _cell(value):
    return "" if value is None else json.dumps(value, default=_jsonable)


def _uncell(text):
    return None if text == "" else json.loads(text)


def reports_to_csv(reports) -> str:
    """One row per check; floats are written with full precision."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        checks = [("premise", c) for c in r.premises] + [("conclusion", c) for c in r.conclusions]
        if not checks:
            writer.writerow([r.scenario_id, r.overall, "", "", "", "", "", "", "", ""])
        for section, c in checks:
            writer.writerow([
                r.scenario_id, r.overall, section, c.name, c.expect, c.status,
                "true" if c.met else "false", _cell(c.witness), _cell(c.max_violation), _cell(c.tol),
            ])
    return buf.getvalue()


def reports_from_csv(text):
    """Rebuild reports (checks and overall only) from :func:`reports_to_csv` output."""
    out = {}
    overall = {}
    for row in csv.DictReader(io.StringIO(text)):
        rid = row["scenario_id"]
        rep = out.setdefault(rid, Report(rid, "", ""))
        overall[rid] = row["overall"]
        if not row["section"]:
            continue
        witness = _uncell(row["witness"])
        if isinstance(witness, list):
            witness = tuple(witness)
        check = CheckResult(row["name"], row["expect"], row["status"], witness, _uncell(row["max_violation"]), _uncell(row["tol"]))
        (rep.premises if row["section"] == "premise" else rep.conclusions).append(check)
    for rid, rep in out.items():
        if rep.overall != overall[rid]:
            # an error-only report carries no checks; keep its recorded outcome
            rep.error = rep.error or f"recorded overall {overall[rid]}"
    return list(out.values())


def _jsonable(value):
    try:
        import numpy as np

        if isinstance(value, np.generic):
            return value.item()
        if isinstance(value, np.ndarray):
            return value.tolist()
    except ImportError:  # pragma: no cover
        pass
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"not JSON serialisable: {type(value).__name__}")


__all__ = ["CheckResult", "Report", "reports_to_csv", "reports_from_csv", "CSV_FIELDS"]
