"""Verification outcomes and their line-oriented ``key=value`` serialization.

A record is a block of ``key=value`` lines. An optional witness follows as
``witness=<kind>`` and a body ending with a line ``end``; for ``family``
witnesses the body is in the family text format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .family import Family, format_family_text, parse_family_text

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
PROPERTY_PASS = "property-pass"
VERDICTS = (PASS, FAIL, INCONCLUSIVE, PROPERTY_PASS)

_ORDERED = ("claim", "expr", "n", "m", "k", "value", "expected", "verdict")


@dataclass
class Certificate:
    claim: str
    verdict: str
    expr: str | None = None
    n: int | None = None
    m: Any = None
    k: int | None = None
    value: Any = None
    expected: Any = None
    details: dict[str, Any] = field(default_factory=dict)
    witness: Family | list[str] | None = None

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict in (PASS, PROPERTY_PASS)

    def to_text(self) -> str:
        lines = []
        for key in _ORDERED:
            val = getattr(self, key)
            if val is not None:
                lines.append(f"{key}={_fmt(val)}")
        for key, val in self.details.items():
            lines.append(f"{key}={_fmt(val)}")
        if isinstance(self.witness, Family):
            lines.append("witness=family")
            lines.extend(format_family_text(self.witness).splitlines())
            lines.append("end")
        elif self.witness is not None:
            lines.append("witness=lines")
            lines.extend(self.witness)
            lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Certificate:
        fields: dict[str, str] = {}
        details: dict[str, str] = {}
        witness: Family | list[str] | None = None
        lines = iter(text.splitlines())
        for line in lines:
            if not line.strip():
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"malformed record line {line!r}")
            if key == "witness":
                body = []
                for wline in lines:
                    if wline == "end":
                        break
                    body.append(wline)
                else:
                    raise ValueError("witness block is missing its 'end' line")
                witness = parse_family_text("\n".join(body)) if val == "family" else body
            elif key in _ORDERED:
                fields[key] = val
            else:
                details[key] = val
        for key in ("n", "k"):
            if key in fields:
                fields[key] = int(fields[key])
        return cls(details=details, witness=witness, **fields)


def _fmt(val: Any) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, (list, tuple)):
        return ",".join(_fmt(v) for v in val)
    return str(val)
