"""Check reports with exact, re-checkable witnesses.

A report never claims more than what was evaluated: grid- or probe-based
checks say so in their notes, and a PASS there means "no violation found on
these points", not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

MAX_WITNESSES = 32


@dataclass(frozen=True)
class Witness:
    """One violating instantiation: which condition failed, at which values."""

    condition: str
    values: tuple

    def __str__(self) -> str:
        rendered = ", ".join(str(v) for v in self.values)
        return f"condition {self.condition} fails at ({rendered})"


@dataclass(frozen=True)
class CheckReport:
    name: str
    verdict: str  # PASS | FAIL | NOT-FALSIFIED | FALSIFIED
    checked: int
    witnesses: tuple[Witness, ...]
    notes: tuple[str, ...] = ()
    truncated: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict in ("PASS", "NOT-FALSIFIED")

    def failed_conditions(self) -> tuple[str, ...]:
        return tuple(sorted({w.condition for w in self.witnesses}))

    def to_records(self) -> list[str]:
        lines = [f"check name={self.name} verdict={self.verdict} checked={self.checked}"]
        for witness in self.witnesses:
            values = ",".join(str(v) for v in witness.values)
            lines.append(f"witness condition={witness.condition} values={values}")
        if self.truncated:
            lines.append("witnesses-truncated true")
        for note in self.notes:
            lines.append(f"note {note}")
        return lines

    def to_text(self) -> str:
        lines = [f"{self.name}: {self.verdict} ({self.checked} instances checked)"]
        for witness in self.witnesses:
            lines.append(f"  {witness}")
        if self.truncated:
            lines.append(f"  (witness list truncated at {MAX_WITNESSES})")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def _sort_key(witness: Witness):
    parts = []
    for value in witness.values:
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            parts.append((0, value))
        else:
            parts.append((1, str(value)))
    return (witness.condition, tuple(parts))


def make_report(name, checked, witnesses, notes=(), falsification=False) -> CheckReport:
    """Assemble a report; witnesses are sorted and capped deterministically.

    `falsification` selects the NOT-FALSIFIED/FALSIFIED verdict wording used
    by limit-property checks that sampling can refute but never prove.
    """
    ordered = sorted(witnesses, key=_sort_key)
    truncated = len(ordered) > MAX_WITNESSES
    ordered = ordered[:MAX_WITNESSES]
    if falsification:
        verdict = "FALSIFIED" if ordered else "NOT-FALSIFIED"
    else:
        verdict = "FAIL" if ordered else "PASS"
    return CheckReport(
        name=name,
        verdict=verdict,
        checked=checked,
        witnesses=tuple(ordered),
        notes=tuple(notes),
        truncated=truncated,
    )
