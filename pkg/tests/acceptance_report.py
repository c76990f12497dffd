"""Registry of acceptance verdict lines, shared by the acceptance tests and conftest."""
from __future__ import annotations

from dataclasses import dataclass

LINES: dict[str, list[str]] = {}


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


@dataclass
class Check:
    """One counted property run: ``failures`` out of ``trials``."""

    label: str
    trials: int
    failures: int
    min_trials: int = 1
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.trials >= self.min_trials

    def line(self) -> str:
        text = (f"[{'ok' if self.ok else 'FAILED'}] {self.label}: "
                f"{_plural(self.failures, 'failure')} in {_plural(self.trials, 'trial')}")
        if self.trials < self.min_trials:
            text += f" (needs >= {self.min_trials})"
        return text + (f"; {self.note}" if self.note else "")


def record(key: str, title: str, checks: list[Check], notes: tuple[str, ...] = ()) -> tuple[bool, list[str]]:
    ok = all(c.ok for c in checks)
    lines = [f"{'PASS' if ok else 'FAIL'}  criterion {key}: {title}"]
    lines += [f"        {c.line()}" for c in checks]
    lines += [f"        {n}" for n in notes]
    LINES[key] = lines
    return ok, lines


def summary() -> list[str]:
    return [line for key in sorted(LINES) for line in LINES[key]]
