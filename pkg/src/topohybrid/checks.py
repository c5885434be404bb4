from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    """Boolean verdict that remembers the first condition that failed."""

    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else f"failed: {self.failure}"


PASS = Check(True)


def fail(reason: str) -> Check:
    return Check(False, reason)
