"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

from __future__ import annotations

from contextlib import contextmanager

RESULTS: list[str] = []


@contextmanager
def criterion(label: str, claim: str):
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        RESULTS.append(f"FAIL  {label}: {claim}  [{_short(exc)}]")
        raise
    extra = detail.get("value")
    RESULTS.append(f"PASS  {label}: {claim}" + (f"  [{extra}]" if extra is not None else ""))


def _short(exc: BaseException) -> str:
    text = str(exc).strip().splitlines()
    return (text[0] if text else type(exc).__name__)[:160]
