"""Collects one verdict line per acceptance criterion for the run summary."""

LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    LINES.append(line)
    print(line)
