"""Collects one summary line per acceptance criterion for the terminal report."""

LINES: list[tuple[int, str]] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    LINES.append((number, line))
    print(line)
