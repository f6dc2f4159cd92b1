from __future__ import annotations

from collections import OrderedDict

import pytest

# criterion number -> title, list of (part, ok, detail)
_CRITERIA: "OrderedDict[int, dict]" = OrderedDict()


class AcceptanceLog:
    def title(self, n: int, text: str) -> None:
        _CRITERIA.setdefault(n, {"title": text, "parts": []})["title"] = text

    def part(self, n: int, part: str, ok: bool, detail: str = "") -> bool:
        entry = _CRITERIA.setdefault(n, {"title": "", "parts": []})
        entry["parts"].append((part, bool(ok), detail))
        tag = "PASS" if ok else "FAIL"
        print(f"  {tag} [{n}] {part}" + (f": {detail}" if detail else ""))
        return bool(ok)


@pytest.fixture(scope="session")
def acceptance() -> AcceptanceLog:
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        parts = entry["parts"]
        bad = [p for p, ok, _ in parts if not ok]
        tag = "PASS" if parts and not bad else "FAIL"
        line = f"{tag} criterion {n}: {entry['title']}"
        if bad:
            line += " -- failing parts: " + "; ".join(bad)
        tr.write_line(line)
