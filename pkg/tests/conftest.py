from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parents[1] / "src" / "metasoc" / "data"


def conllu_block(rows, year=1981, sent_id="s1"):
    """rows: (form, lemma, head, deprel) tuples, ids assigned 1..n."""
    lines = [f"# sent_id = {sent_id}"]
    if year is not None:
        lines.append(f"# year = {year}")
    for i, (form, lemma, head, rel) in enumerate(rows, 1):
        lines.append("\t".join([str(i), form, lemma, "X", "_", "_", str(head), rel, "_", "_"]))
    return "\n".join(lines) + "\n\n"


@pytest.fixture
def synthetic_path():
    return DATA / "synthetic_200.conllu"


@pytest.fixture
def metaphors_path():
    return DATA / "metaphors.csv"


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; assert after recording."""
    def record(number: int, ok: bool, detail: str):
        _CRITERIA[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_CRITERIA[number])
        assert ok, _CRITERIA[number]
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
