import pytest

from graphalg.graph import Edge, MultiGraph

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(num: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[num] = (ok, detail)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")


def make(vertices, edges):
    return MultiGraph.from_edges([Edge(*e) for e in edges], vertices)


@pytest.fixture
def fig8():
    return make(["v"], [("e", "v", "v"), ("f", "v", "v")])


@pytest.fixture
def c3():
    return make(["v1", "v2", "v3"], [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")])


@pytest.fixture
def c6():
    return make(
        [f"w{i}" for i in range(6)],
        [(f"f{i}", f"w{i}", f"w{(i + 1) % 6}") for i in range(6)],
    )


@pytest.fixture
def p23():
    # loops of length 2 and 3 through v
    return make(
        ["v", "a", "b", "c"],
        [("x1", "v", "a"), ("x2", "a", "v"), ("y1", "v", "b"), ("y2", "b", "c"), ("y3", "c", "v")],
    )


@pytest.fixture
def two_scc():
    return make(["u", "w"], [("a", "u", "u"), ("b", "u", "w"), ("c", "w", "w")])
