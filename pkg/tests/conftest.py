import numpy as np
import pytest
from hypothesis import strategies as st

from sinrsched import Instance, InstanceParams, MetricSpace

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def plane_instance(rng: np.random.Generator, n: int, side: float = 10.0, alpha: float = 3.0,
                   beta: float = 1.0, noise: float = 0.0, min_len: float = 0.5, max_len: float = 3.0) -> Instance:
    """``n`` links with private endpoints scattered in a square."""
    senders = rng.uniform(0, side, size=(n, 2))
    angle = rng.uniform(0, 2 * np.pi, size=n)
    length = rng.uniform(min_len, max_len, size=n)
    receivers = senders + length[:, None] * np.column_stack([np.cos(angle), np.sin(angle)])
    pts = np.empty((2 * n, 2))
    pts[0::2], pts[1::2] = senders, receivers
    return Instance.build(MetricSpace.euclidean(pts), InstanceParams(alpha, beta, noise),
                          [(2 * i, 2 * i + 1) for i in range(n)])


@st.composite
def line_instances(draw, min_links=1, max_links=6):
    n = draw(st.integers(min_links, max_links))
    coord = st.floats(-50, 50, allow_nan=False).map(lambda x: round(x, 3))
    pairs = []
    for _ in range(n):
        a = draw(coord)
        b = draw(coord.filter(lambda x, a=a: abs(x - a) >= 0.05))
        pairs.append((a, b))
    alpha = draw(st.sampled_from([2.0, 2.5, 3.0, 4.0]))
    beta = draw(st.sampled_from([0.5, 1.0, 2.0]))
    noise = draw(st.sampled_from([0.0, 1e-6, 1e-3]))
    return Instance.on_line(pairs, alpha, beta, noise)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[1])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record_criterion():
    def record(name: str, ok: bool, detail: str = ""):
        ACCEPTANCE_RESULTS[name] = (ok, detail)
        print(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")
    return record
