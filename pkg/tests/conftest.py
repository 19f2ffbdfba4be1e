import numpy as np
import pytest

from nbldpc.code import TannerGraph, lift_binary_graph

# H = [[1, 3, 0],
#      [0, 1, 1]] over Z4
TOY_ENTRIES = [(0, 0, 1), (0, 1, 3), (1, 1, 1), (1, 2, 1)]

TOY_ALIST = """\
3 2 4
2 2
1 2 1
2 2
1 1 0 0
1 3 2 1
2 1 0 0
1 1 2 3
2 1 3 1
"""

# Same matrix, unpadded blocks and an understated maximum-degree line; the
# parser must still accept it (the maxima line is advisory).
TOY_ALIST_UNPADDED = """\
3 2 4
1 2
1 2 1
2 2
1 1
1 3 2 1
2 1
1 1 2 3
2 1 3 1
"""

BINARY_ALIST = """\
3 2
2 2
1 2 1
2 2
1 0
1 2
2 0
1 2
2 3
"""


def random_regular_binary(n: int, m: int, col_deg: int, row_deg: int, seed: int) -> TannerGraph:
    """(col_deg, row_deg)-regular binary graph via random socket matching,
    resampled until no parallel edges remain. Deterministic per seed."""
    assert n * col_deg == m * row_deg
    rng = np.random.default_rng(seed)
    while True:
        var_sockets = np.repeat(np.arange(n), col_deg)
        chk_sockets = np.repeat(np.arange(m), row_deg)
        rng.shuffle(chk_sockets)
        pairs = set(zip(var_sockets.tolist(), chk_sockets.tolist()))
        if len(pairs) == n * col_deg:
            return TannerGraph(n, m, 2, [(j, i, 1) for i, j in pairs])


@pytest.fixture(scope="session")
def toy_graph() -> TannerGraph:
    return TannerGraph(3, 2, 4, TOY_ENTRIES)


@pytest.fixture(scope="session")
def lifted_24() -> TannerGraph:
    return lift_binary_graph(random_regular_binary(24, 12, 3, 6, seed=3))


@pytest.fixture(scope="session")
def lifted_96() -> TannerGraph:
    return lift_binary_graph(random_regular_binary(96, 48, 3, 6, seed=7))


@pytest.fixture(scope="session")
def binary_504() -> TannerGraph:
    return random_regular_binary(504, 252, 3, 6, seed=11)


@pytest.fixture(scope="session")
def lifted_504(binary_504) -> TannerGraph:
    return lift_binary_graph(binary_504)


def assert_marginals_close(got, want, rtol, atol):
    """Elementwise comparison that treats a shared -inf as equal."""
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    both_ninf = np.isneginf(got) & np.isneginf(want)
    ok = both_ninf | np.isclose(got, want, rtol=rtol, atol=atol)
    assert ok.all(), f"worst mismatch at {np.argwhere(~ok)[0]}: {got[~ok][0]} vs {want[~ok][0]}"
