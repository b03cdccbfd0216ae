import numpy as np
import pytest
from scipy.stats import unitary_group

from quditc.graph import CouplingGraph


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    return unitary_group.rvs(dim, random_state=np.random.default_rng(seed))


@pytest.fixture
def path3() -> CouplingGraph:
    return CouplingGraph(3, frozenset({(0, 1), (1, 2)}), {"0": 0, "1": 1, "2": 2})


@pytest.fixture
def ring4() -> CouplingGraph:
    """Four levels with edges 0-1, 1-2, 2-3, 0-3: identity placement."""
    return CouplingGraph(
        4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}), {str(k): k for k in range(4)}
    )


@pytest.fixture
def bridged_graph() -> CouplingGraph:
    """Eight physical levels, six mapped (one ancilla bridging two states),
    two levels unused.  Edge set is a tree on the mapped levels:

        |2>@0 -- |0>@2,  |2>@0 -- |a0>@3,  |1>@1 -- |a0>@3,
        |1>@1 -- |4>@4,  |1>@1 -- |3>@5
    """
    edges = frozenset({(0, 2), (0, 3), (1, 3), (1, 4), (1, 5)})
    mapping = {"2": 0, "1": 1, "0": 2, "a0": 3, "4": 4, "3": 5}
    return CouplingGraph(8, edges, mapping, frozenset({"a0"}))
