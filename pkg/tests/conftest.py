import numpy as np
import pytest

from diagmult import Group, GroupSpec, enumerate_diagrams

# Parameter grid for exhaustive checks: group -> n values.
GRID = {
    Group.ORTHOGONAL: (1, 2, 3),
    Group.SPECIAL_ORTHOGONAL: (1, 2, 3),
    Group.SYMPLECTIC: (2, 4),
    Group.SYMMETRIC: (2, 3, 4),
}

_ACCEPTANCE_LINES: list[str] = []


def all_specs():
    return [GroupSpec(grp, n) for grp, ns in GRID.items() for n in ns]


def diagrams_upto(g, total):
    """Every spanning diagram of ``g`` with ``l + k <= total``."""
    out = []
    for size in range(total + 1):
        for l in range(size + 1):
            out.extend(enumerate_diagrams(g, size - l, l))
    return out


def permutation_index(sigma, n):
    """``p`` with ``permute(v, sigma).coeffs == v[p]``."""
    from diagmult import TensorVector, permute

    return permute(TensorVector(n, sigma.m, np.arange(n**sigma.m)), sigma).coeffs


def sandwich(M, sigma_l, sigma_k, n):
    """``P(sigma_l) @ M @ P(sigma_k)`` without forming the permutation matrices."""
    rows = permutation_index(sigma_l, n)
    cols = np.argsort(permutation_index(sigma_k, n))
    return M[rows][:, cols]


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
