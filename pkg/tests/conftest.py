import itertools

import pytest

from rectcart.generate import k4, octahedron, triangle


@pytest.fixture
def K4():
    return k4()


@pytest.fixture
def OCTA():
    return octahedron()


@pytest.fixture
def TRI():
    return triangle()


def brute_hamiltonian_cycles(g):
    """Undirected Hamiltonian cycles by trying every permutation that starts at vertex 0."""
    found = set()
    for perm in itertools.permutations(range(1, g.n)):
        seq = (0,) + perm
        if all(g.has_edge(seq[k], seq[(k + 1) % g.n]) for k in range(g.n)):
            rev = (0,) + tuple(reversed(perm))
            found.add(min(seq, rev))
    return found


ACCEPTANCE_LINES = []


def report(criterion, ok, detail=""):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    ACCEPTANCE_LINES.append(f"[acceptance] criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
