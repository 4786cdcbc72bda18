import sys

import numpy as np
import pytest

from zsf.cli import corpus_documents
from zsf.sysmodel import StateSpace, controllable_canonical


def corpus():
    return {name.removesuffix(".json"): doc for name, doc in corpus_documents()}


@pytest.fixture(scope="session")
def docs():
    return corpus()


@pytest.fixture(scope="session")
def ex1(docs):
    return docs["example1"].system()


@pytest.fixture(scope="session")
def ex2(docs):
    return docs["example2"].system()


@pytest.fixture(scope="session")
def ex3(docs):
    return docs["example3"].system()


@pytest.fixture(scope="session")
def ex4(docs):
    return docs["example4"].system()


@pytest.fixture(scope="session")
def ex5(docs):
    return docs["example5"].system()


@pytest.fixture(scope="session")
def ex2_bar():
    """The already-extended G(s)/s realization of Example 2."""
    A = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, -40, -38, -11]]
    return StateSpace(A, [[0], [0], [0], [1]], [[96, 116, 21, 1]])


def separated_roots(rng, n, avoid=(), sep=0.3, radius=4.0):
    """``n`` roots closed under conjugation, pairwise (and from ``avoid``) apart by ``sep``."""
    roots = []
    taken = list(avoid)
    while len(roots) < n:
        if n - len(roots) >= 2 and rng.random() < 0.3:
            z = complex(rng.uniform(-radius, radius), rng.uniform(0.4, radius / 2))
            cand = [z, z.conjugate()]
        else:
            cand = [complex(rng.uniform(-radius, radius), 0.0)]
        if all(abs(c - t) > sep for c in cand for t in taken):
            roots += cand
            taken += cand
    return np.array(roots)


def random_siso(rng, n, m):
    """Coprime ``num/den`` of degrees ``m < n`` in controllable canonical form."""
    poles = separated_roots(rng, n)
    zeros = separated_roots(rng, m, avoid=poles)
    gain = rng.choice([-1, 1]) * rng.uniform(0.5, 3.0)
    num = gain * np.real(np.poly(zeros)) if m else np.array([gain])
    den = np.real(np.poly(poles))
    return controllable_canonical(num, den), zeros


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_similarity(rng, n, max_cond=1e3):
    """Nonsingular matrix with condition number at most ``max_cond``."""
    s = np.exp(rng.uniform(0, np.log(max_cond), n))
    s[0], s[-1] = 1.0, max_cond ** rng.uniform(0, 1)
    return random_orthogonal(rng, n) @ np.diag(s) @ random_orthogonal(rng, n)


def random_square(rng, n, m):
    """Random strictly proper square system with unit relative degrees."""
    A = rng.standard_normal((n, n))
    B = rng.standard_normal((n, m))
    C = rng.standard_normal((m, n))
    return StateSpace(A, B, C)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
