"""End-to-end acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line with its wall time; the lines are also
repeated in the pytest terminal summary.  Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""

import time
from itertools import product

import pytest

from higherq.report import Report
from higherq.suites import (
    RunConfig,
    comultiplication,
    cross_level,
    d_squared,
    dp_algebra,
    h_relations,
    homotopy_identity,
    integrality,
    angle_congruence,
    jet_poincare,
    qint_products,
    pascal_factorial,
    stratification,
    poincare,
    basis_change,
)

RESULTS: list[str] = []


def criterion(number: int, title: str, limit: float | None, runs):
    """Run suite/config pairs, record one line and fail on any failure or timeout.

    limit is None for criteria without a stated time bound.
    """
    start = time.perf_counter()
    total = Report(title)
    for suite, cfg in runs:
        rep = suite(cfg)
        total.merge(rep)
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    ok = total.ok and in_time and total.cases > 0
    bound = "no time limit" if limit is None else f"limit {limit:g} s"
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {total.passed}/{total.cases} cases, {elapsed:.2f} s ({bound})"
    RESULTS.append(line)
    print(line)
    assert total.ok, total.failures[:5]
    assert in_time, f"took {elapsed:.1f} s"
    assert total.cases > 0


def test_01_pascal_factorial():
    criterion(1, "Pascal and factorial q-binomials agree, k <= 40", 5,
              [(pascal_factorial, RunConfig(max_index=40))])


def test_02_integrality():
    criterion(2, "level-m coefficients are integral / local", 30,
              [(integrality, RunConfig(p=p, m=m)) for p, m in product((2, 3), (0, 1, 2))])


def test_03_congruence():
    criterion(3, "<k\\p^m> is 1 mod (p, q-1)", None,
              [(angle_congruence, RunConfig(p=p, m=m)) for p, m in product((2, 3), (1, 2))])


def test_04_product_and_unit():
    criterion(4, "q-integer product identity and unit factorisation", None,
              [(qint_products, RunConfig(p=p, m=m)) for p, m in product((2, 3), (1, 2))])


def test_05_dp_algebra():
    runs = [(dp_algebra, RunConfig(p=2, m=m, d=1)) for m in (0, 1)] + [(dp_algebra, RunConfig(p=2, m=1, d=2))]
    criterion(5, "divided power algebra is a commutative ring embedding", 120, runs)


def test_06_comultiplication():
    runs = [(comultiplication, RunConfig(p=2, m=m, d=d)) for m, d in product((0, 1), (1, 2))]
    runs.append((comultiplication, RunConfig(p=3, m=1, d=1)))
    criterion(6, "comultiplication formula, coassociativity, counit", None, runs)


def test_07_d_squared():
    runs = [(d_squared, RunConfig(p=2, m=m, d=1)) for m in (0, 1)] + [(d_squared, RunConfig(p=2, m=0, d=2))]
    criterion(7, "d o d = 0 in the tensor, de Rham and jet complexes", None, runs)


def test_08_poincare():
    runs = [(poincare, RunConfig(p=2, m=m, d=1, max_index=8)) for m in (0, 1)]
    runs.append((poincare, RunConfig(p=2, m=1, d=2, max_index=4)))
    criterion(8, "de Rham Poincare lemma on weight slices", 300, runs)


def test_09_stratification():
    criterion(9, "stratification compatibility identities", None, [(stratification, RunConfig(p=2, m=1, d=1))])


def test_10_basis_change():
    runs = [(basis_change, RunConfig(p=p, m=m, d=1)) for p, m in product((2, 3), (0, 1))]
    criterion(10, "Frobenius basis change is integral, divisibility claim", 300, runs)


def test_11_homotopy():
    runs = [(h_relations, RunConfig(p=2, m=1, d=d)) for d in (1, 2)]
    runs += [(homotopy_identity, RunConfig(p=2, m=1, d=d, max_degree=2)) for d in (1, 2)]
    runs.append((jet_poincare, RunConfig(p=2, m=1, d=1, max_index=8)))
    criterion(11, "homotopy h respects relations and contracts the jet complex", 600, runs)


def test_12_cross_level():
    runs = [(cross_level, RunConfig(p=p, m=m, d=1, max_index=12)) for p, m in product((2, 3), (0, 1, 2))]
    runs.append((cross_level, RunConfig(p=2, m=1, d=2, max_index=6)))
    criterion(12, "level 0 collapse and q = 1 specialisation", None, runs)


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
