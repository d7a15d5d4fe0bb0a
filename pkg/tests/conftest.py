from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from realocus.classgroup import _is_prime, is_fundamental, kronecker
from realocus.pell import fundamental_unit
from realocus.qform import Form, IntMatrix

FIXTURES = Path(__file__).parent / "fixtures"


def load_tables() -> dict:
    return json.loads((FIXTURES / "ncycle_tables.json").read_text())


@pytest.fixture(scope="session")
def tables() -> dict:
    return load_tables()


def golden_rows(N: int) -> list[tuple[Form, IntMatrix, str]]:
    t = load_tables()[str(N)]
    return [(Form(*r["form"]), IntMatrix(*r["matrix"]), r["case"]) for r in t["rows"]]


# class numbers from Dirichlet's analytic formula, used as an oracle

def fundamental_part(D: int) -> tuple[int, int]:
    """(d, f) with D = d f^2 and d fundamental."""
    for f in range(math.isqrt(abs(D)), 0, -1):
        if D % (f * f) == 0 and is_fundamental(D // (f * f)):
            return D // (f * f), f
    raise ValueError(D)


def analytic_class_number(D: int) -> int:
    """Dirichlet's class number formula, extended to orders."""
    d, f = fundamental_part(D)
    chi = [kronecker(d, n) for n in range(abs(d))]
    if d < 0:
        w = {-3: 6, -4: 4}.get(d, 2)
        hd = -w * sum(c * n for n, c in enumerate(chi)) / (2 * abs(d))
        index = w // 2 if f > 1 else 1
    else:
        s = sum(c * math.log(math.sin(math.pi * n / d)) for n, c in enumerate(chi) if n)
        hd = -s / (2 * math.log(float(fundamental_unit(d).eps)))
        index = round(math.log(float(fundamental_unit(D).eps)) / math.log(float(fundamental_unit(d).eps)))
    h = hd * f
    for p in range(2, f + 1):
        if f % p == 0 and _is_prime(p):
            h *= 1 - kronecker(d, p) / p
    h /= index
    assert abs(h - round(h)) < 1e-6, (D, h)
    return round(h)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
