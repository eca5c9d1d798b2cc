import pytest
import sympy
from hypothesis import settings

from asaut.analyzer import cached_analysis, generic_family, sz_family

settings.register_profile("asaut", deadline=None)
settings.load_profile("asaut")

# criterion number -> one-line verdict, filled by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


def to_sympy(p, gens):
    text = str(p).replace("^", "**")
    return sympy.Poly(sympy.sympify(text, locals={str(g): g for g in gens}), *gens, modulus=2)


def same_mod2(a, b, gens) -> bool:
    return sympy.Poly(a.as_expr() - b.as_expr(), *gens, modulus=2).is_zero


def sympy_gens(varset):
    return sympy.symbols(" ".join(varset.names), seq=True)


def family_for(key: str):
    kind, _, num = key.partition("=")
    return generic_family(int(num)) if kind == "n" else sz_family(int(num))


@pytest.fixture(scope="session")
def analysis():
    return lambda key: cached_analysis(family_for(key))
