import pytest

from e0struct.curve import WeierstrassCurve
from e0struct.local_field import LocalField


def make_curve(field, a):
    return WeierstrassCurve(
        field, *[field.embed_integral_rational(c) for c in a])


# fixture models from the worked examples: a = (a1, a2, a3, a4, a6)
FIXTURE_COEFFS = {
    "E2": (2, (0, 0, 2, 0, -2)),     # Y^2 + 2Y = X^3 - 2
    "E3": (3, (0, -3, 0, 3, 0)),     # Y^2 = X^3 - 3X^2 + 3X
    "E5": (5, (0, 20, -5, -15, 0)),  # Y^2 - 5Y = X^3 + 20X^2 - 15X
    "E7": (7, (7, 0, -28, 7, -35)),  # Y^2 + 7XY - 28Y = X^3 + 7X - 35
    "E8": (2, (0, -6, 0, 8, 0)),     # Y^2 = X^3 - 6X^2 + 8X
    "E9": (2, (0, 0, 0, 0, -2)),     # Y^2 = X^3 - 2
    "E10": (3, (0, 0, 0, 0, 3)),     # Y^2 = X^3 + 3
}


@pytest.fixture(scope="session")
def Q2():
    return LocalField.unramified(2, 1, 14)


@pytest.fixture(scope="session")
def Q3():
    return LocalField.unramified(3, 1, 14)


@pytest.fixture(scope="session")
def Q5():
    return LocalField.unramified(5, 1, 14)


@pytest.fixture(scope="session")
def Q7():
    return LocalField.unramified(7, 1, 14)


@pytest.fixture(scope="session")
def Q4():
    """The unramified quadratic extension Q_2(zeta_3)."""
    return LocalField.unramified(2, 2, 14)


@pytest.fixture(scope="session")
def Q2sqrt2():
    return LocalField.eisenstein(2, (-2, 0, 1), 16)


@pytest.fixture(scope="session")
def fixture_curves(Q2, Q3, Q5, Q7):
    fields = {2: Q2, 3: Q3, 5: Q5, 7: Q7}
    return {name: make_curve(fields[p], a)
            for name, (p, a) in FIXTURE_COEFFS.items()}
