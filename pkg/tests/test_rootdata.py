import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modvertex.rootdata import (AffineElement, FiniteLieData, affine_bracket, p_power, sl2,
                                verify_restricted)

MAT = {"e": np.array([[0, 1], [0, 0]]), "h": np.array([[1, 0], [0, -1]]),
       "f": np.array([[0, 0], [1, 0]])}


def loop_bracket(x, m, y, n):
    """Oracle: 2x2 matrices in the loop algebra with the trace cocycle.

    Returns ({(label, mode): coeff}, central_coeff).
    """
    a, b = MAT[x], MAT[y]
    c = a @ b - b @ a
    coords = {"e": c[0, 1], "f": c[1, 0], "h": c[0, 0]}
    terms = {(lab, m + n): int(v) for lab, v in coords.items() if v}
    central = m * int(np.trace(a @ b)) if m + n == 0 else 0
    return terms, central


LABELS = st.sampled_from(["e", "h", "f"])
MODES = st.integers(-4, 4)
PRIMES = st.sampled_from([2, 3, 5, 7])


@given(LABELS, MODES, LABELS, MODES, PRIMES)
def test_affine_bracket_matches_matrix_oracle(x, m, y, n, p):
    d = sl2()
    got = affine_bracket(AffineElement.basis(d, p, x, m), AffineElement.basis(d, p, y, n))
    terms, central = loop_bracket(x, m, y, n)
    assert got == AffineElement(d, p, terms, central)


def test_bracket_reference_values():
    d, p = sl2(), 7
    e1, fm1 = AffineElement.basis(d, p, "e", 1), AffineElement.basis(d, p, "f", -1)
    assert affine_bracket(e1, fm1) == AffineElement.basis(d, p, "h", 0) + AffineElement.c(d, p)
    h1, hm1 = AffineElement.basis(d, p, "h", 1), AffineElement.basis(d, p, "h", -1)
    got = affine_bracket(h1, hm1, kappa=3)
    assert not got.terms and got.central == 6


@given(LABELS, MODES, LABELS, MODES, PRIMES)
def test_antisymmetry(x, m, y, n, p):
    d = sl2()
    a, b = AffineElement.basis(d, p, x, m), AffineElement.basis(d, p, y, n)
    assert affine_bracket(a, b) + affine_bracket(b, a) == AffineElement(d, p)


@given(LABELS, MODES, LABELS, MODES, LABELS, MODES, PRIMES)
def test_jacobi(x, m, y, n, z, k, p):
    d = sl2()
    a, b, c = (AffineElement.basis(d, p, *t) for t in ((x, m), (y, n), (z, k)))
    total = (affine_bracket(a, affine_bracket(b, c)) + affine_bracket(b, affine_bracket(c, a))
             + affine_bracket(c, affine_bracket(a, b)))
    assert total == AffineElement(d, p)


def test_p_power_reference_values():
    d = sl2()
    assert p_power(d, 2, ("e", 3)).is_zero()
    assert p_power(d, 3, ("h", 1)) == AffineElement.basis(d, 3, "h", 3)
    assert p_power(d, 5, "c") == AffineElement.c(d, 5)
    with pytest.raises(ValueError):
        p_power(d, 3, AffineElement.basis(d, 3, "h", 1) + AffineElement.basis(d, 3, "e", 0))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_restricted_structure(p):
    d = sl2()
    assert d.check_structure().passed
    assert d.check_restricted(p).passed
    assert verify_restricted(d, p, 4).passed


def test_wrong_p_power_table_is_caught():
    broken = sl2().with_ppower({"h": {}})
    assert not broken.check_restricted(3).passed
    rep = verify_restricted(broken, 3, 1)
    assert not rep.passed and rep.witness["x"].startswith("h_")


def test_json_round_trip():
    d = sl2()
    back = FiniteLieData.from_json(d.to_json())
    assert back == d
    assert back.to_json() == d.to_json()
