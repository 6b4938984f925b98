from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modvertex.fock import add_into, is_zero
from modvertex.scalars import KPoly
from modvertex.wakimoto import (PCharacter, build_baby_wakimoto,
                                build_baby_wakimoto_noncritical, center_probe, minus_rho_module,
                                singular_census, singular_vectors, vacuum_view,
                                verify_g_relations, verify_mathieu_character,
                                verify_well_defined)

AS0 = ((("a*", 0), 1),)


def test_minus_rho_basis_and_highest_weight():
    w = minus_rho_module(2)
    assert w.critical and repr(w).startswith("BabyWakimoto(critical")
    assert w.basis(0) == [(), AS0]
    hw = w.highest_weight_vector
    assert w.g_action("h", 0, hw) == {(): 1}  # -1 mod 2
    w3 = minus_rho_module(3)
    assert w3.g_action("h", 0, w3.highest_weight_vector) == {(): 2}
    for n in range(0, 3):
        assert w3.g_action("e", n, hw) == {}
    for n in range(1, 3):
        assert w3.g_action("h", n, hw) == {} and w3.g_action("f", n, hw) == {}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_f_zero_lowers_weight_by_two(p):
    w = minus_rho_module(p)
    v = w.g_action("f", 0, w.highest_weight_vector)
    # f_0 acts on the top through :a* b:, so it picks up lambda(h) = -1
    assert v == {AS0: (-1) % p}
    c = ((-1 - 2) * -1) % p
    assert w.g_action("h", 0, v) == ({AS0: c} if c else {})


def test_constructor_errors():
    k = KPoly.kappa(3)
    with pytest.raises(ValueError):
        build_baby_wakimoto((k,), p=3)
    with pytest.raises(ValueError):
        build_baby_wakimoto({(0, -1): 1}, xi_pi={}, p=2)
    with pytest.raises(ValueError):
        build_baby_wakimoto((0,), xi={("b", -1): 1}, p=2)
    with pytest.raises(ValueError):
        build_baby_wakimoto((0,), xi={("a", 0): 1}, p=2)
    with pytest.raises(ValueError):
        build_baby_wakimoto_noncritical((0,), kappa=1, p=3)
    with pytest.raises(ValueError):
        build_baby_wakimoto((0,), xi_pi={(0, 1): 1}, p=2)


def test_nonzero_mode_weight_with_matching_character():
    # lambda_{-1} = 1 needs xi^pi(b_{-1})^p = lambda_{-1}^p - lambda_{-p} = 1
    w = build_baby_wakimoto({(0, 0): 1, (0, -1): 1}, xi_pi={(0, -1): 1}, p=2)
    assert not PCharacter(w.pchar.xi, w.pchar.xi_pi).graded
    assert verify_g_relations(w, 2).passed


def test_pcharacter_graded_flag():
    assert PCharacter().graded
    assert PCharacter(xi={("a*", 0): 1}).graded
    assert not PCharacter(xi={("a*", -1): 1}).graded


@pytest.mark.parametrize("p", [2, 3])
def test_minus_rho_is_a_well_defined_module(p):
    w = minus_rho_module(p)
    assert verify_well_defined(w, 2).passed
    assert verify_g_relations(w, 2).passed


@pytest.mark.parametrize("p", [2, 3, 5])
def test_character_small_depth(p):
    rep = verify_mathieu_character(p, 4)
    assert rep.passed
    assert rep.details["depth0"] == {str((-k,)): 1 for k in range(p)}


def test_character_pinned_values_p2():
    rep = verify_mathieu_character(2, 8)
    assert rep.passed
    assert rep.details["depth0"] == {"(0,)": 1, "(-1,)": 1}


def test_noncritical_module():
    w = build_baby_wakimoto_noncritical((2,), kappa=0, p=5)
    assert not w.critical
    assert verify_well_defined(w, 1).passed
    assert verify_g_relations(w, 1, mode_bound=1).passed


@given(st.sampled_from([2, 3]), st.data())
def test_iota_acts_by_zero_for_zero_character(p, data):
    lam = data.draw(st.integers(0, p - 1))
    w = build_baby_wakimoto((lam,), p=p)
    assert verify_well_defined(w, 1, mode_bound=1).passed


@pytest.mark.parametrize("p", [2, 3])
def test_minus_rho_has_no_deeper_singular_vectors(p):
    census = singular_census(minus_rho_module(p), 3 if p == 2 else 2)
    assert census["deeper"] == []
    assert [(d, wt) for d, wt, _ in census["depth0"]] == [(0, (0,))]


def test_positive_control_finds_singular_vectors():
    found = singular_vectors(vacuum_view(2, 0), 1, min_depth=1)
    kernels = [k for _, _, ker in found for k in ker]
    assert {((("e", -1), 1),): 1} in kernels
    assert {((("h", -1), 1),): 1} in kernels


def test_zero_weight_top_is_not_cyclic():
    # at lambda = 0 the top vector is killed by f_0, so it generates a proper submodule
    w = build_baby_wakimoto((0,), p=3)
    assert w.g_action("f", 0, w.highest_weight_vector) == {}
    assert w.g_action("e", 0, {AS0: 1}) == {(): 1}


def _brute_commutant(p, kappa, d):
    """Oracle: count vectors of a depth-d space annihilated by all x_n, n >= 0, by enumeration."""
    w = vacuum_view(p, kappa)
    m = w.module
    monos = [x for x in m.basis_enumerate(d) if m.depth(x) == d]
    by_weight = {}
    for x in monos:
        by_weight.setdefault(m.weight(x), []).append(x)
    total = 0
    for group in by_weight.values():
        count = 0
        for coeffs in product(range(p), repeat=len(group)):
            v = {x: c for x, c in zip(group, coeffs) if c}
            if all(is_zero(m.apply(lab, n, v)) for lab in m.data.labels for n in range(d + 1)):
                count += 1
        # count = p^dim
        dim = 0
        while p ** dim < count:
            dim += 1
        total += dim
    return total


@pytest.mark.parametrize("kappa", [0, 1])
def test_center_probe_p2(kappa):
    res = center_probe("VacuumV", 2, kappa, 2)
    t = res["table"]
    assert [t[d]["z0"] for d in range(3)] == [1, 0, 3]
    assert [t[d]["commutant"] for d in range(3)] == [_brute_commutant(2, kappa, d)
                                                     for d in range(3)]
    assert [t[d]["commutant"] for d in range(3)] == [1, 1, 4]
    assert res["z0_in_commutant"] and res["commutant_ge_z0"]
    assert t[2]["z0_vectors_rank"] == 3


def test_center_probe_rejects_other_kinds():
    with pytest.raises(ValueError):
        center_probe("FreeField", 2, 0, 1)


def test_iota_vectors_are_killed_by_positive_modes():
    w = vacuum_view(3, 1)
    m = w.module
    from modvertex.pcenter import iota_state
    v = iota_state("f", 1, m).vector
    for x in m.data.labels:
        for n in range(0, 4):
            out = m.apply(x, n, v)
            add_into(out, {}, 1, 3)
            assert out == {}
