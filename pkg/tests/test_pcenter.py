import pytest
from hypothesis import given
from hypothesis import strategies as st

from modvertex.fields import field_mode
from modvertex.fock import (VacuumV, add_into, heisenberg_module, is_zero, wakimoto_fock,
                            weyl_module)
from modvertex.pcenter import (RestrictedQuotient, iota_operator, iota_state,
                               pcenter_dims_by_enumeration, pcenter_graded_dims,
                               pcenter_image_fields, power_apply, restricted_quotient,
                               verify_centrality, verify_free_pcenter, verify_iota_commutes_Y,
                               verify_quotient_scalars, verify_state_field,
                               verify_wff_pcenter_images)
from modvertex.rootdata import sl2
from modvertex.scalars import KPoly
from modvertex.wff import basis_images

DATA = sl2()


def test_iota_state_reference_values():
    m = VacuumV(DATA, 3, 1)
    st_h = iota_state("h", 1, m)
    want = m.vec(("h", -1, 3))
    add_into(want, m.vec(("h", -3, 1)), -1, 3)
    assert st_h.vector == want and st_h.depth == 3
    for p in (2, 3, 5):
        mp = VacuumV(DATA, p, 0)
        st_e = iota_state("e", 1, mp)
        assert st_e.vector == mp.vec(("e", -1, p))
        assert iota_state("f", 2, mp).depth == 2 * p
    with pytest.raises(ValueError):
        iota_state("e", 0, m)


def test_iota_modes_on_vacuum_module():
    m = VacuumV(DATA, 2, 1)
    probe = m.vec(("f", -1, 1))
    # x = e, r = 1, p = 2: mode 2n + 1 is e_n^2
    for n in range(-2, 2):
        assert iota_operator(m, "e", n, probe) == m.apply_word([("e", n), ("e", n)], probe)
    # x = h: h_n^p - h_{np}
    want = m.apply_word([("h", -1), ("h", -1)], probe)
    add_into(want, m.apply("h", -2, probe), -1, 2)
    assert iota_operator(m, "h", -1, probe) == want


@pytest.mark.parametrize("p", [2, 3])
def test_state_field_and_iota_small(p):
    assert verify_state_field(p, 1, 3).passed
    assert verify_iota_commutes_Y(p, 1, 3).passed
    assert verify_centrality(p, 0, 2).passed
    assert verify_free_pcenter(p, 2).passed


def test_state_field_formal_level():
    assert verify_state_field(2, KPoly.kappa(2), 2, mode_bound=1).passed


def test_non_central_operator_is_detected():
    # x_n^p alone (without the p-power correction) is not central for x = h
    m = VacuumV(DATA, 3, 1)
    v = m.vec(("e", -1, 1))
    op = lambda w: power_apply(lambda u: m.apply("h", -1, u), w, 3)  # noqa: E731
    lhs = m.apply("e", 0, op(v))
    add_into(lhs, op(m.apply("e", 0, v)), -1, 3)
    assert lhs == {m.mono(("e", -3, 1), ("e", -1, 1)): 1}
    corrected = m.apply("e", 0, iota_operator(m, "h", -1, v))
    add_into(corrected, iota_operator(m, "h", -1, m.apply("e", 0, v)), -1, 3)
    assert is_zero(corrected)


@pytest.mark.parametrize("kappa", [0, 1])
def test_pcenter_images_numeric_p2(kappa):
    rep = verify_wff_pcenter_images(2, kappa, 2, mode_bound=1, comm_bound=1)
    assert rep.passed, rep.witness
    assert rep.details["eta"] == {"found": 0, "expected": 0}
    assert rep.details["eta_first_power_variant_matches"] is True


@pytest.mark.parametrize("p", [2, 3])
def test_pcenter_images_formal_level(p):
    k = KPoly.kappa(p)
    rep = verify_wff_pcenter_images(p, k, 2 if p == 2 else 1, mode_bound=1, comm_bound=1)
    assert rep.passed, rep.witness
    assert rep.details["eta"]["found"] == k ** p - k
    assert rep.details["eta_first_power_variant_matches"] is False
    for sub in ("commutes-with-a*", "commutes-with-a", "commutes-with-b"):
        assert rep.details[sub]["passed"]


def test_h_image_needs_the_derivative_correction():
    p = 2
    mod = wakimoto_fock(DATA, p, 1)
    im = basis_images(1)
    probe = mod.vec(("b", -1, 1))
    lhs = power_apply(lambda w: field_mode(im["h"], -1, mod, w), probe, p)
    add_into(lhs, field_mode(im["h"], -2, mod, probe), -1, p)
    closed = pcenter_image_fields(p, 1)["h"]
    assert lhs == field_mode(closed, p - 1 - p, mod, probe)
    # b^2 alone misses the -b_{-2} contribution
    only_square = power_apply(lambda w: mod.apply("b", -1, w), probe, p)
    assert only_square != {k: v for k, v in lhs.items() if not mod.split(k)[0]}


def test_quotient_reference_dimensions():
    m0 = restricted_quotient(weyl_module(DATA, 2))
    assert len([x for x in m0.basis_enumerate(0)]) == 2
    pi0 = restricted_quotient(heisenberg_module(DATA, 2, 1))
    assert sorted(pi0.basis_enumerate(2)) == sorted(
        [(), ((("b", -1), 1),), ((("b", -2), 1),)])


@pytest.mark.parametrize("p", [2, 3])
def test_quotients_have_scalar_pcenter_action(p):
    v0 = restricted_quotient(VacuumV(DATA, p, 1))
    assert verify_quotient_scalars(v0, 2 * p, mode_bound=2).passed
    m0 = restricted_quotient(weyl_module(DATA, p))
    assert verify_quotient_scalars(m0, 2).passed
    pi0 = restricted_quotient(heisenberg_module(DATA, p, 1))
    assert verify_quotient_scalars(pi0, 2 * p).passed


@given(st.sampled_from([2, 3]), st.dictionaries(
    st.tuples(st.sampled_from(DATA.labels), st.integers(-2, -1)), st.integers(0, 2), max_size=3))
def test_vacuum_quotient_with_scalars(p, scalars):
    q = RestrictedQuotient(VacuumV(DATA, p, 1), scalars)
    assert verify_quotient_scalars(q, p + 1, mode_bound=2).passed


@given(st.sampled_from([2, 3]), st.dictionaries(
    st.tuples(st.sampled_from(["a", "a*", "b"]), st.integers(-2, -1)), st.integers(0, 2),
    max_size=3))
def test_free_quotient_with_scalars(p, scalars):
    q = RestrictedQuotient(wakimoto_fock(DATA, p, 1), scalars)
    assert verify_quotient_scalars(q, 2, mode_bound=2).passed


def test_pcenter_dimensions_reference():
    assert pcenter_graded_dims(DATA, 2, 4) == {0: 1, 1: 0, 2: 3, 3: 0, 4: 9}


@given(st.sampled_from([2, 3, 5]), st.integers(0, 10))
def test_pcenter_dimension_count_agrees_with_enumeration(p, depth):
    assert pcenter_graded_dims(DATA, p, depth) == pcenter_dims_by_enumeration(DATA, p, depth)
