"""Central extensions by 2-cocycles and the solvable-factor covering bound."""

import numpy as np
import pytest

from glab.errors import InputError
from glab.extensions import (
    build_extension,
    carry_cocycle,
    coboundary_cocycle,
    commutator_expansion_check,
    complement_scan,
    derived_length_of_subgroup,
    identity_inverse_check,
    image_bound_check,
    iwasawa_certificate,
    split_check,
    symmetric_class_with_identity,
    upper_triangular_mask,
    validate_cocycle,
)
from glab.groupcore import (
    AbSpec,
    CycSpec,
    SymSpec,
    abelian_invariants,
    build_group,
    element_text,
    is_subgroup_mask,
    is_symmetric_mask,
    mask_from_indices,
    parse_group_spec,
)


@pytest.fixture(scope="module")
def carry_ext():
    base_spec, p, table = carry_cocycle()
    return build_extension(base_spec, p, table)


# -- cocycle validation


def test_validate_cocycle_accepts_coboundaries():
    for base_text, p in (("Sym(3)", 2), ("Cyc(8)", 3), ("Ab(2,2)", 5)):
        base = build_group(parse_group_spec(base_text))
        table = coboundary_cocycle(base, p, seed=3)
        got = validate_cocycle(base, table, p)
        assert got.shape == (base.order, base.order)


def test_validate_cocycle_rejects_perturbation():
    base = build_group(AbSpec((2, 2)))
    table = coboundary_cocycle(base, 3, seed=7)
    bad = table.copy()
    bad[1, 2] = (bad[1, 2] + 1) % 3
    with pytest.raises(InputError) as e:
        validate_cocycle(base, bad, 3)
    assert e.value.code == "invalid_cocycle"
    assert e.value.details["triple"] == [1, 1, 2]
    assert e.value.details == {"triple": [1, 1, 2], "lhs": 2, "rhs": 0}


# -- the carry extension: Z/4 as a nonsplit extension of Z/2 by Z/2


def test_carry_extension_is_cyclic_of_order_four(carry_ext):
    spec, E = carry_ext
    assert E.order == 4
    assert E.is_abelian()
    assert abelian_invariants(E) == (4,)
    assert [element_text(E, i) for i in range(4)] == [
        "[0|0]", "[0|1]", "[1|0]", "[1|1]"]


def test_carry_identity_inverse_certificate(carry_ext):
    spec, E = carry_ext
    assert identity_inverse_check(E, spec) == {
        "order": 4, "identity": "[0|0]", "checked": 4}


def test_carry_does_not_split(carry_ext):
    spec, E = carry_ext
    assert split_check(E, spec) == {
        "splits": False, "complement": None, "assignments_tried": 2}
    assert complement_scan(E, spec) == {"splits": False, "complement": None}


def test_carry_image_bound(carry_ext):
    spec, E = carry_ext
    rep = image_bound_check(E, spec, n_max=4)
    assert rep["holds"] and rep["n_max"] == 4
    assert rep["levels"][1] == {
        "observed": [0, 1], "bound": [0, 1], "contained": True}


# -- coboundary extensions always split


def test_coboundary_split_frozen_example():
    spec, E = build_extension(AbSpec((2, 2)), 3, coboundary_cocycle(
        build_group(AbSpec((2, 2))), 3, seed=7))
    assert split_check(E, spec) == {
        "splits": True, "complement": [0, 6, 7, 8], "assignments_tried": 6}
    assert complement_scan(E, spec)["splits"] is True


@pytest.mark.parametrize("base_text", ["Sym(3)", "Cyc(8)", "Ab(2,2,2)"])
@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_coboundary_battery_splits(base_text, p, seed):
    base = build_group(parse_group_spec(base_text))
    table = coboundary_cocycle(base, p, seed=seed)
    spec, E = build_extension(base.spec, p, table)
    assert E.order == p * base.order
    rep = split_check(E, spec)
    assert rep["splits"]
    comp = mask_from_indices(E, rep["complement"])
    assert is_subgroup_mask(E, comp)
    assert int(comp.sum()) == base.order


def test_coboundary_identity_inverse_and_bound():
    base = build_group(SymSpec(3))
    for seed in range(3):
        spec, E = build_extension(base.spec, 3,
                                  coboundary_cocycle(base, 3, seed=seed))
        assert identity_inverse_check(E, spec)["checked"] == E.order
        assert image_bound_check(E, spec, n_max=4)["holds"]


# -- commutator expansion


def test_commutator_expansion_explicit_and_random(sym6, sl27):
    got = commutator_expansion_check(sym6, count=500, seed=1)
    assert got == {"checked": 500, "violations": 0}
    got = commutator_expansion_check(sl27, count=300, seed=2)
    assert got == {"checked": 300, "violations": 0}
    got = commutator_expansion_check(sym6, quadruples=[(1, 2, 3, 4), (5, 0, 2, 1)])
    assert got == {"checked": 2, "violations": 0}


# -- solvable-factor covering certificate


def test_upper_triangular_borel(sl25):
    B = upper_triangular_mask(sl25)
    assert int(B.sum()) == 20
    assert is_subgroup_mask(sl25, B)
    assert derived_length_of_subgroup(sl25, B) == 2


def test_derived_length_premises(sl25):
    with pytest.raises(InputError) as e:
        derived_length_of_subgroup(sl25, mask_from_indices(sl25, [0, 1, 2]))
    assert e.value.code == "premise_violation"
    whole = np.ones(sl25.order, dtype=bool)
    with pytest.raises(InputError) as e:
        derived_length_of_subgroup(sl25, whole)  # perfect, so never solvable
    assert e.value.code == "premise_violation"
    assert e.value.details.get("derived_stabilized")


def test_iwasawa_certificate_sl25(sl25):
    A = symmetric_class_with_identity(sl25, sl25.index[(0, 1, 4, 0)])
    assert int(A.sum()) == 31
    assert A[0] and is_symmetric_mask(sl25, A)
    B = upper_triangular_mask(sl25)
    assert iwasawa_certificate(sl25, A, B) == {
        "N": 1, "M": 2, "bound": 16, "k_min": 2, "holds": True}


def test_iwasawa_premises(sl25, sym3):
    A = symmetric_class_with_identity(sl25, sl25.index[(0, 1, 4, 0)])
    B = upper_triangular_mask(sl25)

    with pytest.raises(InputError) as e:
        iwasawa_certificate(sym3, np.ones(6, dtype=bool), np.ones(6, dtype=bool))
    assert "perfect" in e.value.message

    noe = A.copy()
    noe[0] = False
    with pytest.raises(InputError) as e:
        iwasawa_certificate(sl25, noe, B)
    assert "identity" in e.value.message

    w = sl25.index[(0, 1, 4, 0)]
    lopsided = mask_from_indices(sl25, [0, sl25.mul(w, w), 1])
    if not is_symmetric_mask(sl25, lopsided):
        with pytest.raises(InputError) as e:
            iwasawa_certificate(sl25, lopsided, B)
        assert "symmetric" in e.value.message

    not_normal = mask_from_indices(sl25, sorted({0, 1, sl25.inv(1)}))
    with pytest.raises(InputError) as e:
        iwasawa_certificate(sl25, not_normal, B)
    assert "normal" in e.value.message

    center_only = sl25.center_mask()
    with pytest.raises(InputError) as e:
        iwasawa_certificate(sl25, center_only, B)
    assert "cover" in e.value.message
