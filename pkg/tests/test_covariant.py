"""Representation of the pair on the two quotient spaces, plus the gates."""

import numpy as np
import pytest

from starint import (
    Algebra,
    CovariantError,
    amplified_interaction,
    build_covrep,
    check_commutation_22,
    check_corner_isomorphisms,
    check_corner_norms,
    check_derive_roundtrip,
    check_nondegeneracy,
    check_unit_relations,
    faithful_extension,
    flip_interaction,
    identity_interaction,
    with_zero_s,
)


def test_flip_rep_oracle():
    rep = build_covrep(flip_interaction())
    assert (rep.r, rep.s, rep.n) == (1, 1, 2)
    # the shift sends the second basis vector onto the first, nothing else
    assert np.array_equal(rep.smat, np.array([[0, 1], [0, 0]], dtype=complex))
    a = rep.interaction.algebra.from_coords([3.0, 7.0])
    assert np.allclose(rep.pi_of(a), np.diag([3.0, 7.0]))
    assert max(rep.residuals.values()) == 0.0


def test_flip_gates_are_one():
    rep = build_covrep(flip_interaction())
    out = check_nondegeneracy(rep)
    assert out["nondegenerate"] == 1.0
    assert out["implication_violation"] == 0.0
    for key in ("gate_range_v", "gate_generated_v", "gate_range_h", "gate_generated_h"):
        assert out[key] == pytest.approx(1.0)


def test_zero_s_is_degenerate_without_violation():
    rep = with_zero_s(build_covrep(flip_interaction()))
    out = check_nondegeneracy(rep)
    assert out["nondegenerate"] == 0.0
    assert out["implication_violation"] == 0.0
    assert out["gate_range_v"] == 0.0


def test_structure_checks_tiny_on_fixtures():
    reps = [
        build_covrep(flip_interaction()),
        build_covrep(identity_interaction(Algebra((2,)))),
        build_covrep(amplified_interaction(flip_interaction(), 2)),
    ]
    for rep in reps:
        for fn in (check_commutation_22, check_corner_isomorphisms,
                   check_corner_norms, check_unit_relations):
            out = fn(rep)
            assert max(out.values()) <= 1e-9, (fn.__name__, out)


def test_faithful_extension_flip():
    rep = build_covrep(flip_interaction())
    ext = faithful_extension(rep)
    assert ext.injectivity == pytest.approx(np.sqrt(2))
    a = rep.interaction.algebra.from_coords([3.0, 7.0])
    big = ext.pi_of(a)
    assert big.shape[0] > rep.pi_of(a).shape[0]
    # original block sits in the top-left corner
    assert np.allclose(big[: rep.pi.shape[1], : rep.pi.shape[1]], rep.pi_of(a))


def test_faithful_extension_separates_elements():
    rep = build_covrep(flip_interaction())
    ext = faithful_extension(rep)
    a = rep.interaction.algebra.from_coords([1.0, 0.0])
    b = rep.interaction.algebra.from_coords([0.0, 1.0])
    assert np.abs(ext.pi_of(a) - ext.pi_of(b)).max() > 0.5


def test_derive_roundtrip_exact():
    for inter in (flip_interaction(), identity_interaction(Algebra((2,)))):
        rep = build_covrep(inter)
        out = check_derive_roundtrip(rep)
        assert max(out.values()) <= 1e-9, out


def test_build_rejects_tampered_pair():
    import dataclasses

    from starint import LinMap

    inter = flip_interaction()
    doubled = dataclasses.replace(inter, v=LinMap(inter.algebra, 2.0 * inter.v.matrix))
    with pytest.raises(CovariantError) as err:
        build_covrep(doubled)
    assert err.value.residuals["partial_isometry"] == pytest.approx(np.sqrt(2))
    assert err.value.residuals["covariance_v"] == pytest.approx(2.0)


def test_covariant_error_carries_residuals():
    err = CovariantError("bad", residuals={"partial_isometry": 1.0})
    assert err.residuals["partial_isometry"] == 1.0
