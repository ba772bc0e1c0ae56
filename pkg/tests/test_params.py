import numpy as np
import pytest

from painleve_dyn.errors import AmbiguousNearWall
from painleve_dyn.params import (
    CARTAN,
    BParam,
    DynkinType,
    KappaParam,
    WeylElement,
    b_to_a,
    b_to_theta,
    below_closure,
    classify_stratum,
    discriminant,
    discriminant_kappa,
    kappa_to_b,
    rh,
    table_matches,
    table_type,
    wall_conditions,
    weyl_apply,
    weyl_apply_b,
)

from conftest import FAMILY_ROWS, family_sample


def test_d4_point_chain():
    k = KappaParam((0, 0, 0, 0, 1))
    b = kappa_to_b(k)
    assert np.allclose(b.b, (1, 1, 1, 1, 1))
    assert np.allclose(b_to_a(b).a, (2, 2, 2, 2))
    assert np.allclose(rh(k).t, (8, 8, 8, 28))


def test_kappa_constraint_enforced():
    with pytest.raises(ValueError):
        KappaParam((0, 0, 0, 0, 0))


def test_from_free_satisfies_constraint(rng):
    k = KappaParam.random(rng)
    assert abs(k.constraint_residual()) < 1e-14


def test_b_constraint_and_completion(rng):
    b = BParam.from_b1234(1.3, 0.2j + 1, -0.7, 2.0)
    assert abs(b.constraint_residual()) < 1e-12
    with pytest.raises(ValueError):
        BParam((1, 1, 1, 1, 2))


def test_discriminant_ratio(rng):
    for _ in range(20):
        k = KappaParam.random(rng, scale=0.8)
        d = discriminant(kappa_to_b(k)).value
        assert d / discriminant_kappa(k) == pytest.approx(2**24, rel=1e-8)


def test_discriminant_vanishes_exactly_on_walls(rng):
    k = KappaParam.random(rng)
    assert abs(discriminant(kappa_to_b(k)).value) > 1e-6
    assert abs(discriminant(BParam((1, 1, 1, 1, 1))).value) == 0


@pytest.mark.parametrize("i", range(5))
def test_weyl_generator_on_kappa(i, rng):
    k = KappaParam.random(rng)
    w = weyl_apply(WeylElement((i,)), k)
    expect = np.array(k.k) - k.k[i] * CARTAN[i]
    assert np.allclose(w.k, expect)
    # reflections are involutions
    assert np.allclose(weyl_apply(WeylElement((i,)), w).k, k.k)


def test_weyl_word_composition(rng):
    k = KappaParam.random(rng)
    w = WeylElement((1, 0))  # apply 0 first, then 1
    step = weyl_apply(WeylElement((1,)), weyl_apply(WeylElement((0,)), k))
    assert np.allclose(weyl_apply(w, k).k, step.k)
    assert np.allclose(weyl_apply(WeylElement((1,)) * WeylElement((0,)), k).k, step.k)


def test_permutation_leaves_theta_invariant(rng):
    k = KappaParam.random(rng)
    for p in ((2, 1, 3, 4), (1, 3, 2, 4), (1, 2, 4, 3)):
        w = WeylElement((p,))
        assert np.allclose(b_to_theta(weyl_apply_b(w, kappa_to_b(k))).t,
                           b_to_theta(kappa_to_b(weyl_apply(w, k))).t)


def test_wall_conditions_generic_empty(rng):
    b = kappa_to_b(KappaParam.random(rng))
    assert not any(c.fired for c in wall_conditions(b))
    assert classify_stratum(b).tag == "Empty"


def test_near_wall_is_ambiguous():
    b = BParam.from_b1234(1 + 5e-9, 1.3, 0.7 + 0.2j, 1.9)
    with pytest.raises(AmbiguousNearWall):
        wall_conditions(b)
    # comfortably inside the band it is a wall
    assert classify_stratum(BParam.from_b1234(1 + 1e-13, 1.3, 0.7 + 0.2j, 1.9)).tag == "A1"


def test_d4_golden():
    dt = classify_stratum(BParam((1, 1, 1, 1, 1)))
    assert dt.tag == "D4"
    assert table_type(BParam((1, 1, 1, 1, 1))).tag == "D4"


@pytest.mark.parametrize("tag,m", FAMILY_ROWS)
def test_family_rows_classify(tag, m, rng):
    for _ in range(5):
        b = family_sample(tag, m, rng)
        assert table_type(b).tag == tag
        assert classify_stratum(b).tag == tag
        assert (tag, m) in {(t, mm) for t, mm, _ in table_matches(b)}


def test_conic_with_coincidence_is_two_a1():
    # b1 b2 b3 b4 = 1 and b1 b4 = b2 b3 force b2 b3 = 1 here; the curves are disjoint
    b1, b2 = 1.3 + 0.1j, 0.6 - 0.4j
    b = BParam.from_b1234(b1, b2, 1 / b2, 1 / b1)
    fired = {c.name for c in wall_conditions(b) if c.fired}
    assert fired == {"C1", "C3"}
    assert classify_stratum(b).tag == "A1x2"


def test_line_with_coincidence_is_a2():
    # derived from the conditions, not from the garbled family row
    b2, b3 = 1.3 + 0.1j, 0.6 - 0.4j
    b = BParam.from_b1234(1, b2, b3, b2 * b3)
    fired = {c.name for c in wall_conditions(b) if c.fired}
    assert fired == {"C2", "C3"}
    assert classify_stratum(b).tag == "A2"


def test_closure_relation():
    assert "D4" in below_closure("A1")
    assert "A1" not in below_closure("D4")
    with pytest.raises(ValueError):
        DynkinType("E6")
