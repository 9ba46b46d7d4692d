"""Reward oracle tests: evaluation, marginals, and structure checking."""

import numpy as np
import pytest

from fairpay.errors import InvalidSubsetError, ParameterError, SizeLimitError
from fairpay.families import gen_geometric_family, gen_random
from fairpay.rewards import (
    Additive,
    CappedAdditive,
    Coverage,
    ExplicitTable,
    SymmetricTwoClass,
    as_mask,
    check_structure,
    mask_to_indices,
)

STRUCT_TOL = 1e-12


def test_additive_eval():
    f = Additive([0.5, 0.5])
    assert f.value([0, 1]) == pytest.approx(1.0, abs=1e-12)
    assert f.value(0) == 0.0
    assert f.value([1]) == pytest.approx(0.5)


def test_empty_set_is_zero_for_all_kinds():
    kinds = [
        Additive([0.3, 0.4]),
        CappedAdditive([0.7, 0.7], 1.0),
        Coverage([0.5, 0.5], [[0], [1]]),
        ExplicitTable(2, [0.0, 0.2, 0.3, 0.4]),
        SymmetricTwoClass(0.5, 0.1, 3),
    ]
    for f in kinds:
        assert f.value(0) == 0.0


def test_geometric_family_singleton_value():
    inst = gen_geometric_family(2, 2)
    assert inst.reward.value([0]) == pytest.approx(0.5)  # group-1 agent


def test_marginal_additive():
    f = Additive([0.5, 0.5])
    assert f.marginal(1, [0]) == pytest.approx(0.5)


def test_marginal_capped():
    f = CappedAdditive([0.7, 0.7], 1.0)
    assert f.marginal(1, [0]) == pytest.approx(0.3)  # min(1, 1.4) - 0.7


def test_marginal_null_agent():
    f = Additive([0.4, 0.0, 0.3])
    assert f.marginal(1, [0, 2]) == 0.0


def test_marginal_removes_member_first():
    f = Additive([0.2, 0.3])
    assert f.marginal(0, [0, 1]) == pytest.approx(f.marginal(0, [1]))


def test_subset_encoding_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(1, 13))
        f = gen_random("additive", n, seed=int(rng.integers(0, 1000))).reward
        mask = int(rng.integers(0, 1 << n))
        assert f.value(mask) == f.value(mask_to_indices(mask))


def test_invalid_subset_errors():
    f = Additive([0.5, 0.5])
    with pytest.raises(InvalidSubsetError):
        f.value([2])
    with pytest.raises(InvalidSubsetError):
        f.value(1 << 2)
    with pytest.raises(InvalidSubsetError):
        f.marginal(5, 0)


def test_construction_rejections():
    with pytest.raises(ParameterError):
        Additive([0.8, 0.8])  # sums above 1
    with pytest.raises(ParameterError):
        Additive([-0.1, 0.5])
    with pytest.raises(ParameterError):
        ExplicitTable(2, [0.1, 0.2, 0.3, 0.4])  # f(empty) != 0
    with pytest.raises(ParameterError):
        ExplicitTable(2, [0.0, 0.2, 0.3])  # missing entries
    with pytest.raises(ParameterError):
        CappedAdditive([0.2], cap=1.5)
    with pytest.raises(ParameterError):
        Coverage([0.5, 0.6], [[0], [1]])  # element weights above 1
    with pytest.raises(ParameterError):
        SymmetricTwoClass(0.9, 0.2, 2)  # total above 1


def test_check_structure_additive_passes():
    report = check_structure(Additive([0.3, 0.4]))
    assert report.monotone and report.submodular
    assert report.witness is None
    assert report.checks > 0


def test_check_structure_coverage_passes():
    f = Coverage([0.2, 0.3, 0.4], [[0, 1], [1, 2], [0, 2]])
    report = check_structure(f)
    assert report.monotone and report.submodular


def test_check_structure_supermodular_witness():
    f = ExplicitTable(2, [0.0, 0.2, 0.2, 0.6])
    report = check_structure(f)
    assert report.monotone
    assert not report.submodular
    assert report.violated == "submodular"
    s, t, i = report.witness
    # the witness must actually violate decreasing marginals when re-evaluated
    assert t == s | (t & ~s) and not (t >> i) & 1
    gain_small = f.value(s | (1 << i)) - f.value(s)
    gain_large = f.value(t | (1 << i)) - f.value(t)
    assert gain_large > gain_small + STRUCT_TOL


def test_check_structure_monotone_witness():
    # adding agent 1 to {0} lowers the value
    f = ExplicitTable(2, [0.0, 0.5, 0.1, 0.3])
    report = check_structure(f)
    assert not report.monotone
    assert report.violated == "monotone"
    s, t, i = report.witness
    assert f.value(t) < f.value(s) - STRUCT_TOL


def test_check_structure_size_limit_and_sampling():
    f = Additive(np.full(20, 0.04))
    with pytest.raises(SizeLimitError):
        check_structure(f)
    with pytest.raises(ParameterError):
        check_structure(f, samples=100)  # no seed
    report = check_structure(f, samples=100, seed=3)
    assert report.monotone and report.submodular
    assert report.checks == 200  # one monotone + one submodular condition per sample


@pytest.mark.parametrize("kind", ["additive", "coverage", "capped_additive"])
def test_by_construction_kinds_are_monotone_submodular(kind):
    rng = np.random.default_rng(17)
    for _ in range(10):
        n = int(rng.integers(2, 9))
        f = gen_random(kind, n, seed=int(rng.integers(0, 10_000))).reward
        report = check_structure(f)
        assert report.monotone and report.submodular, report


@pytest.mark.parametrize("kind", ["additive", "coverage", "capped_additive"])
def test_eval_marginal_consistency(kind):
    rng = np.random.default_rng(23)
    for _ in range(10):
        n = int(rng.integers(2, 10))
        f = gen_random(kind, n, seed=int(rng.integers(0, 10_000))).reward
        for _ in range(20):
            mask = int(rng.integers(0, 1 << n))
            i = int(rng.integers(0, n))
            base = mask & ~(1 << i)
            assert f.value(base | (1 << i)) == pytest.approx(
                f.value(base) + f.marginal(i, base), abs=1e-12
            )
            assert f.marginal(i, base) >= -1e-12


def test_values_stay_in_unit_interval():
    for kind in ("additive", "coverage", "capped_additive"):
        f = gen_random(kind, 8, seed=41).reward
        table = f.value_table()
        assert table.min() >= 0.0 and table.max() <= 1.0


def test_value_table_matches_pointwise_eval():
    for kind in ("additive", "coverage", "capped_additive"):
        f = gen_random(kind, 7, seed=13).reward
        table = f.value_table()
        for mask in range(1 << 7):
            assert table[mask] == pytest.approx(f.value(mask), abs=1e-12)
    sym = SymmetricTwoClass(0.4, 0.05, 6)
    table = sym.value_table()
    for mask in range(1 << 7):
        assert table[mask] == pytest.approx(sym.value(mask), abs=1e-12)


def test_as_mask_rejects_bad_indices():
    with pytest.raises(InvalidSubsetError):
        as_mask([-1], 4)
    with pytest.raises(InvalidSubsetError):
        as_mask(16, 4)
    assert as_mask([0, 3], 4) == 0b1001
