import numpy as np
import pytest

from fiberlab import CoordinateAction, driving_preset, range_ratio_curve, step, visit_record
from fiberlab.actions import default_checkpoints

# generator indices for the lattice and free-group alphabets
E1, NEG_E1, E2, NEG_E2 = 0, 1, 2, 3
A, A_INV, B, B_INV = 0, 1, 2, 3


def walk(kind, letters):
    action = CoordinateAction.initial(kind)
    for letter in letters:
        action = step(action, letter)
    return action


def test_initial_state_is_identity():
    assert CoordinateAction.initial("z2").state.pair() == (0, 0)
    assert CoordinateAction.initial("f2").state.word() == ()
    assert CoordinateAction.initial("free-monoid").state.word() == ()


def test_step_examples():
    assert walk("z2", [E1]).state.pair() == (1, 0)
    assert walk("f2", [A, A_INV]).state.word() == ()
    assert walk("free-monoid", [0, 1, 1]).state.word() == (0, 1, 1)


def test_step_rejects_foreign_symbols():
    with pytest.raises(ValueError):
        step(CoordinateAction.initial("z2"), 4)
    with pytest.raises(ValueError):
        step(CoordinateAction.initial("free-monoid", alphabet_size=2), 2)


def test_f2_left_multiplication_prepends():
    # stepping a then b gives the product b*a, head letter last stepped
    assert walk("f2", [A, B]).state.word() == (B, A)


def test_f2_step_then_inverse_step_returns():
    inverse = (1, 0, 3, 2)
    rng = np.random.default_rng(3)
    for _ in range(50):
        base = walk("f2", [int(x) for x in rng.integers(0, 4, rng.integers(0, 10))])
        for letter in range(4):
            back = step(step(base, letter), inverse[letter])
            assert back.state == base.state
            assert back.state.word() == base.state.word()


def test_f2_retraces_coordinates_under_inverse_walk():
    inverse = (1, 0, 3, 2)
    rng = np.random.default_rng(4)
    letters = [int(x) for x in rng.integers(0, 4, 40)]
    action = CoordinateAction.initial("f2")
    trace = [action.state]
    for letter in letters:
        action = step(action, letter)
        trace.append(action.state)
    for letter, previous in zip(reversed(letters), reversed(trace[:-1])):
        action = step(action, inverse[letter])
        assert action.state == previous


def test_visit_record_examples():
    record = visit_record("z2", [E1, NEG_E1])
    assert [c.pair() for c in record.coordinates] == [(0, 0), (1, 0)]
    assert record.distinct_count == 2

    record = visit_record("z2", [E1, NEG_E1, E1])
    assert [c.pair() for c in record.coordinates] == [(0, 0), (1, 0), (0, 0)]
    assert record.distinct_count == 2

    assert visit_record("free-monoid", []).distinct_count == 0


def test_visit_record_counts_are_monotone_and_bounded():
    rng = np.random.default_rng(11)
    for kind in ("free-monoid", "z2", "f2"):
        letters = [int(x) for x in rng.integers(0, 4, 200)]
        record = visit_record(kind, letters)
        counts = record.distinct_counts
        assert counts[0] == 1
        assert np.all(np.diff(counts) >= 0)
        assert np.all(counts <= np.arange(1, len(letters) + 1))


def test_free_monoid_all_prefixes_distinct():
    rng = np.random.default_rng(12)
    letters = [int(x) for x in rng.integers(0, 3, 500)]
    record = visit_record("free-monoid", letters, alphabet_size=3)
    assert record.distinct_count == 500
    assert np.array_equal(record.distinct_counts, np.arange(1, 501))


def test_f2_uncancellable_words_visit_distinct_coordinates():
    # no letter followed by its inverse, so all prefix products differ
    letters = [A, B, A, B_INV, A, A, B]
    record = visit_record("f2", letters)
    assert record.distinct_count == len(letters)


def test_z2_action_is_abelian():
    rng = np.random.default_rng(7)
    for _ in range(30):
        letters = [int(x) for x in rng.integers(0, 4, rng.integers(1, 13))]
        final = walk("z2", letters).state.pair()
        perm = list(letters)
        rng.shuffle(perm)
        assert walk("z2", perm).state.pair() == final


def test_range_ratio_curve_is_one_for_free_monoid_and_f2():
    f2 = driving_preset("f2-markov")
    for kind in ("free-monoid", "f2"):
        curve = range_ratio_curve(kind, f2, 2000, seeds=[1, 2, 3])
        assert all(ratio == 1.0 for _, ratio in curve)


def test_range_ratio_curve_decreases_for_z2():
    z2 = driving_preset("z2-uniform")
    curve = range_ratio_curve("z2", z2, 10 ** 4, seeds=range(5), checkpoints=[100, 1000, 10000])
    ratios = [ratio for _, ratio in curve]
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[-1] < ratios[0]


def test_default_checkpoints_are_sorted_and_bounded():
    points = default_checkpoints(10 ** 5)
    assert points == sorted(set(points))
    assert points[-1] == 10 ** 5
    assert points[0] >= 1
