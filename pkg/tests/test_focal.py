from math import comb

import numpy as np
import pytest

from credalclust.focal import FocalMatrix, FrameSpec, make_focal_matrix


def test_full_c3_canonical_order():
    f = make_focal_matrix(3, "full")
    expected = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
    assert f.tolist() == expected


def test_simple_c2():
    assert make_focal_matrix(2, "simple").tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_pairs_c4_all_pairs():
    f = make_focal_matrix(4, "pairs")
    assert f.f == 4 + 2 + 6
    assert np.all(np.diff(f.codes) > 0)


@pytest.mark.parametrize("c", range(2, 7))
def test_counts(c):
    assert make_focal_matrix(c, "full").f == 2**c
    assert make_focal_matrix(c, "simple").f == c + 2
    if c >= 3:
        assert make_focal_matrix(c, "pairs").f == c + 2 + comb(c, 2)


def test_pairs_c2_collapses_onto_omega():
    # the only 2-subset of a 2-cluster frame is the frame itself
    f = make_focal_matrix(2, "pairs")
    assert f.tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_supplied_pairs_and_no_omega():
    f = make_focal_matrix(4, "pairs", pairs=[(1, 2), (3, 4)], include_omega=False)
    sets = [f.set_string(j) for j in range(f.f)]
    assert sets == ["{}", "{1}", "{2}", "{1,2}", "{3}", "{4}", "{3,4}"]


def test_no_omega_keeps_singleton_frame():
    assert make_focal_matrix(1, "full", include_omega=False).tolist() == [[0], [1]]
    assert make_focal_matrix(3, "full", include_omega=False).f == 7


@pytest.mark.parametrize("pairs", [[(1, 1)], [(0, 2)], [(1, 5)], [(1, 2), (2, 1)], [(1, 2, 3)]])
def test_invalid_pairs_rejected(pairs):
    with pytest.raises(ValueError):
        make_focal_matrix(4, "pairs", pairs=pairs)


def test_bad_arguments():
    with pytest.raises(ValueError):
        make_focal_matrix(0)
    with pytest.raises(ValueError):
        make_focal_matrix(3, "weird")
    with pytest.raises(ValueError):
        make_focal_matrix(3, "simple", pairs=[(1, 2)])


def test_focal_matrix_validation():
    with pytest.raises(ValueError, match="empty set"):
        FocalMatrix([[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="canonical"):
        FocalMatrix([[0, 0], [0, 1], [1, 0]])
    with pytest.raises(ValueError, match="singletons"):
        FocalMatrix([[0, 0], [1, 0], [1, 1]])
    with pytest.raises(ValueError):
        FocalMatrix([[0, 0], [2, 0]])


def test_lookup_helpers():
    f = make_focal_matrix(3)
    assert f.singleton_index().tolist() == [1, 2, 4]
    assert f.index_of([0, 2]) == 5
    assert f.members(6) == (1, 2)
    assert f.set_string(0) == "{}"
    with pytest.raises(KeyError):
        make_focal_matrix(3, "simple").index_of([0, 1])


def test_frame_spec():
    assert FrameSpec(2, ("a", "b")).label(1) == "b"
    assert FrameSpec(2).label(0) == "1"
    with pytest.raises(ValueError):
        FrameSpec(0)
    with pytest.raises(ValueError):
        FrameSpec(2, ("a", "a"))
    with pytest.raises(ValueError):
        FrameSpec(2, ("a",))
