import itertools
import logging

import numpy as np
import pytest

from credalclust._core import SingularSystemError, focal_parts, objective, update_mass
from credalclust.attribute import ecm_fit
from credalclust.data import euclidean_distances, load_bundled
from credalclust.focal import make_focal_matrix
from credalclust.metrics import credal_ri
from credalclust.relational import assign_medoids, ecmdd_fit, medoid_distances, recm_fit

from conftest import blobs, is_descending


def sqdist(x):
    return ((x[:, None, :] - x[None]) ** 2).sum(axis=2)


# -- RECM -------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(3))
def test_recm_matches_ecm_on_euclidean_input(seed):
    rng = np.random.default_rng(seed)
    x, _ = blobs(rng, 36, 3, 3)
    a = ecm_fit(x, 3, seed=seed, ntrials=2)
    b = recm_fit(sqdist(x), 3, seed=seed, ntrials=2)
    assert np.allclose(a.mass, b.mass, atol=1e-8)
    assert b.criterion == pytest.approx(a.criterion, rel=1e-8)
    # implicit prototypes realize the explicit centers
    assert np.allclose(b.prototypes @ x, a.prototypes, atol=1e-8)
    assert np.allclose(b.prototypes.sum(axis=1), 1.0)


def test_recm_from_initial_masses():
    rng = np.random.default_rng(4)
    x, _ = blobs(rng, 20, 2, 2)
    m0 = rng.dirichlet(np.ones(4), size=20)
    part = recm_fit(sqdist(x), 2, m0=m0)
    assert is_descending(part.diagnostics["history"])
    with pytest.raises(ValueError, match="m0"):
        recm_fit(sqdist(x), 2, m0=m0[:, :3])


def test_recm_zero_dissimilarities():
    part = recm_fit(np.zeros((5, 5)), 2)
    assert np.allclose(part.mass[:, 0], 0.0)
    assert np.allclose(part.mass[:, 1:], 1 / 3)


def test_recm_equilateral_triangle():
    d = np.ones((3, 3)) - np.eye(3)
    part = recm_fit(d, 3)
    single = part.focal.singleton_index()
    assert np.allclose(part.mass[:, single].sum(axis=1), 1.0)
    assert sorted(np.argmax(part.mass, axis=1).tolist()) == sorted(single.tolist())
    assert part.criterion == pytest.approx(0.0, abs=1e-12)


def test_recm_iris_subsample_agrees_with_ecm():
    iris = load_bundled("iris")
    idx = np.random.default_rng(0).choice(150, 30, replace=False)
    x = iris.x[idx]
    a = ecm_fit(x, 3, ntrials=3)
    b = recm_fit(euclidean_distances(x, squared=True), 3, ntrials=3)
    assert credal_ri(a, b) >= 0.95


def test_recm_clamps_non_euclidean_input(caplog):
    d = np.ones((6, 6)) - np.eye(6)
    d[0, 1] = d[1, 0] = 40.0
    d[2, 3] = d[3, 2] = 25.0
    with caplog.at_level(logging.WARNING, logger="credalclust"):
        part = recm_fit(d, 2, ntrials=3)
    assert part.diagnostics["negative_distance_clamps"] > 0
    assert "not Euclidean" in caplog.text
    assert np.all(part.mass >= 0) and np.allclose(part.mass.sum(axis=1), 1.0)


def test_recm_negative_implicit_distances_are_counted():
    # the midpoint of objects 0 and 2 is closer than zero to object 1
    d = np.array([[0.0, 1.0, 9.0], [1.0, 0.0, 1.0], [9.0, 1.0, 0.0]])
    m0 = np.zeros((3, 4))
    m0[[0, 2], 1] = 1.0
    m0[1, 2] = 1.0
    part = recm_fit(d, 2, m0=m0, maxit=1)
    assert part.diagnostics["negative_distance_clamps"] > 0
    assert np.all(part.mass >= 0)


def test_recm_all_mass_on_frame_is_singular():
    m0 = np.zeros((3, 4))
    m0[:, 3] = 1.0
    with pytest.raises(SingularSystemError) as info:
        recm_fit(np.ones((3, 3)) - np.eye(3), 2, m0=m0)
    assert info.value.iteration == 0


def test_recm_rejects_bad_matrices():
    with pytest.raises(ValueError):
        recm_fit(np.array([[0.0, 1.0], [2.0, 0.0]]), 1)
    with pytest.raises(ValueError):
        recm_fit(np.ones((2, 3)), 1)


# -- ECMdd ------------------------------------------------------------------


def two_groups(k=4, within=0.1, between=9.0):
    n = 2 * k
    d = np.full((n, n), between)
    d[:k, :k] = within
    d[k:, k:] = within
    np.fill_diagonal(d, 0.0)
    return d


def brute_ecmdd(d, c, delta2):
    focal = make_focal_matrix(c)
    s, card = focal_parts(focal)
    best = (np.inf, None)
    for med in itertools.permutations(range(len(d)), c):
        dist = medoid_distances(d, np.array(med), s, card)
        m = update_mass(dist, card, 1.0, 2.0, delta2)
        best = min(best, (objective(m, dist, card, 1.0, 2.0, delta2), med))
    return best


def test_ecmdd_matches_exhaustive_search():
    d = two_groups()
    part = ecmdd_fit(d, 2, ntrials=5, delta=3.0)
    crit, _ = brute_ecmdd(d, 2, 9.0)
    assert part.criterion == pytest.approx(crit, abs=1e-10)
    med = part.prototypes
    assert (med[0] < 4) != (med[1] < 4)


@pytest.mark.parametrize("seed", range(3))
def test_ecmdd_never_beats_exhaustive_search(seed):
    rng = np.random.default_rng(seed)
    x, _ = blobs(rng, 7, 2, 2)
    d = euclidean_distances(x)
    part = ecmdd_fit(d, 2, ntrials=3, seed=seed)
    crit, _ = brute_ecmdd(d, 2, 100.0)
    assert part.criterion >= crit - 1e-10
    assert is_descending(part.diagnostics["history"])


def test_ecmdd_n_equals_c():
    d = two_groups(k=1)[:2, :2] + np.array([[0, 1], [1, 0]])
    part = ecmdd_fit(d, 2)
    assert sorted(part.prototypes.tolist()) == [0, 1]
    assert part.criterion == 0.0
    assert np.allclose(part.mass[:, part.focal.singleton_index()].sum(axis=1), 1.0)


def test_assign_medoids_ties_and_collisions():
    assert assign_medoids(np.array([[1.0, 1.0, 2.0], [3.0, 0.0, 0.0]])).tolist() == [0, 1]
    assert assign_medoids(np.array([[0.0, 1.0], [0.0, 5.0]])).tolist() == [1, 0]


def test_duplicate_objects_get_identical_masses():
    rng = np.random.default_rng(13)
    x, _ = blobs(rng, 12, 2, 2)
    x[1] = x[0]
    part = ecmdd_fit(euclidean_distances(x), 2, ntrials=5)
    assert np.allclose(part.mass[0], part.mass[1], atol=1e-12)
    # identical cost columns: the lower index wins the tie
    assert 1 not in part.prototypes.tolist()
    assert assign_medoids(euclidean_distances(x)[[0, 5]]).tolist()[0] == 0


@pytest.mark.parametrize("k", [0.01, 4.0, 250.0])
def test_ecmdd_scale_covariance(k):
    rng = np.random.default_rng(11)
    x, _ = blobs(rng, 24, 3, 2)
    d = euclidean_distances(x)
    a = ecmdd_fit(d, 3, ntrials=3, delta=2.0)
    b = ecmdd_fit(k * d, 3, ntrials=3, delta=2.0 * np.sqrt(k))
    assert np.allclose(a.mass, b.mass, atol=1e-10)
    assert np.array_equal(a.prototypes, b.prototypes)
    assert b.criterion == pytest.approx(k * a.criterion, rel=1e-9)


def test_recm_scale_covariance():
    rng = np.random.default_rng(12)
    x, _ = blobs(rng, 24, 3, 2)
    a = recm_fit(sqdist(x), 3, delta=3.0)
    b = recm_fit(9.0 * sqdist(x), 3, delta=9.0)
    assert np.allclose(a.mass, b.mass, atol=1e-9)


def test_initial_medoid_validation():
    d = two_groups()
    with pytest.raises(ValueError, match="distinct"):
        ecmdd_fit(d, 2, medoids0=[1, 1])
    with pytest.raises(ValueError):
        ecmdd_fit(d, 2, medoids0=[0, 9])
    part = ecmdd_fit(d, 2, medoids0=[0, 3])
    assert part.diagnostics["trial_criteria"] == [part.criterion]
