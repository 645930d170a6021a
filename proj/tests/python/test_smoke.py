import numpy as np
import pytest

import ecvnet


def test_block_model_selection():
    inst = ecvnet.gen_block_model(n=200, K=2, lam=20.0, degree_corrected=False, seed=3)
    a = inst["A"]
    assert a.n == 200 and not a.directed
    res = ecvnet.select_block_model(a, kmax=3, seed=4)
    assert str(res.chosen) == "SBM-2"
    assert res.losses.shape == (3, 6)
    assert len(inst["truth"]) == 200


def test_network_construction_and_errors():
    a = ecvnet.Network.from_edges(3, np.array([[0, 1], [1, 2]]))
    assert a.nnz == 4
    assert a.dense()[1, 0] == 1.0
    with pytest.raises(ValueError):
        ecvnet.Network.from_edges(3, np.array([[0, 0]]))
    b = ecvnet.Network.from_dense(a.dense())
    assert np.array_equal(b.dense(), a.dense())


def test_partial_svd_matches_numpy():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((40, 30))
    u, s, v = ecvnet.partial_svd(m, 3)
    ref = np.linalg.svd(m, compute_uv=False)[:3]
    assert np.allclose(s, ref, rtol=1e-9)
    assert u.shape == (40, 3) and v.shape == (30, 3)


def test_rank_selection_and_metrics():
    inst = ecvnet.gen_rdpg_directed(n=200, K=2, seed=5)
    res = ecvnet.select_rank(inst["A"], kmax=4, loss="auc", seed=6)
    assert res.chosen.family == "RANK" or res.chosen.value >= 1
    assert ecvnet.auc([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.6]) == 0.75
    assert ecvnet.sse_loss([1, 0, 0], [0.5, 0.5, 0]) == pytest.approx(1 / 6)
    assert ecvnet.clustering_accuracy([0, 1, 1, 1], [0, 0, 1, 1]) == 0.75
    assert ecvnet.ccd([0, 1, 1], [1, 1, 0], [(0, 1), (0, 2), (1, 2)]) == 2.0


def test_stability_and_smoothing():
    c = ecvnet.select_rank(ecvnet.gen_rdpg_directed(n=100, K=1, seed=1)["A"], kmax=2).chosen
    assert ecvnet.stability_select([c, c], "mode") == c
    w = np.full((6, 6), 0.3)
    assert np.allclose(ecvnet.neighborhood_smoothing(w, 0.4), 0.3)
