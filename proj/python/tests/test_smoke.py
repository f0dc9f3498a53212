import csv
import io
import math

import pytest

import sbmchrom


def test_q_and_w():
    q = sbmchrom.build_q([[0.5]])
    assert q[0][0] == pytest.approx(math.log(2))
    assert sbmchrom.w_value([1, 1], [[1, 3], [3, 1]]) == pytest.approx(4.0)
    assert sbmchrom.is_pseudodefinite([[1, 0], [0, 1]])


def test_w_star_routes_agree():
    q = [[1.0, 0.2], [0.2, 2.0]]
    brute = sbmchrom.w_star_bruteforce([3, 4], q)
    solved = sbmchrom.w_star_solve([3, 4], q, seed=1)
    assert solved["w_sum"] <= brute["w_sum"] + 1e-6
    assert sum(p[0] for p in brute["parts"]) == 3


def test_graphs_and_colourings():
    k5 = sbmchrom.blow_up([[0, 1], [1, 0]], [2, 3])
    assert k5.num_edges == 10
    assert sbmchrom.exact_chromatic(k5) == 5
    assert sbmchrom.dsatur(k5)["num_colours"] == 5
    assert sbmchrom.max_avg_degree(k5) == (4, 1)
    g = sbmchrom.sample_sbm([20, 20], [[0.5, 0.1], [0.1, 0.5]], 3)
    assert g == sbmchrom.sample_sbm([20, 20], [[0.5, 0.1], [0.1, 0.5]], 3)
    assert sbmchrom.Graph.from_json(g.to_json()) == g
    ext = sbmchrom.extraction([20, 20], [[0.5, 0.1], [0.1, 0.5]], g, seed=2)
    colour = ext["colour_of"]
    assert all(colour[u] != colour[v] for u, v in g.edges)
    assert ext["num_colours"] >= sbmchrom.exact_chromatic(g)


def test_alpha_h():
    g = sbmchrom.Graph([0, 0, 0], [])
    h, best = sbmchrom.alpha_h([3], [[0.5]], g, exact=True)
    assert h == pytest.approx(math.log(2))
    assert sorted(best) == [0, 1, 2]


def test_predictions():
    assert abs(sbmchrom.predict_gnp(1000, 0.5)["chi_predicted"] - 55.76) < 0.01
    lo, hi = sbmchrom.two_block_thresholds(10, 10, 0.4, 0.4)
    assert lo == 0.0 and hi == pytest.approx(0.4)
    assert sbmchrom.predict_two_block(10, 10, 0.4, 0.4, 0.6)["regime"] == "above"
    with pytest.raises(sbmchrom.PredictionError):
        sbmchrom.predict_gnp(10, 0.01)


def test_experiment_is_deterministic():
    cfg = {"model": {"kind": "gnp", "n": 20, "p": 0.5}, "replicates": 2, "measures": ["chi", "edge_count"],
           "chi_methods": ["exact", "dsatur"]}
    a = sbmchrom.run_experiment(cfg)
    assert a == sbmchrom.run_experiment(cfg)
    rows = list(csv.DictReader(io.StringIO("".join(a.splitlines(True)[1:]))))
    assert len(rows) == 6
    assert {r["status"] for r in rows} == {"ok"}
    with pytest.raises(sbmchrom.ConfigError):
        sbmchrom.run_experiment({"model": {"kind": "gnp"}, "measures": []})
