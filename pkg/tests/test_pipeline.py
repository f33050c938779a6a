"""Orchestration: config handling, subset runs, caching, and the estimator."""

import json

import numpy as np
import pytest
from sklearn.base import clone

import zztda as z
import zztda.pipeline as pipeline_mod

from conftest import random_stack


def _circle_stack(n_layers=3, n=12):
    return z.generate(
        z.SynthSpec(kind="persistent_circle", n_points=n, n_layers=n_layers)
    )


CIRCLE_CFG = dict(k_nn=2, m=3, alphas=(0.0,), homology_dims=(1,))


# ---------------------------------------------------------------------------
# configuration


def test_config_defaults_and_coercion():
    cfg = z.PipelineConfig(alphas=[1, 2], homology_dims=[0, 1])
    assert cfg.alphas == (1.0, 2.0)
    assert cfg.homology_dims == (0, 1)
    assert z.PipelineConfig().alphas == (-1.0, 0.0, 0.5, 1.0, 2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        z.PipelineConfig(k_nn=0)
    with pytest.raises(ValueError):
        z.PipelineConfig(m=1)
    with pytest.raises(ValueError):
        z.PipelineConfig(subset_size=0)
    with pytest.raises(ValueError):
        z.PipelineConfig(alphas=())
    with pytest.raises(ValueError):
        z.PipelineConfig(alphas=(float("nan"),))
    with pytest.raises(ValueError):
        z.PipelineConfig(homology_dims=())
    with pytest.raises(ValueError):
        z.PipelineConfig(m=3, homology_dims=(3,))
    with pytest.raises(ValueError):
        z.PipelineConfig(normalization="other")


def test_config_json_roundtrip():
    cfg = z.PipelineConfig(
        k_nn=3,
        m=3,
        alphas=(0.0, 1.0),
        homology_dims=(0, 1),
        vr=z.VRCalibration(beta0_target=5, beta0_tolerance=1),
        cache_dir="/tmp/zzt",
    )
    doc = json.loads(json.dumps(cfg.to_json_dict()))
    assert z.PipelineConfig.from_json_dict(doc) == cfg
    plain = z.PipelineConfig()
    assert z.PipelineConfig.from_json_dict(plain.to_json_dict()) == plain


def test_config_rejects_unknown_keys():
    doc = z.PipelineConfig().to_json_dict()
    doc["bogus_key"] = 1
    with pytest.raises(ValueError, match="unknown config keys: bogus_key"):
        z.PipelineConfig.from_json_dict(doc)


# ---------------------------------------------------------------------------
# run


def test_run_circle_descriptors():
    res = z.run(_circle_stack(), z.PipelineConfig(**CIRCLE_CFG))
    assert res.n_subsets == 1
    assert res.single_subset
    assert res.subset_size_used == 12
    assert res.diagrams[0].intervals[1] == {(0, 4): 1}
    assert res.betti_stats[1].values.tolist() == [1.0, 1.0, 1.0]
    assert res.betti_stats[1].degenerate
    assert np.allclose(res.births_stats[1][0.0].values, [1.0, 0.0, 0.0])
    assert np.allclose(res.zbar_stats[1][0.0].values, 1.0)
    img = res.images[1][0]
    assert img.total == 1
    assert img.grid[0, 2] == 1


def test_run_accepts_plain_array():
    stack = _circle_stack()
    arr = np.stack([np.asarray(l) for l in stack.layers])
    res = z.run(arr, z.PipelineConfig(**CIRCLE_CFG))
    assert res.diagrams[0].intervals[1] == {(0, 4): 1}


def test_run_multiple_subsets(rng):
    stack = random_stack(rng, n_points=20, n_layers=3)
    cfg = z.PipelineConfig(
        k_nn=2, m=2, subset_size=10, alphas=(0.0,), homology_dims=(0, 1)
    )
    res = z.run(stack, cfg)
    assert res.n_subsets == 2
    assert not res.single_subset
    assert len(res.diagrams) == 2
    assert len(res.betti[0]) == 2
    stats = res.betti_stats[0]
    assert not stats.degenerate
    assert stats.subset_std is not None
    manual = np.vstack([s.values for s in res.betti[0]]).mean(axis=0)
    assert np.allclose(stats.values, manual)


def test_run_oversized_subset_collapses_to_single():
    res = z.run(
        _circle_stack(), z.PipelineConfig(subset_size=10_000, **{
            k: v for k, v in CIRCLE_CFG.items() if k != "subset_size"
        })
    )
    assert res.n_subsets == 1
    assert res.subset_size_used == 12


def test_run_with_radius_filter_splits_components():
    stack = _circle_stack()
    base = dict(CIRCLE_CFG, homology_dims=(0,))
    # dropping every edge at or below the max length empties each graph
    cfg = z.PipelineConfig(
        vr=z.VRCalibration(beta0_target=12, beta0_tolerance=0), **base
    )
    res = z.run(stack, cfg)
    assert res.betti_stats[0].values.tolist() == [12.0, 12.0, 12.0]
    # keeping only the short edges keeps the circle in one piece
    cfg = z.PipelineConfig(
        vr=z.VRCalibration(beta0_target=12, beta0_tolerance=0),
        keep_short_edges=True,
        **base,
    )
    res = z.run(stack, cfg)
    assert res.betti_stats[0].values.tolist() == [1.0, 1.0, 1.0]


def test_run_with_fixed_radius_matches_plain():
    stack = _circle_stack()
    plain = z.run(stack, z.PipelineConfig(**CIRCLE_CFG))
    fixed = z.run(
        stack,
        z.PipelineConfig(
            vr=z.VRCalibration(
                beta0_target=1, per_layer_radius=[0.0, 0.0, 0.0]
            ),
            **CIRCLE_CFG,
        ),
    )
    assert plain.diagrams[0].intervals == fixed.diagrams[0].intervals


# ---------------------------------------------------------------------------
# caching


def test_cache_roundtrip_and_hit(tmp_path, monkeypatch):
    stack = _circle_stack()
    cfg = z.PipelineConfig(cache_dir=str(tmp_path), **CIRCLE_CFG)
    first = z.run(stack, cfg)
    files = list(tmp_path.glob("zzt-*.json"))
    assert len(files) == 1
    # a second run must be served from the cache alone
    def boom(*a, **k):
        raise AssertionError("cache miss: interval stage re-ran")

    monkeypatch.setattr(pipeline_mod, "subset_diagram", boom)
    second = z.run(stack, cfg)
    assert first.diagrams[0].intervals == second.diagrams[0].intervals
    assert np.allclose(
        first.births_stats[1][0.0].values, second.births_stats[1][0.0].values
    )


def test_cache_key_sensitive_to_params_and_data(tmp_path):
    stack = _circle_stack()
    cfg = z.PipelineConfig(cache_dir=str(tmp_path), **CIRCLE_CFG)
    z.run(stack, cfg)
    z.run(stack, z.PipelineConfig(cache_dir=str(tmp_path), **{
        **CIRCLE_CFG, "k_nn": 3
    }))
    other = z.generate(
        z.SynthSpec(kind="persistent_circle", n_points=12, n_layers=3, seed=9,
                    noise_scale=0.01)
    )
    z.run(other, cfg)
    assert len(list(tmp_path.glob("zzt-*.json"))) == 3


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("ZZT_CACHE_DIR", str(tmp_path))
    z.run(_circle_stack(), z.PipelineConfig(**CIRCLE_CFG))
    assert len(list(tmp_path.glob("zzt-*.json"))) == 1


def test_alpha_change_reuses_cached_intervals(tmp_path):
    stack = _circle_stack()
    z.run(stack, z.PipelineConfig(cache_dir=str(tmp_path), **CIRCLE_CFG))
    cfg2 = z.PipelineConfig(cache_dir=str(tmp_path), **{
        **CIRCLE_CFG, "alphas": (1.0, 2.0)
    })
    z.run(stack, cfg2)
    # descriptor knobs do not enter the interval cache key
    assert len(list(tmp_path.glob("zzt-*.json"))) == 1


# ---------------------------------------------------------------------------
# scan_k


def test_scan_k_circle():
    rows = z.scan_k(
        _circle_stack(), [3, 1, 2, 2], z.PipelineConfig(k_nn=2, m=3, homology_dims=(1,))
    )
    assert [r["k"] for r in rows] == [1, 2, 3]
    counts = {r["k"]: r["counts"][1] for r in rows}
    assert counts[1] == 0
    assert counts[2] == 1
    assert counts[2] == max(counts.values())


# ---------------------------------------------------------------------------
# estimator


def test_estimator_sklearn_contract():
    est = z.ZigzagPersistence(k_nn=2, m=3, alphas=(0.0,), homology_dims=(1,))
    params = est.get_params()
    assert params["k_nn"] == 2
    assert params["alphas"] == (0.0,)
    est2 = clone(est)
    assert est2.get_params() == params
    est2.set_params(k_nn=3)
    assert est2.get_params()["k_nn"] == 3
    assert est.get_params()["k_nn"] == 2


def test_estimator_fit_transform_shapes():
    stack = _circle_stack()
    X = np.stack([np.asarray(l) for l in stack.layers])
    est = z.ZigzagPersistence(k_nn=2, m=3, alphas=(0.0,), homology_dims=(1,))
    est.fit(X)
    assert est.n_layers_ == 3
    feats = est.transform(X)
    # one subset row: betti(3) + births(3) + zbar(3)
    assert feats.shape == (1, 9)
    assert np.allclose(feats[0, :3], 1.0)
    assert np.allclose(feats[0, 3:6], [1.0, 0.0, 0.0])
    assert np.allclose(feats[0, 6:], 1.0)
    both = z.ZigzagPersistence(
        k_nn=2, m=3, alphas=(0.0, 1.0), homology_dims=(0, 1)
    ).fit_transform(X)
    # per dimension: betti + 2 alphas * (births + zbar), 3 layers each
    assert both.shape == (1, 2 * 3 * (1 + 2 * 2))


def test_estimator_rejects_bad_params_at_fit():
    est = z.ZigzagPersistence(k_nn=0)
    with pytest.raises(ValueError):
        est.fit(np.zeros((2, 4, 2), dtype=np.float32))
