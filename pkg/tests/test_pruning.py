"""Threshold pruning of high-persistence layers and window enumeration."""

import numpy as np
import pytest

import zztda as z

ZBAR = np.array([0.1, 0.5, 0.92, 0.95, 1.0, 0.93, 0.4])


def test_prune_worked_example():
    report = z.prune_layers(ZBAR, threshold=0.9)
    assert report.layers_to_remove == (2, 3, 4, 5)
    assert report.threshold == 0.9
    assert report.alpha_used == -1.0
    assert np.array_equal(report.zbar, ZBAR)


def test_prune_accepts_series():
    s = z.DescriptorSeries(values=ZBAR)
    assert z.prune_layers(s, threshold=0.9).layers_to_remove == (2, 3, 4, 5)


def test_prune_strict_comparison_excludes_max_at_one():
    assert z.prune_layers(ZBAR, threshold=1.0).layers_to_remove == ()


def test_prune_constant_selects_everything():
    report = z.prune_layers(np.full(5, 0.7), threshold=0.9)
    assert report.layers_to_remove == (0, 1, 2, 3, 4)


def test_prune_invariant_under_positive_rescale():
    base = z.prune_layers(ZBAR, threshold=0.9).layers_to_remove
    for scale in (1e-6, 0.5, 3.0, 1e6):
        assert z.prune_layers(ZBAR * scale, threshold=0.9).layers_to_remove == base


def test_prune_rejects_bad_inputs():
    with pytest.raises(ValueError):
        z.prune_layers(np.zeros(4))
    with pytest.raises(ValueError):
        z.prune_layers(np.array([]))
    with pytest.raises(ValueError):
        z.prune_layers(np.ones((2, 2)))
    with pytest.raises(ValueError):
        z.prune_layers(ZBAR, threshold=0.0)
    with pytest.raises(ValueError):
        z.prune_layers(ZBAR, threshold=1.5)
    with pytest.raises(ValueError):
        z.prune_layers(-ZBAR)


def test_prune_report_json():
    doc = z.prune_layers(ZBAR, threshold=0.9, alpha=0.5).to_json_dict()
    assert doc["layers"] == [2, 3, 4, 5]
    assert doc["threshold"] == 0.9
    assert doc["alpha"] == 0.5
    assert doc["zbar"] == [float(v) for v in ZBAR]


def test_sliding_windows_counts():
    blocks = z.sliding_windows(32, 5, 2)
    assert len(blocks) == 14
    assert blocks[0] == [0, 1, 2, 3, 4]
    assert blocks[-1] == [26, 27, 28, 29, 30]
    assert all(len(b) == 5 for b in blocks)
    assert z.sliding_windows(6, 6, 1) == [[0, 1, 2, 3, 4, 5]]
    assert z.sliding_windows(10, 3, 3) == [[0, 1, 2], [3, 4, 5], [6, 7, 8]]


def test_sliding_windows_rejects_bad_shapes():
    with pytest.raises(ValueError):
        z.sliding_windows(4, 5, 1)
    with pytest.raises(ValueError):
        z.sliding_windows(4, 0, 1)
    with pytest.raises(ValueError):
        z.sliding_windows(4, 2, 0)
    with pytest.raises(ValueError):
        z.sliding_windows(0, 1, 1)
