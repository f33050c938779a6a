"""Month battery dumps: structure, token location, failure modes."""

import json
import os
import types

import pytest

import zzextract as zx
from conftest import N_HIDDEN_LAYERS


def _manifest(path):
    with open(os.path.join(path, "manifest.json"), "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_prompts_cycle_all_months():
    prompts = zx.calendar_prompts()
    assert len(prompts) == 12
    for prompt, month in zip(prompts, zx.MONTHS):
        assert month in prompt
        assert prompt.endswith("is")
    assert prompts[0] == "Let's do some calendar math. Four months from January is"


def test_two_stacks_written(model_dir, tmp_path):
    months_dir, answers_dir = zx.make_calendar_toy(model_dir, tmp_path / "toy")
    assert months_dir == str(tmp_path / "toy" / "months")
    assert answers_dir == str(tmp_path / "toy" / "answers")
    for path, position in [(months_dir, "month"), (answers_dir, "final")]:
        manifest = _manifest(path)
        assert manifest["n_points"] == 12
        assert manifest["n_layers"] == N_HIDDEN_LAYERS + 1
        assert manifest["meta"]["dataset"] == "calendar_toy"
        assert manifest["meta"]["token_position"] == position


def test_month_and_answer_points_differ(model_dir, tmp_path):
    months_dir, answers_dir = zx.make_calendar_toy(model_dir, tmp_path / "toy")
    with open(os.path.join(months_dir, "layer_000.f32"), "rb") as fh:
        month_bytes = fh.read()
    with open(os.path.join(answers_dir, "layer_000.f32"), "rb") as fh:
        answer_bytes = fh.read()
    assert month_bytes != answer_bytes


def test_locate_token_picks_last_overlap():
    offsets = [(0, 0), (0, 3), (3, 6), (6, 9)]
    assert zx.locate_token(offsets, 3, 6) == 2
    # a word split across tokens resolves to its final piece
    assert zx.locate_token([(0, 0), (0, 4), (4, 9)], 0, 9) == 2


def test_locate_token_skips_empty_spans():
    with pytest.raises(zx.TokenLocationError, match="no token overlaps"):
        zx.locate_token([(0, 0), (5, 5)], 0, 9)


def test_locate_token_no_overlap_raises():
    with pytest.raises(zx.TokenLocationError, match="no token overlaps"):
        zx.locate_token([(0, 3), (3, 6)], 10, 14)


def test_missing_month_raises(model_dir, tmp_path, monkeypatch):
    monkeypatch.setattr("zzextract.calendar.PROMPT_TEMPLATE", "nothing to see here")
    with pytest.raises(zx.TokenLocationError, match="not found in prompt"):
        zx.make_calendar_toy(model_dir, tmp_path / "toy")


def test_slow_tokenizer_rejected(tmp_path, monkeypatch):
    fake = (None, types.SimpleNamespace(is_fast=False))
    monkeypatch.setattr("zzextract.calendar.load_model_and_tokenizer", lambda *a, **k: fake)
    with pytest.raises(zx.ExtractionError, match="fast tokenizer"):
        zx.make_calendar_toy("whatever", tmp_path / "toy")


def test_validate_round_trip(model_dir, tmp_path, run_zzt):
    for path in zx.make_calendar_toy(model_dir, tmp_path / "toy"):
        result = run_zzt("validate", path)
        assert result.returncode == 0, result.stderr
