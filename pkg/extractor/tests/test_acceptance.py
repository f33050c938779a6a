"""Release gate for the dump tool: one verdict line for the round-trip contract.

Run with ``pytest -s tests/test_acceptance.py`` (the package pytest config
already disables capture) to see an ``[ACCEPTANCE] <name>: PASS`` line. The
checks pin the on-disk contract against the installed analysis CLI; every
bound here is exact and final.
"""

import functools
import json
import os

import zzextract as zx
from conftest import N_HIDDEN_LAYERS


def criterion(label):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                out = fn(*args, **kwargs)
            except BaseException:
                print(f"\n[ACCEPTANCE] {label}: FAIL", flush=True)
                raise
            print(f"\n[ACCEPTANCE] {label}: PASS", flush=True)
            return out

        return wrapper

    return deco


def _manifest(path):
    with open(os.path.join(path, "manifest.json"), "r", encoding="utf-8") as fh:
        return json.load(fh)


@criterion("dumps round-trip through the analysis CLI")
def test_extraction_round_trip(model_dir, tmp_path, run_zzt):
    # a prompt-file dump validates and holds hidden + 1 layers: the
    # embedding output plus one entry per block
    prompts_file = tmp_path / "prompts.txt"
    prompts = [
        "alpha beta gamma delta",
        "red dog runs fast",
        "blue cat",
        "Four months from January is",
        "sky eta theta",
        "green dog slow",
    ]
    prompts_file.write_text("".join(p + "\n" for p in prompts), encoding="utf-8")
    dump = zx.extract(
        zx.ExtractionSpec(
            model=model_dir, prompts=str(prompts_file), out=str(tmp_path / "dump")
        )
    )
    result = run_zzt("validate", dump)
    assert result.returncode == 0, result.stderr
    manifest = _manifest(dump)
    assert manifest["n_layers"] == N_HIDDEN_LAYERS + 1
    assert manifest["n_points"] == len(prompts)

    # shuffling preserves the token multiset of every prompt, in order
    _, tokenizer = zx.load_model_and_tokenizer(model_dir)
    enc = tokenizer(prompts, return_special_tokens_mask=True)
    shuffled = zx.shuffle_within_prompts(
        enc["input_ids"], enc["special_tokens_mask"], seed=7
    )
    assert len(shuffled) == len(prompts)
    for before, after in zip(enc["input_ids"], shuffled):
        assert sorted(after) == sorted(before)

    # the month battery yields two 12-point stacks the analysis CLI accepts
    months_dir, answers_dir = zx.make_calendar_toy(model_dir, tmp_path / "toy")
    for stack in (months_dir, answers_dir):
        assert _manifest(stack)["n_points"] == 12
        result = run_zzt("validate", stack)
        assert result.returncode == 0, result.stderr
        result = run_zzt(
            "compute", stack, "--k", "2", "--m", "3", "--out", stack + "-intervals"
        )
        assert result.returncode == 0, result.stderr
