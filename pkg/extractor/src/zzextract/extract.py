"""Prompt-file extraction of per-layer final-token states into stack dumps."""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

from .errors import PromptError
from .runtime import capture_token_states, load_model_and_tokenizer, shuffle_within_prompts
from .zzls import write_stack


@dataclass(frozen=True)
class ExtractionSpec:
    """What to extract and where to write it.

    Parameters
    ----------
    model : str
        Hub id or local path of a causal language model checkpoint.
    prompts : str
        UTF-8 text file with one prompt per line; blank lines are ignored.
    out : str
        Output directory for the stack dump.
    max_prompts : int, default 8000
        Keep at most this many prompts, in file order; must be >= 1.
    shuffle_tokens : bool, default False
        Permute non-special tokens within each prompt before inference.
    seed : int, default 0
        Seed of the shuffling stream; ignored when ``shuffle_tokens`` is off.
    device : str or None, default None
        Torch device hint, e.g. ``"cpu"`` or ``"cuda:0"``; None means CPU.
    """

    model: str
    prompts: str
    out: str
    max_prompts: int = 8000
    shuffle_tokens: bool = False
    seed: int = 0
    device: str | None = None

    def __post_init__(self):
        if self.max_prompts < 1:
            raise ValueError(f"max_prompts must be >= 1, got {self.max_prompts}")


def read_prompts(path: str | os.PathLike, max_prompts: int) -> list[str]:
    """Non-blank lines of a UTF-8 prompt file, truncated to ``max_prompts``.

    Raises
    ------
    PromptError
        If the file is missing or holds no non-blank lines.
    """
    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line.rstrip("\n") for line in fh]
    except FileNotFoundError:
        raise PromptError(f"missing prompt file: {path}") from None
    except UnicodeDecodeError as exc:
        raise PromptError(f"prompt file {path} is not UTF-8: {exc}") from None
    prompts = [line for line in lines if line.strip()]
    if not prompts:
        raise PromptError(f"prompt file holds no prompts: {path}")
    return prompts[:max_prompts]


def dataset_name(prompts_path: str | os.PathLike) -> str:
    """Dataset label recorded in dump metadata: the prompt file's stem."""
    return os.path.splitext(os.path.basename(os.fspath(prompts_path)))[0]


def extract(spec: ExtractionSpec, batch_size: int = 8) -> str:
    """Dump per-layer final-token states for every prompt in ``spec``.

    Writes a stack directory with hidden_layers + 1 layers and one point per
    usable prompt. Prompts that tokenize to no content (no tokens, or only
    special markers) are skipped with a warning and listed in the manifest
    metadata. The output is deterministic for a fixed spec and model version.

    Returns
    -------
    str
        The output directory path.

    Raises
    ------
    ModelLoadError
        If the model or tokenizer cannot be loaded.
    PromptError
        If the prompt file is unusable or no prompt survives tokenization.
    """
    prompts = read_prompts(spec.prompts, spec.max_prompts)
    model, tokenizer = load_model_and_tokenizer(spec.model, device=spec.device)
    enc = tokenizer(prompts, return_special_tokens_mask=True)
    kept, skipped = [], []
    for i, (ids, special) in enumerate(zip(enc["input_ids"], enc["special_tokens_mask"])):
        if sum(1 for flag in special if not flag) == 0 or len(ids) == 0:
            skipped.append(i)
            warnings.warn(f"prompt {i} tokenized to no content tokens; skipped")
        else:
            kept.append(i)
    if not kept:
        raise PromptError("every prompt tokenized to no content tokens")
    id_lists = [enc["input_ids"][i] for i in kept]
    if spec.shuffle_tokens:
        masks = [enc["special_tokens_mask"][i] for i in kept]
        id_lists = shuffle_within_prompts(id_lists, masks, spec.seed)
    states = capture_token_states(model, tokenizer, id_lists, batch_size=batch_size)
    meta = {
        "model": spec.model,
        "dataset": dataset_name(spec.prompts),
        "shuffle_tokens": bool(spec.shuffle_tokens),
        "seed": int(spec.seed),
        "token_position": "final",
    }
    if skipped:
        meta["skipped_prompts"] = skipped
    return write_stack(states, spec.out, meta=meta)
