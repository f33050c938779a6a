"""Model loading, token shuffling, and batched hidden-state capture."""

from __future__ import annotations

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from .errors import ModelLoadError


def load_model_and_tokenizer(model: str, device: str | None = None):
    """Load a headless base model and its tokenizer from a hub id or path.

    The model is returned in eval mode on ``device`` (default CPU). The
    tokenizer is forced to right padding so token positions of the unpadded
    prompt stay valid in a padded batch; a tokenizer without a padding token
    falls back to its EOS, then UNK, token.

    Raises
    ------
    ModelLoadError
        If the checkpoint or tokenizer cannot be loaded, or no padding token
        can be established.
    """
    try:
        tokenizer = AutoTokenizer.from_pretrained(model)
        loaded = AutoModel.from_pretrained(model)
    except Exception as exc:
        raise ModelLoadError(f"cannot load model {model!r}: {exc}") from exc
    if tokenizer.pad_token is None:
        # padding only batches rows; padded positions are masked out anyway
        tokenizer.pad_token = tokenizer.eos_token or tokenizer.unk_token
        if tokenizer.pad_token is None:
            raise ModelLoadError(f"tokenizer for {model!r} has no usable padding token")
    tokenizer.padding_side = "right"
    loaded = loaded.to(torch.device(device or "cpu"))
    loaded.eval()
    return loaded, tokenizer


def final_attended_position(attention_mask: torch.Tensor) -> torch.Tensor:
    """Index of the last attended token per row of a padded batch.

    Works for either padding side: the result is the largest position whose
    attention mask is 1, row by row.
    """
    # argmax returns the first maximum, so flipping finds the last 1
    return attention_mask.size(1) - 1 - attention_mask.flip(1).long().argmax(1)


def hidden_layer_states(model, input_ids: torch.Tensor, attention_mask: torch.Tensor):
    """Per-layer states with the final normalization on the output layer.

    Returns a tuple of (batch, seq, dim) tensors of length hidden_layers + 1:
    the embedding output, each intermediate block output, and the model's
    final post-normalization output in last place. Families whose recorded
    last entry is already post-normalization are unaffected; for the rest the
    substitution applies the missing normalization.
    """
    with torch.inference_mode():
        out = model(
            input_ids=input_ids,
            attention_mask=attention_mask,
            output_hidden_states=True,
        )
    states = list(out.hidden_states)
    states[-1] = out.last_hidden_state
    return tuple(states)


def shuffle_within_prompts(id_lists, special_masks, seed: int):
    """Permute non-special token ids independently within each prompt.

    Special-token positions keep both their place and their id, so every
    prompt keeps its exact token multiset, its length, and its position in
    the list. A prompt with at most one non-special token is returned
    unchanged.

    Parameters
    ----------
    id_lists : sequence of token-id lists
    special_masks : sequence of 0/1 lists
        Aligned with ``id_lists``; 1 marks a special token.
    seed : int
        Seed of the permutation stream; identical inputs and seed reproduce
        identical output.
    """
    if len(id_lists) != len(special_masks):
        raise ValueError(
            f"got {len(id_lists)} prompts but {len(special_masks)} special masks"
        )
    rng = np.random.default_rng(seed)
    shuffled = []
    for ids, special in zip(id_lists, special_masks):
        original = list(ids)
        permuted = list(original)
        slots = [i for i, flag in enumerate(special) if not flag]
        order = rng.permutation(len(slots))
        for target, j in zip(slots, order):
            permuted[target] = original[slots[j]]
        shuffled.append(permuted)
    return shuffled


def capture_token_states(
    model,
    tokenizer,
    id_lists,
    positions=None,
    batch_size: int = 8,
) -> np.ndarray:
    """Collect one vector per prompt per layer over batched forward passes.

    Parameters
    ----------
    model, tokenizer : as returned by :func:`load_model_and_tokenizer`
    id_lists : sequence of non-empty token-id lists
        Already shuffled if shuffling was requested.
    positions : sequence of int, optional
        Token position to read for each prompt, indexing the unpadded ids;
        the default reads the final attended position of every row.
    batch_size : int
        Prompts per forward pass; must be positive.

    Returns
    -------
    ndarray of shape (hidden_layers + 1, n_prompts, hidden_dim), float32.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if positions is not None and len(positions) != len(id_lists):
        raise ValueError(
            f"got {len(id_lists)} prompts but {len(positions)} positions"
        )
    for i, ids in enumerate(id_lists):
        if len(ids) == 0:
            raise ValueError(f"prompt {i} has no tokens")
    device = next(model.parameters()).device
    chunks = []
    for start in range(0, len(id_lists), batch_size):
        batch = [list(ids) for ids in id_lists[start : start + batch_size]]
        enc = tokenizer.pad({"input_ids": batch}, return_tensors="pt").to(device)
        states = hidden_layer_states(model, enc["input_ids"], enc["attention_mask"])
        if positions is None:
            idx = final_attended_position(enc["attention_mask"])
        else:
            idx = torch.as_tensor(
                positions[start : start + batch_size], dtype=torch.long, device=device
            )
        rows = torch.arange(len(batch), device=device)
        per_layer = [layer[rows, idx].to(torch.float32).cpu().numpy() for layer in states]
        chunks.append(np.stack(per_layer))
    return np.concatenate(chunks, axis=1)
