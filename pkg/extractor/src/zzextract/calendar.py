"""Month-arithmetic prompt battery dumped as two stack directories.

Twelve fixed prompts cycle the month names through one arithmetic template.
For each prompt two positions are read at every layer: the month token
(semantic input) and the final token (where the continuation is predicted),
yielding one 12-point stack per position.
"""

from __future__ import annotations

import os

from .errors import ExtractionError, TokenLocationError
from .runtime import capture_token_states, load_model_and_tokenizer
from .zzls import write_stack

MONTHS = (
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
)

PROMPT_TEMPLATE = "Let's do some calendar math. Four months from {month} is"


def calendar_prompts() -> list[str]:
    """The twelve template prompts, one per month, in calendar order."""
    return [PROMPT_TEMPLATE.format(month=month) for month in MONTHS]


def locate_token(offsets, start: int, end: int) -> int:
    """Index of the last token whose character span overlaps [start, end).

    ``offsets`` holds one (char_start, char_end) pair per token; empty spans
    (special markers) never match. Taking the last overlap selects the final
    piece of a word split across several tokens.

    Raises
    ------
    TokenLocationError
        If no token overlaps the span.
    """
    hit = -1
    for index, (char_start, char_end) in enumerate(offsets):
        if char_start < end and char_end > start and char_end > char_start:
            hit = index
    if hit < 0:
        raise TokenLocationError(f"no token overlaps characters [{start}, {end})")
    return hit


def make_calendar_toy(
    model: str,
    out: str | os.PathLike,
    device: str | None = None,
    batch_size: int = 12,
) -> tuple[str, str]:
    """Dump month-token and final-token stacks for the twelve month prompts.

    Writes ``<out>/months`` and ``<out>/answers``, each holding one point per
    prompt at every layer (hidden_layers + 1 layers). Month positions come
    from an exact substring match of the month name against the prompt.

    Returns
    -------
    tuple of (months_dir, answers_dir)

    Raises
    ------
    ModelLoadError
        If the model or tokenizer cannot be loaded.
    ExtractionError
        If the tokenizer cannot report character offsets.
    TokenLocationError
        If a month name is missing from its prompt or maps to no token.
    """
    prompts = calendar_prompts()
    model_obj, tokenizer = load_model_and_tokenizer(model, device=device)
    if not getattr(tokenizer, "is_fast", False):
        raise ExtractionError(
            f"tokenizer for {model!r} reports no character offsets; "
            "a fast tokenizer is required to locate month tokens"
        )
    enc = tokenizer(prompts, return_offsets_mapping=True)
    month_positions = []
    for prompt, month, offsets in zip(prompts, MONTHS, enc["offset_mapping"]):
        start = prompt.find(month)
        if start < 0:
            raise TokenLocationError(f"month {month!r} not found in prompt {prompt!r}")
        try:
            month_positions.append(locate_token(offsets, start, start + len(month)))
        except TokenLocationError:
            raise TokenLocationError(
                f"month {month!r} maps to no token in prompt {prompt!r}"
            ) from None
    id_lists = list(enc["input_ids"])
    month_states = capture_token_states(
        model_obj, tokenizer, id_lists, positions=month_positions, batch_size=batch_size
    )
    answer_states = capture_token_states(
        model_obj, tokenizer, id_lists, batch_size=batch_size
    )
    out = os.fspath(out)
    base_meta = {"model": model, "dataset": "calendar_toy", "shuffle_tokens": False, "seed": 0}
    months_dir = write_stack(
        month_states,
        os.path.join(out, "months"),
        meta={**base_meta, "token_position": "month"},
    )
    answers_dir = write_stack(
        answer_states,
        os.path.join(out, "answers"),
        meta={**base_meta, "token_position": "final"},
    )
    return months_dir, answers_dir
