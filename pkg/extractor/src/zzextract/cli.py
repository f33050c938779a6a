"""Command-line dump tool writing model states into stack directories."""

from __future__ import annotations

import json

import click

from .calendar import make_calendar_toy
from .errors import ExtractionError
from .extract import ExtractionSpec, extract


def _echo(document: dict) -> None:
    click.echo(json.dumps(document, indent=2, sort_keys=True))


def _quiet_model_loading() -> None:
    # keep stdout to the JSON documents; loader reports and bars go away
    from transformers.utils import logging as hf_logging

    hf_logging.set_verbosity_error()
    hf_logging.disable_progress_bar()


@click.group()
def main() -> None:
    """Dump per-layer token states of causal language models.

    Every command writes stack directories (manifest.json plus one float32
    file per layer) consumable by the companion analysis CLI.
    """


@main.command("extract")
@click.option("--model", required=True, help="Model hub id or local checkpoint path.")
@click.option(
    "--prompts",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="UTF-8 file with one prompt per line; blank lines are ignored.",
)
@click.option(
    "--n",
    "max_prompts",
    default=8000,
    show_default=True,
    help="Keep at most this many prompts, in file order.",
)
@click.option(
    "--shuffle",
    "shuffle_tokens",
    is_flag=True,
    help="Permute non-special tokens within each prompt before inference.",
)
@click.option("--seed", default=0, show_default=True, help="Shuffling seed.")
@click.option(
    "--out",
    required=True,
    type=click.Path(file_okay=False),
    help="Output stack directory.",
)
@click.option("--device", default=None, help="Torch device hint, e.g. cpu or cuda:0.")
@click.option(
    "--batch-size", default=8, show_default=True, help="Prompts per forward pass."
)
def extract_command(model, prompts, max_prompts, shuffle_tokens, seed, out, device, batch_size):
    """Dump per-layer final-token states for a prompt file."""
    _quiet_model_loading()
    try:
        spec = ExtractionSpec(
            model=model,
            prompts=prompts,
            out=out,
            max_prompts=max_prompts,
            shuffle_tokens=shuffle_tokens,
            seed=seed,
            device=device,
        )
        path = extract(spec, batch_size=batch_size)
    except (ExtractionError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    _echo({"out": path})


@main.command("calendar-toy")
@click.option("--model", required=True, help="Model hub id or local checkpoint path.")
@click.option(
    "--out",
    required=True,
    type=click.Path(file_okay=False),
    help="Directory receiving the months/ and answers/ stacks.",
)
@click.option("--device", default=None, help="Torch device hint, e.g. cpu or cuda:0.")
@click.option(
    "--batch-size", default=12, show_default=True, help="Prompts per forward pass."
)
def calendar_toy_command(model, out, device, batch_size):
    """Dump month-token and final-token stacks for twelve month prompts."""
    _quiet_model_loading()
    try:
        months_dir, answers_dir = make_calendar_toy(
            model, out, device=device, batch_size=batch_size
        )
    except (ExtractionError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    _echo({"answers": answers_dir, "months": months_dir})
