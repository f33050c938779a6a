"""Shared fixtures: a tiny local checkpoint and the installed analysis CLI.

The model hub is not reachable from the test environment, so the model
fixture builds a small random-weight causal model and a word-level tokenizer
from scratch and saves them as a local checkpoint directory. Hub-id loading
goes through the same code path as local paths.
"""

import shutil
import subprocess

import pytest
import torch
from tokenizers import Regex, Tokenizer
from tokenizers.models import WordLevel
from tokenizers.normalizers import Replace
from tokenizers.pre_tokenizers import Whitespace
from tokenizers.processors import TemplateProcessing
from transformers import LlamaConfig, LlamaForCausalLM, PreTrainedTokenizerFast
from transformers.utils import logging as hf_logging

from zzextract.calendar import MONTHS

hf_logging.set_verbosity_error()
hf_logging.disable_progress_bar()

N_HIDDEN_LAYERS = 2
HIDDEN_SIZE = 16

# covers the word pieces of the month prompts plus generic test prompts
_PIECES = (
    "Let", "'", "s", "do", "some", "calendar", "math", ".",
    "Four", "months", "from", "is",
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "red", "blue", "green", "dog", "cat", "runs", "fast", "slow", "sky",
)


def build_tokenizer() -> PreTrainedTokenizerFast:
    """Word-level tokenizer with a BOS marker and a digit-erasing normalizer.

    Erasing digits makes an all-digit prompt tokenize to its BOS marker
    alone, which exercises the zero-content skip path.
    """
    vocab = {"[PAD]": 0, "[UNK]": 1, "[BOS]": 2}
    for piece in _PIECES + MONTHS:
        vocab.setdefault(piece, len(vocab))
    tok = Tokenizer(WordLevel(vocab, unk_token="[UNK]"))
    tok.normalizer = Replace(Regex("[0-9]+"), "")
    tok.pre_tokenizer = Whitespace()
    tok.post_processor = TemplateProcessing(
        single="[BOS] $A", special_tokens=[("[BOS]", vocab["[BOS]"])]
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        pad_token="[PAD]",
        unk_token="[UNK]",
        bos_token="[BOS]",
    )


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory) -> str:
    """Local checkpoint directory of the tiny random-weight model."""
    tokenizer = build_tokenizer()
    config = LlamaConfig(
        vocab_size=tokenizer.vocab_size,
        hidden_size=HIDDEN_SIZE,
        intermediate_size=32,
        num_hidden_layers=N_HIDDEN_LAYERS,
        num_attention_heads=2,
        num_key_value_heads=2,
        max_position_embeddings=64,
    )
    torch.manual_seed(1234)
    model = LlamaForCausalLM(config)
    path = tmp_path_factory.mktemp("tiny-checkpoint")
    model.save_pretrained(path)
    tokenizer.save_pretrained(path)
    return str(path)


@pytest.fixture(scope="session")
def loaded(model_dir):
    """The checkpoint loaded once per session: (model, tokenizer)."""
    from zzextract import load_model_and_tokenizer

    return load_model_and_tokenizer(model_dir)


@pytest.fixture(scope="session")
def run_zzt():
    """Runner for the installed analysis CLI the dumps must round-trip through."""
    binary = shutil.which("zzt")
    assert binary, "the companion analysis CLI `zzt` must be installed"

    def run(*args: str) -> subprocess.CompletedProcess:
        return subprocess.run([binary, *args], capture_output=True, text=True)

    return run
