"""Per-layer token-state dumps from causal language models.

This package runs a causal language model over a prompt file, reads one
token position per prompt at every layer (the embedding output, each block
output, and the final post-normalization output), and writes the resulting
layer-indexed point clouds as stack directories for the companion analysis
CLI. Token shuffling within prompts is available as a control that preserves
each prompt's token multiset.
"""

from .calendar import (
    MONTHS,
    PROMPT_TEMPLATE,
    calendar_prompts,
    locate_token,
    make_calendar_toy,
)
from .errors import ExtractionError, ModelLoadError, PromptError, TokenLocationError
from .extract import ExtractionSpec, dataset_name, extract, read_prompts
from .runtime import (
    capture_token_states,
    final_attended_position,
    hidden_layer_states,
    load_model_and_tokenizer,
    shuffle_within_prompts,
)
from .zzls import write_stack

__version__ = "0.1.0"

__all__ = [
    "ExtractionError",
    "ExtractionSpec",
    "ModelLoadError",
    "PromptError",
    "TokenLocationError",
    "MONTHS",
    "PROMPT_TEMPLATE",
    "calendar_prompts",
    "capture_token_states",
    "dataset_name",
    "extract",
    "final_attended_position",
    "hidden_layer_states",
    "load_model_and_tokenizer",
    "locate_token",
    "make_calendar_toy",
    "read_prompts",
    "shuffle_within_prompts",
    "write_stack",
    "__version__",
]
