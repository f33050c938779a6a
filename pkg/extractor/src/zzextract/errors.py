"""Exception types raised by the extraction package."""


class ExtractionError(Exception):
    """Base class for every failure this package raises on purpose."""


class ModelLoadError(ExtractionError):
    """A model checkpoint or its tokenizer could not be loaded."""


class PromptError(ExtractionError):
    """A prompt file is missing, empty, or yields no usable prompts."""


class TokenLocationError(ExtractionError):
    """A required substring could not be mapped to a token position."""
