"""Text-motion retrieval model, training, and evaluation metrics."""

from .losses import infonce_loss
from .metrics import (
    RetrievalResult,
    diversity,
    fid,
    multimodality,
    retrieval,
    text_similarity_correct,
)
from .model import (
    Thmr,
    ThmrConfig,
    encode_motion,
    encode_text,
    load_thmr,
    save_thmr,
)
from .provider import (
    PrecomputedTextProvider,
    ThmrTextProvider,
    provider_from_spec,
    save_embedding_table,
)
from .tokenizer import Vocabulary, build_vocab, tokenize
from .train import train_thmr

__all__ = [
    "infonce_loss",
    "RetrievalResult",
    "diversity",
    "fid",
    "multimodality",
    "retrieval",
    "text_similarity_correct",
    "Thmr",
    "ThmrConfig",
    "encode_motion",
    "encode_text",
    "load_thmr",
    "save_thmr",
    "PrecomputedTextProvider",
    "ThmrTextProvider",
    "provider_from_spec",
    "save_embedding_table",
    "Vocabulary",
    "build_vocab",
    "tokenize",
    "train_thmr",
]
