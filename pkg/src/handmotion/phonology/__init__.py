"""Phonology records, attribute phrasing, LLM prompting and post-processing."""

from .lexicon import AttributeLexicon, attributes_to_lines, bundled_lexicon
from .llm import (
    FixtureClient,
    HttpClient,
    LlmRequest,
    LlmResponse,
    client_from_spec,
    generate_descriptions,
)
from .postprocess import localize_handedness, postprocess_descriptions
from .prompts import assemble_prompt, load_template
from .records import PhonologyRecord, parse_record, read_records, write_records

__all__ = [
    "AttributeLexicon",
    "attributes_to_lines",
    "bundled_lexicon",
    "FixtureClient",
    "HttpClient",
    "LlmRequest",
    "LlmResponse",
    "client_from_spec",
    "generate_descriptions",
    "localize_handedness",
    "postprocess_descriptions",
    "assemble_prompt",
    "load_template",
    "PhonologyRecord",
    "parse_record",
    "read_records",
    "write_records",
]
