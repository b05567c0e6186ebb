"""Pluggable LLM clients: HTTP endpoint and on-disk fixture replay.

Fixture files are keyed by the SHA-256 of the canonical request
serialization (sorted JSON of model/prompt/seed/temperature), so equal
requests replay byte-identically regardless of construction order.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from ..errors import EndpointError, FixtureMiss, ParseError

API_KEY_ENV = "HANDMOTION_LLM_API_KEY"


@dataclass
class LlmRequest:
    prompt: str
    model_id: str = "default"
    temperature: float = 1.0
    seed: int = 0


@dataclass
class LlmResponse:
    descriptions: list       # exactly three strings
    raw_text: str
    latency: float = 0.0


def canonical_request(req: LlmRequest) -> str:
    return json.dumps(
        {"model": req.model_id, "prompt": req.prompt,
         "seed": req.seed, "temperature": req.temperature},
        sort_keys=True, ensure_ascii=False,
    )


def request_hash(req: LlmRequest) -> str:
    return hashlib.sha256(canonical_request(req).encode("utf-8")).hexdigest()


_DESC_RE = re.compile(r'"Description\s*([123])"\s*:\s*"((?:[^"\\]|\\.)*)"')


def parse_descriptions(raw: str) -> list:
    """Extract the three descriptions from a model response.

    Accepts a JSON object (possibly fenced) with keys "Description 1..3",
    or falls back to regex extraction.  Raises ParseError unless exactly
    three are present.
    """
    text = raw.strip()
    if text.startswith("```"):
        text = re.sub(r"^```[a-zA-Z]*\n?", "", text)
        text = re.sub(r"\n?```$", "", text).strip()
    found: dict = {}
    start, end = text.find("{"), text.rfind("}")
    if start != -1 and end > start:
        try:
            obj = json.loads(text[start:end + 1])
            if isinstance(obj, dict):
                for key, value in obj.items():
                    m = re.fullmatch(r"Description\s*([123])", key.strip())
                    if m and isinstance(value, str):
                        found[int(m.group(1))] = value
        except json.JSONDecodeError:
            pass
    if len(found) != 3:
        found = {}
        for m in _DESC_RE.finditer(text):
            found[int(m.group(1))] = json.loads(f'"{m.group(2)}"')
    if sorted(found) != [1, 2, 3]:
        raise ParseError(f"expected 3 descriptions, found {sorted(found)}")
    return [found[1], found[2], found[3]]


class FixtureClient:
    """Replays recorded responses from ``<dir>/<request hash>.json``."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def complete(self, req: LlmRequest) -> str:
        path = self.directory / f"{request_hash(req)}.json"
        if not path.exists():
            raise FixtureMiss(f"no fixture for request hash {request_hash(req)}")
        return json.loads(path.read_text())["raw_text"]

    def record(self, req: LlmRequest, raw_text: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / f"{request_hash(req)}.json"
        path.write_text(json.dumps(
            {"request": json.loads(canonical_request(req)), "raw_text": raw_text},
            indent=2, ensure_ascii=False))
        return path


class HttpClient:
    """JSON-over-HTTP endpoint client with exponential-backoff retries.

    Posts ``{"model", "prompt", "temperature", "seed"}`` and expects a JSON
    body with a ``"text"`` field.  The API key is read from the
    HANDMOTION_LLM_API_KEY environment variable when present.
    """

    def __init__(self, url: str, timeout: float = 60.0, max_retries: int = 3,
                 backoff: float = 1.0, session=None):
        self.url = url
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff
        self.session = session or requests.Session()

    def complete(self, req: LlmRequest) -> str:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(API_KEY_ENV)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        payload = {"model": req.model_id, "prompt": req.prompt,
                   "temperature": req.temperature, "seed": req.seed}
        last_error = None
        for attempt in range(self.max_retries + 1):
            try:
                resp = self.session.post(self.url, json=payload, headers=headers,
                                         timeout=self.timeout)
                if resp.status_code >= 500:
                    last_error = EndpointError(f"server error {resp.status_code}")
                elif resp.status_code != 200:
                    raise EndpointError(f"endpoint returned {resp.status_code}")
                else:
                    return resp.json()["text"]
            except (requests.RequestException, ValueError, KeyError) as exc:
                last_error = EndpointError(str(exc))
            if attempt < self.max_retries:
                time.sleep(self.backoff * (2 ** attempt))
        raise last_error


def client_from_spec(spec: str):
    """Build a client from a CLI spec: ``fixtures:DIR`` or an HTTP(S) URL."""
    if spec.startswith("fixtures:"):
        return FixtureClient(spec.split(":", 1)[1])
    if spec.startswith("http://") or spec.startswith("https://"):
        return HttpClient(spec)
    raise ValueError(f"unrecognized llm spec {spec!r}")


def generate_descriptions(req: LlmRequest, client) -> LlmResponse:
    """Run one request through a client and parse its three descriptions."""
    start = time.monotonic()
    raw = client.complete(req)
    latency = time.monotonic() - start
    return LlmResponse(descriptions=parse_descriptions(raw), raw_text=raw,
                       latency=latency)


def generate_batch(requests_, client, max_in_flight: int = 4) -> list:
    """Bounded-concurrency batch generation, order-preserving."""
    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(lambda r: generate_descriptions(r, client), requests_))
