"""HTTP client for chat-completion endpoints, with disk caching.

One wire dialect (the common chat-completions JSON schema) covers every
hosted model we target. Responses are cached on disk keyed by a digest
of the full request, so warm batch runs issue no network calls.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, replace
from pathlib import Path
from threading import Lock

import httpx

log = logging.getLogger(__name__)

# Decoding limits per call purpose: short for argument/score generation,
# long for baseline answers that may include reasoning.
MAX_TOKENS_SHORT = 128
MAX_TOKENS_LONG = 768

ENV_API_KEY = "CLAIMARG_API_KEY"
ENV_ENDPOINT = "CLAIMARG_ENDPOINT"
ENV_MODEL = "CLAIMARG_MODEL"
ENV_CACHE_DIR = "CLAIMARG_CACHE_DIR"


class ClientError(Exception):
    """Base error for model endpoint communication."""


class NetworkError(ClientError):
    pass


class AuthError(ClientError):
    pass


class MalformedResponseError(ClientError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    endpoint_url: str
    model_name: str
    api_key: str = ""
    temperature: float = 0.7
    top_p: float = 0.95
    repetition_penalty: float = 1.0
    timeout: float = 60.0
    max_retries: int = 3
    backoff: float = 0.5

    @classmethod
    def from_env(cls, **overrides) -> "ModelConfig":
        config = cls(
            endpoint_url=os.environ.get(ENV_ENDPOINT, ""),
            model_name=os.environ.get(ENV_MODEL, ""),
            api_key=os.environ.get(ENV_API_KEY, ""),
        )
        return replace(config, **overrides) if overrides else config


class DiskCache:
    """One file per request digest, holding the request and the verbatim
    response text. Writes are serialized; reads are lock-free."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._write_lock = Lock()

    @staticmethod
    def key(endpoint: str, model: str, body: dict) -> str:
        canonical = json.dumps(
            {"endpoint": endpoint, "model": model, "body": body},
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text("utf-8"))
            return entry["response_text"]
        except (json.JSONDecodeError, KeyError):
            log.warning("discarding corrupt cache entry %s", path)
            return None

    def put(self, key: str, request_body: dict, response_text: str) -> None:
        entry = {
            "key": key,
            "request": request_body,
            "response_text": response_text,
            "created_at": time.time(),
        }
        with self._write_lock:
            tmp = self._path(key).with_suffix(".tmp")
            tmp.write_text(json.dumps(entry, indent=2), "utf-8")
            tmp.replace(self._path(key))


def _max_tokens_for(purpose: str) -> int:
    return MAX_TOKENS_LONG if purpose == "baseline" else MAX_TOKENS_SHORT


def build_request_body(prompt: str, config: ModelConfig, purpose: str) -> dict:
    return {
        "model": config.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": config.temperature,
        "top_p": config.top_p,
        "max_tokens": _max_tokens_for(purpose),
        "repetition_penalty": config.repetition_penalty,
    }


def complete(
    prompt: str,
    config: ModelConfig,
    purpose: str = "argument",
    cache: DiskCache | None = None,
) -> str:
    """One chat completion. Consults the cache first when one is given;
    transient failures are retried with exponential backoff."""
    if not config.endpoint_url:
        raise ClientError(f"no endpoint configured (set {ENV_ENDPOINT} or pass one)")
    body = build_request_body(prompt, config, purpose)
    cache_key = DiskCache.key(config.endpoint_url, config.model_name, body)
    if cache is not None:
        cached = cache.get(cache_key)
        if cached is not None:
            return cached

    headers = {"Content-Type": "application/json"}
    if config.api_key:
        headers["Authorization"] = f"Bearer {config.api_key}"

    last_error: Exception | None = None
    for attempt in range(config.max_retries):
        if attempt:
            time.sleep(config.backoff * 2 ** (attempt - 1))
        try:
            response = httpx.post(
                config.endpoint_url, json=body, headers=headers, timeout=config.timeout
            )
        except httpx.HTTPError as exc:
            last_error = NetworkError(str(exc))
            continue
        if response.status_code in (401, 403):
            raise AuthError(f"endpoint rejected credentials ({response.status_code})")
        if response.status_code == 429 or response.status_code >= 500:
            last_error = NetworkError(
                f"status {response.status_code}: {response.text[:200]}"
            )
            continue
        if response.status_code != 200:
            raise ClientError(f"status {response.status_code}: {response.text[:200]}")
        try:
            text = response.json()["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponseError(
                f"unexpected response shape: {response.text[:200]}"
            ) from exc
        if cache is not None:
            cache.put(cache_key, body, text)
        return text
    raise NetworkError(
        f"request failed after {config.max_retries} attempts: {last_error}"
    ) from last_error


class LlmBackend:
    """Generator backend speaking to a live endpoint via :func:`complete`."""

    def __init__(self, config: ModelConfig, cache: DiskCache | None = None):
        self.config = config
        self.cache = cache

    def complete(self, prompt: str, purpose: str) -> str:
        return complete(prompt, self.config, purpose, self.cache)
