"""JSON interchange documents for matrices, embeddings, realizations, vector
systems and protocols.

Every document carries ``format_version``, a ``kind`` tag, a kind-specific
``payload`` and a ``provenance`` block.  Reals are serialized via Python's
shortest round-trip repr, so parse(serialize(x)) is bit-identical for doubles.
"""

from __future__ import annotations

import json
import sys

import numpy as np

from .compiler import ClassicalSMPProtocol, OneWayProtocol, VectorSystem
from .embeddings import Realization, SignMatrix, ThresholdEmbedding

FORMAT_VERSION = "1.0"
VERSION = "0.1.0"

KINDS = ("sign_matrix", "embedding", "realization", "vector_system", "protocol", "vectors", "report")


class DocumentError(Exception):
    """Malformed interchange document (bad JSON, schema, or kind)."""


def document(kind: str, payload: dict, command: str = "", seed=None) -> dict:
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}")
    return {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "payload": payload,
        "provenance": {"command": command, "seed": seed, "version": VERSION},
    }


def dump(doc: dict, path: str | None = None) -> None:
    text = json.dumps(doc, indent=2, allow_nan=False)
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read document {path!r}: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc or "payload" not in doc:
        raise DocumentError(f"{path!r} is not an interchange document")
    return doc


def _payload(doc: dict, kind: str) -> dict:
    if doc.get("kind") != kind:
        raise DocumentError(f"expected a {kind!r} document, got {doc.get('kind')!r}")
    payload = doc["payload"]
    if not isinstance(payload, dict):
        raise DocumentError("payload must be an object")
    return payload


def _field(payload: dict, name: str):
    if name not in payload:
        raise DocumentError(f"payload is missing field {name!r}")
    return payload[name]


def _listify(arr: np.ndarray) -> list:
    return arr.tolist()


# --- sign matrices ---------------------------------------------------------


def sign_matrix_payload(m: SignMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "entries": _listify(m.entries)}


def parse_sign_matrix(doc: dict) -> SignMatrix:
    payload = _payload(doc, "sign_matrix")
    try:
        m = SignMatrix(np.asarray(_field(payload, "entries")))
    except ValueError as exc:
        raise DocumentError(f"invalid sign matrix: {exc}") from exc
    if m.rows != _field(payload, "rows") or m.cols != _field(payload, "cols"):
        raise DocumentError("declared sign matrix shape does not match the entries")
    return m


# --- embeddings and realizations ------------------------------------------


def embedding_payload(e: ThresholdEmbedding) -> dict:
    return {
        "dimension": e.dimension,
        "delta0": e.delta0,
        "delta1": e.delta1,
        "alphas": _listify(e.alphas),
        "betas": _listify(e.betas),
    }


def parse_embedding(doc: dict, renormalize: bool = False) -> ThresholdEmbedding:
    payload = _payload(doc, "embedding")
    alphas = np.asarray(_field(payload, "alphas"), dtype=np.float64)
    betas = np.asarray(_field(payload, "betas"), dtype=np.float64)
    if renormalize:
        alphas = alphas / np.linalg.norm(alphas, axis=1, keepdims=True)
        betas = betas / np.linalg.norm(betas, axis=1, keepdims=True)
    return ThresholdEmbedding(alphas, betas, float(_field(payload, "delta0")),
                              float(_field(payload, "delta1")))


def realization_payload(r: Realization) -> dict:
    return {
        "dimension": r.dimension,
        "gamma": r.gamma,
        "alphas": _listify(r.alphas),
        "betas": _listify(r.betas),
    }


def parse_realization(doc: dict, renormalize: bool = False) -> Realization:
    payload = _payload(doc, "realization")
    alphas = np.asarray(_field(payload, "alphas"), dtype=np.float64)
    betas = np.asarray(_field(payload, "betas"), dtype=np.float64)
    if renormalize:
        alphas = alphas / np.linalg.norm(alphas, axis=1, keepdims=True)
        betas = betas / np.linalg.norm(betas, axis=1, keepdims=True)
    return Realization(alphas, betas, float(_field(payload, "gamma")))


# --- vector systems --------------------------------------------------------


def vector_system_payload(v: VectorSystem) -> dict:
    return {"norm_bound": v.norm_bound, "a": _listify(v.a), "b": _listify(v.b)}


def parse_vector_system(doc: dict) -> VectorSystem:
    payload = _payload(doc, "vector_system")
    return VectorSystem(
        np.asarray(_field(payload, "a")),
        np.asarray(_field(payload, "b")),
        float(_field(payload, "norm_bound")),
    )


# --- protocols -------------------------------------------------------------


def protocol_payload(p: ClassicalSMPProtocol | OneWayProtocol) -> dict:
    base = {
        "n": p.n,
        "c": p.c,
        "rand_strings": list(p.rand_strings),
        "alice_messages": _listify(p.alice_messages),
    }
    if isinstance(p, ClassicalSMPProtocol):
        base["model"] = "smp"
        base["bob_messages"] = _listify(p.bob_messages)
        base["accept"] = _listify(p.accept)
    else:
        base["model"] = "one_way"
        base["bob_accept"] = _listify(p.bob_accept)
    return base


def parse_protocol(doc: dict) -> ClassicalSMPProtocol | OneWayProtocol:
    payload = _payload(doc, "protocol")
    model = _field(payload, "model")
    common = dict(
        n=int(_field(payload, "n")),
        c=int(_field(payload, "c")),
        rand_strings=tuple(_field(payload, "rand_strings")),
        alice_messages=np.asarray(_field(payload, "alice_messages")),
    )
    try:
        if model == "smp":
            return ClassicalSMPProtocol(
                bob_messages=np.asarray(_field(payload, "bob_messages")),
                accept=np.asarray(_field(payload, "accept")),
                **common,
            )
        if model == "one_way":
            return OneWayProtocol(bob_accept=np.asarray(_field(payload, "bob_accept")), **common)
    except ValueError as exc:
        raise DocumentError(f"invalid protocol: {exc}") from exc
    raise DocumentError(f"unknown protocol model {model!r}")


# --- plain vector lists ----------------------------------------------------


def vectors_payload(vectors: np.ndarray) -> dict:
    return {"vectors": _listify(np.asarray(vectors, dtype=np.float64))}


def parse_vectors(doc: dict) -> np.ndarray:
    payload = _payload(doc, "vectors")
    arr = np.asarray(_field(payload, "vectors"), dtype=np.float64)
    if arr.ndim != 2:
        raise DocumentError("vectors payload must be a list of equal-length vectors")
    return arr
