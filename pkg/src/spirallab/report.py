"""JSON report plumbing: canonical serialization, atomic writes, and the
determinism hash (timing excluded)."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

SCHEMA = "spirallab/1"
NON_DETERMINISTIC_KEYS = ("timing_s",)
# Output destinations don't affect the computation, so two runs that differ
# only in where they write should hash identically.
PATH_INPUT_KEYS = ("out", "dump_region", "out_csv", "dump_curve", "dump_traj")


def canonical_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def determinism_hash(payload: dict) -> str:
    clean = {k: v for k, v in payload.items() if k not in NON_DETERMINISTIC_KEYS}
    inputs = clean.get("inputs")
    if isinstance(inputs, dict):
        clean["inputs"] = {
            k: v for k, v in inputs.items() if k not in PATH_INPUT_KEYS
        }
    return hashlib.sha256(canonical_bytes(clean)).hexdigest()


def write_report(path, payload: dict):
    """Atomic write: the report either exists complete or not at all."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
