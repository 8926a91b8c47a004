"""JSON payload helpers shared by the CLI and the harness.

Rationals serialize as "num/den" strings (denominator omitted when 1); all
dicts are built in a fixed key order so serialized files are byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .geometry import LineEq


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(dumps(payload))


def read_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def metadata_block(command: str, seed: Optional[int] = None, **params) -> dict:
    meta = {"tool": "arrangelab", "version": __version__, "command": command}
    if seed is not None:
        meta["seed"] = seed
    if params:
        meta["params"] = {k: v for k, v in sorted(params.items()) if v is not None}
    return meta


def lines_payload(
    lines: Sequence[LineEq], metadata: Optional[dict] = None, **extra
) -> dict:
    payload: dict = {}
    if metadata:
        payload["metadata"] = metadata
    payload["n"] = len(lines)
    payload["lines"] = [line.to_json() for line in lines]
    for key, value in extra.items():
        if value is not None:
            payload[key] = value
    return payload


def lines_from_payload(payload: dict) -> list[LineEq]:
    return [LineEq.from_json(entry) for entry in payload["lines"]]
