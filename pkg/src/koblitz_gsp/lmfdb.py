"""Genus-2 curves from the LMFDB, with bundled fixtures for offline use.

Set ``KOBLITZ_GSP_OFFLINE=1`` to keep every lookup on the fixtures; no
socket is opened in that mode.
"""
from __future__ import annotations

import json
import os
import re
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .curves import HyperellipticCurve

__all__ = [
    "LmfdbCurveRecord",
    "LmfdbError",
    "MalformedLabelError",
    "NetworkError",
    "UnknownLabelError",
    "UnsupportedModelError",
    "fetch_lmfdb",
    "parse_payload",
    "offline",
    "fixture_labels",
]

API_URL = "https://www.lmfdb.org/api/g2c_curves/"
OFFLINE_ENV = "KOBLITZ_GSP_OFFLINE"
_LABEL = re.compile(r"^(\d+\.[a-z]+\.\d+\.\d+|fixture\.[a-z0-9_]+)$")


class LmfdbError(Exception):
    pass


class MalformedLabelError(LmfdbError, ValueError):
    pass


class NetworkError(LmfdbError):
    pass


class UnknownLabelError(LmfdbError, KeyError):
    pass


class UnsupportedModelError(LmfdbError, ValueError):
    pass


@dataclass(frozen=True)
class LmfdbCurveRecord:
    label: str
    genus: int
    f: tuple[int, ...]

    def curve(self) -> HyperellipticCurve:
        return HyperellipticCurve(self.label, self.f)


def offline() -> bool:
    return os.environ.get(OFFLINE_ENV, "").strip().lower() not in ("", "0", "false", "no")


def fixture_labels() -> list[str]:
    root = resources.files(__package__) / "data" / "lmfdb"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def _fixture(label: str) -> Optional[dict]:
    path = resources.files(__package__) / "data" / "lmfdb" / f"{label}.json"
    if not path.is_file():
        return None
    return json.loads(path.read_text(encoding="utf-8"))


def parse_payload(label: str, payload: dict) -> LmfdbCurveRecord:
    """Extract y^2 = f(x) from an API response; h(x) must vanish."""
    rows = payload.get("data") or []
    row = next((r for r in rows if r.get("label") == label), None)
    if row is None:
        raise UnknownLabelError(label)
    eqn = row.get("eqn")
    if isinstance(eqn, str):
        eqn = json.loads(eqn)
    try:
        f, h = [int(c) for c in eqn[0]], [int(c) for c in eqn[1]]
    except (TypeError, IndexError, ValueError):
        raise LmfdbError(f"cannot read the equation of {label}: {eqn!r}") from None
    if any(h):
        raise UnsupportedModelError(f"{label} has h(x) = {h}; only y^2 = f(x) models are supported")
    curve = HyperellipticCurve(label, tuple(f))
    return LmfdbCurveRecord(label, curve.genus, curve.f)


def fetch_lmfdb(label: str, timeout: float = 20.0) -> LmfdbCurveRecord:
    if not _LABEL.match(label):
        raise MalformedLabelError(f"{label!r} is not a genus-2 curve label such as 249.a.249.1")
    local = _fixture(label)
    if offline() or label.startswith("fixture."):
        if local is None:
            raise UnknownLabelError(f"{label} (offline; bundled fixtures: {', '.join(fixture_labels())})")
        return parse_payload(label, local)
    query = urllib.parse.urlencode({"label": label, "_format": "json"})
    try:
        with urllib.request.urlopen(f"{API_URL}?{query}", timeout=timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
    except (urllib.error.URLError, OSError, json.JSONDecodeError) as exc:
        if local is not None:
            return parse_payload(label, local)
        raise NetworkError(f"LMFDB request for {label} failed: {exc}") from exc
    return parse_payload(label, payload)
