"""Bundled word-frequency tables and the adjective compatibility matrix.

Each fixture is a CSV under ``data/`` whose SHA-256 is recorded in
``data/manifest.json`` together with the table number it was transcribed
from and the sums printed alongside it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ChecksumMismatch, ParseError, UnknownFixture
from .lexsem import CompatibilityMatrix, HyponymTable

DATA_DIR = Path(str(resources.files(__package__).joinpath("data")))


@dataclass(frozen=True)
class FixtureInfo:
    id: str
    path: Path
    table: int
    kind: str
    sha256: str
    printed: dict


@lru_cache(maxsize=None)
def _manifest(data_dir: Path = DATA_DIR) -> dict:
    try:
        return json.loads((data_dir / "manifest.json").read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read fixture manifest in {data_dir}: {exc}") from exc


def fixture_ids(data_dir: Path = DATA_DIR) -> list:
    return sorted(_manifest(data_dir)["fixtures"])


def aliases(data_dir: Path = DATA_DIR) -> dict:
    return dict(_manifest(data_dir).get("aliases", {}))


def fixture_info(fid: str, data_dir: Path = DATA_DIR) -> FixtureInfo:
    man = _manifest(data_dir)
    fid = man.get("aliases", {}).get(fid, fid)
    try:
        e = man["fixtures"][fid]
    except KeyError:
        raise UnknownFixture(fid) from None
    return FixtureInfo(fid, data_dir / e["file"], int(e["table"]), e["kind"], e["sha256"], dict(e.get("printed", {})))


def load_fixture(fid: str, data_dir: Path = DATA_DIR):
    """HyponymTable or CompatibilityMatrix for a fixture id (aliases accepted)."""
    info = fixture_info(fid, data_dir)
    try:
        raw = info.path.read_bytes()
    except OSError as exc:
        raise ParseError(f"{info.path}: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()
    if digest != info.sha256:
        raise ChecksumMismatch(f"{info.id}: sha256 {digest} != manifest {info.sha256}")
    if info.kind == "matrix":
        return CompatibilityMatrix.from_csv(info.path)
    if info.kind == "hyponym":
        return HyponymTable.from_csv(info.path, name=info.id)
    raise ParseError(f"{info.id}: unknown fixture kind {info.kind!r}")
