"""Run manifests and deterministic artifact writers."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .arithmetic import used_cache_keys


def params_hash(params: dict) -> str:
    """Hash of a run's inputs, used as the context hash when no Waring context is involved."""
    blob = json.dumps(params, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    command_line: list
    subcommand: str
    context_hash: str
    tool_version: str = __version__
    plan_hash: str | None = None
    seed: int = 0
    threads: int = 1
    started: str = field(default_factory=_now)
    finished: str | None = None
    cache_dir: str | None = None
    input_cache_keys: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)  # file name -> sha256
    timings: dict = field(default_factory=dict)  # wall-clock seconds, kept out of the outputs


class ArtifactWriter:
    """Writes outputs into one directory and records their digests in manifest.json."""

    def __init__(self, out: str | Path, manifest: RunManifest):
        self.dir = Path(out)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.manifest = manifest

    def _record(self, path: Path) -> Path:
        self.manifest.outputs[path.name] = file_digest(path)
        return path

    def json(self, name: str, obj) -> Path:
        path = self.dir / name
        payload = {"context_hash": self.manifest.context_hash, **obj}
        path.write_text(json.dumps(payload, sort_keys=True, indent=1, default=str) + "\n")
        return self._record(path)

    def jsonl(self, name: str, records) -> Path:
        path = self.dir / name
        with open(path, "w") as fh:
            for r in records:
                fh.write(json.dumps({"context_hash": self.manifest.context_hash, **r}, sort_keys=True,
                                    default=str) + "\n")
        return self._record(path)

    def csv(self, name: str, header: list, rows) -> Path:
        path = self.dir / name
        buf = io.StringIO()
        buf.write(f"# context_hash={self.manifest.context_hash}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        path.write_text(buf.getvalue())
        return self._record(path)

    def binary(self, name: str, blob: bytes, sidecar: dict) -> Path:
        path = self.dir / name
        path.write_bytes(blob)
        self._record(path)
        self.json(name + ".json", {**sidecar, "data_file": name, "sha256": self.manifest.outputs[name]})
        return path

    def finish(self) -> Path:
        m = self.manifest
        m.finished = _now()
        m.cache_dir = os.environ.get("WG_CACHE_DIR")
        m.input_cache_keys = used_cache_keys()
        path = self.dir / "manifest.json"
        path.write_text(json.dumps(asdict(m), sort_keys=True, indent=1) + "\n")
        return path


def new_manifest(subcommand: str, context_hash: str, seed: int, threads: int, plan_hash=None) -> RunManifest:
    return RunManifest(command_line=["wg"] + sys.argv[1:], subcommand=subcommand, context_hash=context_hash,
                       plan_hash=plan_hash, seed=seed, threads=threads)
