"""Line-delimited JSON artifact store: ``<run>/<stage>/<artifact>.jsonl``."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Iterable, Iterator


class MissingArtifactError(RuntimeError):
    """A stage needs an artifact that an earlier stage has not produced."""

    def __init__(self, path: Path, stage: str):
        self.path = path
        self.stage = stage
        super().__init__(f"missing artifact {path}; run the '{stage}' stage first")


def dumps(record: Any) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path: str | Path, records: Iterable[Any]) -> int:
    """Write records atomically; returns the number written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    n = 0
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        for rec in records:
            f.write(dumps(rec))
            f.write("\n")
            n += 1
    os.replace(tmp, path)
    return n


def iter_jsonl(path: str | Path) -> Iterator[Any]:
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                yield json.loads(line)


def read_jsonl(path: str | Path) -> list[Any]:
    return list(iter_jsonl(path))


class RunStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, stage: str, artifact: str) -> Path:
        return self.root / stage / artifact

    def exists(self, stage: str, artifact: str) -> bool:
        return self.path(stage, artifact).is_file()

    def write(self, stage: str, artifact: str, records: Iterable[Any]) -> int:
        return write_jsonl(self.path(stage, artifact), records)

    def write_text(self, stage: str, artifact: str, text: str) -> None:
        path = self.path(stage, artifact)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text, encoding="utf-8", newline="\n")
        os.replace(tmp, path)

    def read(self, stage: str, artifact: str) -> list[Any]:
        path = self.path(stage, artifact)
        if not path.is_file():
            raise MissingArtifactError(path, stage)
        return read_jsonl(path)
