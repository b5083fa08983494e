"""Write-to-temp-then-rename helpers so failed runs never leave partial files."""

from __future__ import annotations

import contextlib
import os
import tempfile
from pathlib import Path


@contextlib.contextmanager
def atomic_writer(path, mode: str = "w", newline: str | None = None, encoding: str | None = "utf-8"):
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    if not directory.is_dir():
        raise OSError(f"cannot write {path}: directory {directory} does not exist")
    binary = "b" in mode
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, mode, **({} if binary else {"newline": newline, "encoding": encoding})) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def atomic_write_bytes(path, data: bytes) -> None:
    with atomic_writer(path, "wb") as fh:
        fh.write(data)


def fmt9(value: float) -> str:
    """Fixed 9-significant-digit float formatting used for every tabular output."""
    text = f"{value:.9g}"
    return "0" if text == "-0" else text
