"""Internal file-output helpers: stable number formatting, atomic writes."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path


def fmt(x) -> str:
    """Format a number with 12 significant digits (CSV house format)."""
    return format(float(x), ".12g")


def atomic_write_text(path, text: str) -> Path:
    """Write ``text`` to ``path`` atomically with LF line endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path
