"""CSV/JSON emission with provenance headers and atomic file replacement."""

from __future__ import annotations

import io
import json
import math
import os
import sys
import tempfile
from typing import Iterable

from . import __version__


def fmt(x) -> str:
    """17 significant digits for floats, exact digits for integers."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def provenance(argv: Iterable[str] | None = None, **fields) -> str:
    parts = [f"monkeyzipf {__version__}"]
    if argv is not None:
        parts.append("argv=" + " ".join(argv))
    parts.extend(f"{k}={v}" for k, v in fields.items() if v is not None)
    return "# " + " ".join(parts) + "\n"


def csv_text(header: Iterable[str], rows: Iterable[Iterable], comment: str = "") -> str:
    buf = io.StringIO()
    buf.write(comment)
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


def _spec_for(column) -> str:
    sample = column[0] if len(column) else 0
    if isinstance(sample, str):
        return "{}"
    if isinstance(sample, (bool, int)):
        return "{:d}"
    return "{:.17g}"


def csv_columns(header: Iterable[str], columns: list, comment: str = "") -> str:
    """Column-oriented CSV: ints exact, floats at 17 significant digits."""
    columns = [["true" if v else "false" for v in col]
               if len(col) and isinstance(col[0], bool) else col for col in columns]
    line = ",".join(_spec_for(col) for col in columns).format
    body = "\n".join(map(line, *columns))
    return comment + ",".join(header) + "\n" + body + ("\n" if body else "")


def json_text(payload: dict) -> str:
    def clean(x):
        if isinstance(x, float) and not math.isfinite(x):
            return str(x)
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        return x

    return json.dumps(clean(payload), indent=2) + "\n"


def write_text(text: str, path: str | None) -> None:
    """Write to ``path`` via a temporary file and rename; ``None`` or ``-`` means stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def ranked_columns(ranked) -> list:
    ln10 = math.log(10.0)
    ranks = [rw.rank for rw in ranked]
    words = [rw.word for rw in ranked]
    return [
        ranks,
        [len(w.letters) for w in words],
        [w.log_base for w in words],
        [w.log_base / ln10 for w in words],
        [".".join(map(str, w.letters)) for w in words],
    ]


RANKED_HEADER = ("rank", "length", "log_base", "log10_base", "word")
SERIES_HEADER = ("rank", "log_rank", "log_base")
COUNTS_HEADER = ("t", "N", "Ncum", "lower", "upper", "ok")
SWEEP_HEADER = ("K", "seed", "beta", "mu_bar", "abs_err")
RANKBOUNDS_HEADER = ("rank", "log_base", "lower", "upper", "ok")
