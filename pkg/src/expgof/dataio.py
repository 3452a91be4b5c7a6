"""Plain-text sample ingestion.

Accepts whitespace-, newline-, or comma-separated positive decimals;
blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import numpy as np


class DataParseError(ValueError):
    """Input text could not be parsed into a valid sample."""


def parse_data_text(text, source="<string>"):
    values = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        for token in line.replace(",", " ").split():
            try:
                v = float(token)
            except ValueError:
                raise DataParseError(
                    f"{source}:{lineno}: cannot parse {token!r} as a number"
                ) from None
            if not v > 0.0:
                raise DataParseError(
                    f"{source}:{lineno}: nonpositive value {token!r} "
                    f"at entry {len(values)}"
                )
            values.append(v)
    if not values:
        raise DataParseError(f"{source}: no data values found")
    return np.asarray(values, dtype=float)


def parse_data_file(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise DataParseError(f"cannot read {path}: {exc}") from exc
    return parse_data_text(text, source=str(path))


def format_sample(x):
    """Serialize a sample so parse_data_text round-trips it exactly."""
    return "\n".join(repr(float(v)) for v in np.asarray(x, dtype=float))
