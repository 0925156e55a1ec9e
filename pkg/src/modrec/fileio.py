"""Plain-text formats: waveforms, key = value configs and CSV tables."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .errors import DomainError, EmptyInputError
from .sigsynth import RealSignal


def fmt_float(v: float) -> str:
    """Round-trippable text for a float (17 significant digits)."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.16e}"


def write_waveform(path, sig: RealSignal, carrier_hz: float, symbol_baud: float) -> None:
    with open(path, "w") as fh:
        fh.write(f"# fs={sig.sample_hz:.17g} fc={carrier_hz:.17g} rs={symbol_baud:.17g}\n")
        fh.write("\n".join(fmt_float(v) for v in sig.samples))
        fh.write("\n")


def read_waveform(path) -> tuple[RealSignal, dict]:
    """Return the signal and the header fields (``fs``, ``fc``, ``rs``) as floats."""
    header: dict = {}
    values = []
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                for tok in s[1:].split():
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        header[k.strip()] = float(v)
                continue
            values.append(float(s))
    if not values:
        raise EmptyInputError(f"{path}: no samples")
    if "fs" not in header:
        raise DomainError(f"{path}: header must give fs=<hz>")
    return RealSignal(np.array(values), header["fs"]), header


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys are normalised to snake_case."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{n}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise DomainError(f"{path}:{n}: empty key")
        out[key.replace("-", "_").lower()] = value
    return out


def write_csv(path, header, rows) -> None:
    """Write rows with ``\\n`` line endings; ``path=None`` or ``'-'`` returns the text instead."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    text = buf.getvalue()
    if path is None or str(path) == "-":
        return text
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return None


def read_csv(path) -> tuple[list, list]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise EmptyInputError(f"{path}: empty CSV")
    return rows[0], rows[1:]
