"""JSON, CSV and PGM writers used by the command line."""

import csv
import io
import json
import math

import numpy as np


def _normalise(obj):
    if isinstance(obj, dict):
        return {str(k): _normalise(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalise(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.15g}")
    return obj


def dumps(obj):
    """Deterministic JSON: sorted keys, floats rounded to 15 significant digits."""
    return json.dumps(_normalise(obj), sort_keys=True, indent=2) + "\n"


def grid_csv(x, y, values):
    """CSV text with one (x, y, value) row per grid sample."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "value"])
    X, Y = np.meshgrid(x, y, indexing="ij") if np.ndim(x) == 1 else (x, y)
    for a, b, v in zip(np.ravel(X), np.ravel(Y), np.ravel(values)):
        w.writerow([f"{a:.15g}", f"{b:.15g}", f"{v:.15g}"])
    return buf.getvalue()


def spectrum_csv(spectrum):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "j", "xParity", "tauParity", "mult", "errorBar"])
    for ln in spectrum.lines:
        w.writerow([f"{ln.lam:.15g}", ln.j, ln.x_parity, ln.tau_parity, ln.mult,
                    f"{ln.error_bar:.15g}"])
    return buf.getvalue()


def pgm_bytes(image):
    """Binary 8-bit PGM (P5); image axis 0 is x, written as columns."""
    img = np.ascontiguousarray(np.asarray(image, dtype=np.uint8).T[::-1])
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()
