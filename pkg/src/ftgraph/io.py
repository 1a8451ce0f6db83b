"""JSON encodings of couplings, scattering matrices and approximating graphs.

Complex entries are ``[re, im]`` pairs; matrices are row-major lists of rows.
Floats go through ``repr`` (shortest round-trip form), so write/read cycles
are exact.
"""

import json
from pathlib import Path

import numpy as np

from .coupling import CouplingST, ScatteringMatrix, validate_st
from .errors import DimensionError, FTGraphError


def encode_matrix(M):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def decode_matrix(rows):
    try:
        a = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"matrix is not a rectangular array of [re, im] pairs: {exc}") from None
    if a.ndim != 3 or a.shape[-1] != 2:
        raise DimensionError(f"matrix entries must be [re, im] pairs, got array of shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def coupling_to_dict(c):
    out = {"n": c.n, "m": c.m, "T": encode_matrix(c.T)}
    if c.perm is not None:
        out["perm"] = list(c.perm)
    return out


def coupling_from_dict(obj):
    try:
        n, m, T = int(obj["n"]), int(obj["m"]), decode_matrix(obj["T"])
    except KeyError as exc:
        raise FTGraphError(f"coupling spec is missing key {exc}") from None
    return validate_st(CouplingST(n, m, T, obj.get("perm")))


def smatrix_to_dict(s):
    return {"n": s.n, "S": encode_matrix(s.S)}


def smatrix_from_dict(obj):
    S = decode_matrix(obj["S"])
    if S.shape != (S.shape[0], S.shape[0]) or ("n" in obj and int(obj["n"]) != S.shape[0]):
        raise DimensionError(f"S has shape {S.shape}, expected square of size n={obj.get('n')}")
    return ScatteringMatrix(S)


def graph_to_dict(g):
    return {
        "n": g.n,
        "d": g.d,
        "alpha": [float(a) for a in g.alpha],
        "connectors": [
            {"j": c.j, "k": c.k, "gamma": float(c.gamma), "A": float(c.potential)} for c in g.connectors
        ],
    }


def graph_from_dict(obj):
    from .approx import ApproxGraph, Connector

    d = float(obj["d"])
    conns = [Connector(int(c["j"]), int(c["k"]), float(c["gamma"]), float(c["A"]), d) for c in obj["connectors"]]
    return ApproxGraph(int(obj["n"]), d, obj["alpha"], conns)


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FTGraphError(f"{path}: invalid JSON ({exc})") from None


def write_json(obj, path=None):
    text = json.dumps(obj, indent=1)
    if path is None:
        return text
    Path(path).write_text(text + "\n", encoding="utf-8")
    return text
