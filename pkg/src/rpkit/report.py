"""Deterministic report serialization: a stable key-value tree plus CSV curves.

Reports serialize to JSON text with insertion-ordered keys, floats printed
with 17 significant digits (lossless for float64), and complex numbers as
{"re": ..., "im": ...} pairs.  Identical report objects serialize to
byte-identical text; round-tripping through json.loads is lossless up to the
complex/array conversions applied on assembly.
"""

from __future__ import annotations

import numpy as np

CONVENTIONS = {
    "twist_phase": "A o B = exp(i*pi*(d-1)*a*b/d) * A*B on grades (a, b); equals zeta^(a*b), zeta = exp(i*pi/d), at d = 2",
    "reflection": "theta(c_j) = c_{m+1-j}, antilinear homomorphism; lattice reflection is mid-bond on the time axis",
    "stochastic_dynamics": "dphi = -A phi ds + sqrt(2) dW from phi(0) = 0, so C_t = A^{-1}(1 - exp(-2 t A))",
    "sft_index_order": "sft(T)[(a,c),(b,e)] = T[(c,e),(a,b)] on Box22 data T[(o1,o2),(i1,i2)]",
    "time_shift": "one step moves every plus-half generator index by +1 (away from the plane)",
}

WITNESS_CAP = 16


def _fmt_float(x: float) -> str:
    if x != x:
        return '"nan"'
    if x == float("inf"):
        return '"inf"'
    if x == float("-inf"):
        return '"-inf"'
    if x == int(x) and abs(x) < 1e15:
        return f"{x:.1f}"
    return format(x, ".17g")


def _serialize(obj, out: list):
    if isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(f'"{k}":')
            _serialize(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _serialize(v, out)
        out.append("]")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        out.append('{"re":' + _fmt_float(float(obj.real))
                   + ',"im":' + _fmt_float(float(obj.imag)) + "}")
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, np.ndarray):
        _serialize(obj.tolist(), out)
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        out.append(f'"{escaped}"')
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_text(report: dict) -> str:
    out: list[str] = []
    _serialize(report, out)
    return "".join(out) + "\n"


def truncate_witness(vec) -> list:
    """First 16 entries of a witness vector, as complex pairs."""
    if vec is None:
        return []
    arr = np.asarray(vec).ravel()[:WITNESS_CAP]
    return [complex(z) for z in arr]


def curve_csv(rows) -> str:
    """CSV for stochastic scans: t, min_eig, violated (0/1)."""
    lines = ["t,min_eig,violated"]
    for t, me, violated in rows:
        lines.append(f"{format(float(t), '.17g')},{format(float(me), '.17g')},{1 if violated else 0}")
    return "\n".join(lines) + "\n"
