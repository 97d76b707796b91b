"""
Report assembly and emission

Floats are written with 17 significant digits so every value read back is the
value that was computed.
"""

import json
import math
import time
from itertools import product
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

try:
    from ..config import CLI_CONFIG, GEOMETRY_CONFIG, TOOL_NAME, TOOL_VERSION
    from ..logger import log_debug
    from .bell_utils import BDState, region_label
    from .validation_utils import tetrahedron_margins
except ImportError:
    from config import CLI_CONFIG, GEOMETRY_CONFIG, TOOL_NAME, TOOL_VERSION
    from logger import log_debug
    from core.bell_utils import BDState, region_label
    from core.validation_utils import tetrahedron_margins


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, f".{CLI_CONFIG['float_digits']}g")


def _plain(value: Any) -> Any:
    """numpy scalars and arrays → Python values"""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


def dumps(value: Any, indent: int = 2, _level: int = 0) -> str:
    """json.dumps with fixed 17-significant-digit floats"""
    value = _plain(value)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, complex):
        return dumps([value.real, value.imag], indent, _level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(isinstance(_plain(v), (int, float)) and not isinstance(_plain(v), bool) for v in value):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in value) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def build_report(
    command: str,
    inputs: Dict,
    outputs: Dict,
    residuals: Optional[Dict] = None,
    seed: Optional[int] = None,
    started: Optional[float] = None,
) -> Dict:
    """Report envelope shared by every command"""
    return {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "seed": seed,
        "inputs": inputs,
        "outputs": outputs,
        "residuals": residuals or {},
        "wall_time_s": (time.perf_counter() - started) if started is not None else None,
    }


def _vertex_rows() -> List[Dict]:
    rows = []
    for label, (t1, t2, t3) in GEOMETRY_CONFIG["tetrahedron_vertices"].items():
        rows.append({"kind": "tetrahedron_vertex", "label": label, "t1": t1, "t2": t2, "t3": t3,
                     "region": f"vertex:{label}"})
    for label, (t1, t2, t3) in GEOMETRY_CONFIG["octahedron_vertices"].items():
        rows.append({"kind": "octahedron_vertex", "label": label, "t1": t1, "t2": t2, "t3": t3,
                     "region": "separable"})
    return rows


def _face_rows() -> List[Dict]:
    """Centroids of the four singlet-type octahedron faces that bound the entangled tetrahedra"""
    rows = []
    octa = GEOMETRY_CONFIG["octahedron_vertices"]
    for label, vertex in GEOMETRY_CONFIG["tetrahedron_vertices"].items():
        signs = np.sign(vertex)
        names = [f"O{i + 1}{'+' if s > 0 else '-'}" for i, s in enumerate(signs)]
        centroid = np.mean([octa[name] for name in names], axis=0)
        rows.append({"kind": "octahedron_face", "label": "|".join(names), "t1": centroid[0],
                     "t2": centroid[1], "t3": centroid[2], "region": f"face:{label}"})
    return rows


def geometry_table(resolution: int = 0) -> pd.DataFrame:
    """
    Vertex, face and sampled point data of the Bell-diagonal geometry

    Args:
        resolution: grid points per axis minus one; 0 gives vertices and faces only

    Returns:
        DataFrame with columns kind, label, t1, t2, t3, region
    """
    rows = _vertex_rows()
    if resolution > 0:
        rows.extend(_face_rows())
        axis = np.linspace(-1.0, 1.0, resolution + 1)
        for t in product(axis, repeat=3):
            if np.min(tetrahedron_margins(t)) < 0.0:
                continue
            state = BDState.from_t(t)
            rows.append({"kind": "sample", "label": "", "t1": t[0], "t2": t[1], "t3": t[2],
                         "region": region_label(state)})
    log_debug(f"Geometry table with {len(rows)} rows")
    return pd.DataFrame(rows, columns=["kind", "label", "t1", "t2", "t3", "region"])


def batch_summary(records: Iterable[Dict]) -> pd.DataFrame:
    """Worst, mean and count per property over batch records {property, residual}"""
    frame = pd.DataFrame(list(records), columns=["property", "residual"])
    if frame.empty:
        return pd.DataFrame(columns=["property", "count", "worst", "mean"])
    grouped = frame.groupby("property", sort=True)["residual"]
    return pd.DataFrame({
        "count": grouped.count(),
        "worst": grouped.max(),
        "mean": grouped.mean(),
    }).reset_index()
