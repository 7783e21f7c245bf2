"""
Readers and writers for the text interchange formats: edge lists for graphs
and JSON for incomplete 2-balls and reports.

Edge-list format::

    # comment lines start with '#'
    n 5
    0 1
    0 2
    ...

Vertices are 0-indexed; writers emit every edge once as ``u v`` with u < v
in lexicographic order.
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import BaseModel, ValidationError

from quartic_curvature.data_models import FLOAT_DIGITS, BallModel
from quartic_curvature.exceptions import InvalidParametersError
from quartic_curvature.graph_core.graph import Graph, from_edge_list

__all__ = [
    "parse_edge_list",
    "format_edge_list",
    "read_edge_list",
    "write_edge_list",
    "parse_ball_json",
    "read_ball_json",
    "format_float",
    "round_floats",
    "model_to_json",
]

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format into a Graph

    Parameters
    ----------
    text :
        The file contents

    Returns
    -------
    :
        The graph described by the text

    Raises
    ------
    InvalidParametersError
        If the header is missing, a line is malformed or an edge is invalid
    """
    n = None
    edges: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise InvalidParametersError(f"Line {lineno}: expected header 'n <count>', got {line!r}")
            n = _parse_int(parts[1], lineno)
            continue
        if len(parts) != 2:
            raise InvalidParametersError(f"Line {lineno}: expected 'u v', got {line!r}")
        edges.append((_parse_int(parts[0], lineno), _parse_int(parts[1], lineno)))
    if n is None:
        raise InvalidParametersError("Edge list has no 'n <count>' header")
    return from_edge_list(n, edges)


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InvalidParametersError(f"Line {lineno}: {token!r} is not an integer")


def format_edge_list(graph: Graph) -> str:
    """Return the edge-list text of graph"""
    lines = [f"n {graph.n}"] + [f"{u} {v}" for u, v in graph.edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(path: PathLike) -> Graph:
    """Read a graph from an edge-list file"""
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise InvalidParametersError(f"Could not read {path}: {err}")
    logger.info(f"Reading edge list from {path}")
    return parse_edge_list(text)


def write_edge_list(graph: Graph, path: PathLike):
    """Write graph to path in the edge-list format"""
    logger.info(f"Writing {graph} to {path}")
    Path(path).write_text(format_edge_list(graph))


def parse_ball_json(text: str) -> BallModel:
    """Parse the ball JSON interchange format

    Raises
    ------
    InvalidParametersError
        If the text is not valid JSON or does not describe a ball
    """
    try:
        return BallModel(**json.loads(text))
    except (json.JSONDecodeError, TypeError) as err:
        raise InvalidParametersError(f"Malformed ball JSON: {err}")
    except ValidationError as err:
        raise InvalidParametersError(f"Invalid ball: {err}")


def read_ball_json(path: PathLike) -> BallModel:
    """Read a ball from a JSON file"""
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise InvalidParametersError(f"Could not read {path}: {err}")
    return parse_ball_json(text)


def format_float(value: float, digits: int = FLOAT_DIGITS) -> str:
    """Format a float with a fixed number of significant digits

    Integral values keep a trailing ``.0`` so that columns read as floats.
    """
    if math.isnan(value) or math.isinf(value):
        return str(value)
    text = f"{value:.{digits}g}"
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def round_floats(value: Any, digits: int = FLOAT_DIGITS) -> Any:
    """Round every float nested in value to the given significant digits"""
    if isinstance(value, float):
        return float(format_float(value, digits))
    if isinstance(value, dict):
        return {k: round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    return value


def model_to_json(model: Union[BaseModel, List[BaseModel]], exclude_none: bool = True) -> str:
    """Serialize one model or a list of models with fixed float formatting and key order"""
    if isinstance(model, list):
        data: Any = [m.dict(exclude_none=exclude_none) for m in model]
    else:
        data = model.dict(exclude_none=exclude_none)
    return json.dumps(round_floats(data), separators=(",", ":"))
