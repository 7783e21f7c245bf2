"""Order-independent JSON strings and FNV-1a fingerprints of graphs"""
import json
import logging
from typing import Any, Iterable, Sequence

from fnvhash import fnv1a_32

__all__ = ["sorted_json_string", "graph_fingerprint"]

logger = logging.getLogger(__name__)


def sorted_json_string(jsonable: Any) -> str:
    """Produce a string that is unique to a json's contents

    Lists are treated as multisets: their elements are sorted by their own
    string representation, so two lists holding the same items in a
    different order produce the same string.

    Parameters
    ----------
    jsonable :
        A json compatible value (dict, list, tuple, str, int, float, bool or
        None) to create a sorted string out of

    Returns
    -------
    :
        The sorted string representation of the value
    """
    if isinstance(jsonable, str):
        return jsonable
    elif isinstance(jsonable, (tuple, list)):
        return "[%s]" % (",".join(sorted(sorted_json_string(s) for s in jsonable)))
    elif isinstance(jsonable, dict):
        return "{%s}" % (",".join(sorted(k + sorted_json_string(v) for k, v in jsonable.items())))
    elif isinstance(jsonable, bool) or jsonable is None:
        return json.dumps(jsonable)
    elif isinstance(jsonable, (int, float)):
        return str(jsonable)
    else:
        raise TypeError(f"Invalid type: {type(jsonable)}")


def graph_fingerprint(n: int, edges: Iterable[Sequence[int]]) -> int:
    """Hash a labeled graph given by vertex count and edge list

    Two graphs share a fingerprint when they have the same labeled edge set;
    pass canonically labeled edges to get an isomorphism invariant.
    """
    jsonable = {"n": n, "edges": [sorted(e) for e in edges]}
    return fnv1a_32(sorted_json_string(jsonable).encode("utf-8"))
