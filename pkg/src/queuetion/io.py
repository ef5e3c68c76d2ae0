"""JSON file formats and random instance generation.

Instance file::

    {"participants": [{"id": "A", "t": 1, "w": "3/2"}, ...]}

Bid file::

    {"kind": "vcg", "bids": {"A": 3, "B": "5/2"}}

Numbers are JSON numbers or ``"p/q"`` strings. Integers and strings are
exact; a JSON float switches the instance to float mode.
"""

from __future__ import annotations

import json
import math
import random
from fractions import Fraction
from pathlib import Path

from .core import Instance, validate_instance
from .errors import FormatError
from .mechanisms import BidProfile, make_profile
from .numeric import DEFAULT_EPS, format_number


def _read_json(source):
    if isinstance(source, (dict, list)):
        return source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: invalid JSON ({exc})") from exc


def instance_rows(data) -> list[tuple]:
    if not isinstance(data, dict) or not isinstance(data.get("participants"), list):
        raise FormatError('instance must be an object with a "participants" list')
    rows = []
    for i, item in enumerate(data["participants"]):
        if not isinstance(item, dict) or not {"id", "t", "w"} <= item.keys():
            raise FormatError(f"participant #{i} must have id, t and w")
        rows.append((item["id"], item["t"], item["w"]))
    return rows


def load_instance(source, exact: bool | None = None, eps: float = DEFAULT_EPS) -> Instance:
    return validate_instance(instance_rows(_read_json(source)), exact=exact, eps=eps)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "participants": [
            {"id": p.id, "t": format_number(p.t), "w": format_number(p.w)} for p in inst.participants
        ]
    }


def load_profile(source, inst: Instance, kind=None) -> BidProfile:
    """Read a bid file; ``kind`` overrides the file's own ``"kind"``."""
    data = _read_json(source)
    if not isinstance(data, dict) or not isinstance(data.get("bids"), dict):
        raise FormatError('bid file must be an object with a "bids" mapping')
    kind = kind or data.get("kind")
    if kind is None:
        raise FormatError('bid file has no "kind" and none was given')
    return make_profile(inst, kind, data["bids"])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def random_instance(
    n: int, rng: random.Random, dist: str = "uniform", exact: bool = False, distinct: bool = False
) -> Instance:
    """Random instance with ids ``P1..Pn``.

    Exact instances draw ``t`` and ``w`` as small ratios ``a/b`` with
    ``a`` in 1..12 and ``b`` in 1..4; ``dist`` only shapes float instances.
    ``distinct=True`` redraws until all value rates differ.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if dist not in ("uniform", "lognormal"):
        raise ValueError("dist must be 'uniform' or 'lognormal'")
    while True:
        rows = []
        for i in range(n):
            if exact:
                t = Fraction(rng.randint(1, 12), rng.randint(1, 4))
                w = Fraction(rng.randint(1, 12), rng.randint(1, 4))
            elif dist == "uniform":
                t = round(rng.uniform(0.5, 5.0), 6)
                w = round(rng.uniform(0.5, 10.0), 6)
            else:
                t = round(math.exp(rng.gauss(0.0, 0.75)), 6)
                w = round(math.exp(rng.gauss(0.5, 0.75)), 6)
            rows.append((f"P{i + 1}", t, w))
        inst = validate_instance(rows, exact=exact)
        if not distinct or inst.distinct_value_rates():
            return inst
