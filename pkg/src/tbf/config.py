"""Size caps, overridable through the ``TBF_CAPS`` environment variable.

``TBF_CAPS`` is a comma separated list of ``name=value`` pairs, e.g.
``TBF_CAPS="closure=50000,char_table=3000"``.
"""

import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Caps:
    closure: int = 20000          # permutation closure size
    char_table: int = 2000        # group order for character tables
    quotient: int = 5000          # materialized extension quotients
    orbit: int = 2000000          # implicit orbit counting on quotients and cokernels
    assoc_exhaustive: int = 256   # exhaustive associativity check up to this order


def _parse(spec):
    out = {}
    names = {f.name for f in fields(Caps)}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in names:
            raise ValueError(f"unknown cap {key!r} in TBF_CAPS")
        out[key] = int(value)
    return out


def get_caps():
    spec = os.environ.get("TBF_CAPS", "")
    return replace(Caps(), **_parse(spec)) if spec else Caps()
