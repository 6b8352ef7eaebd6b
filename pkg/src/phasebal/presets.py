"""Pinned scenario fixtures.

These are frozen so the test suite and downstream consumers can reproduce
the documented numbers byte for byte. Positions left unspecified by a
fixture default to the evenly spaced row (2(k-1), 0); steady directions and
order parameters do not depend on positions, so only centroid outputs are
affected by that choice.
"""

_TWO_AGENT_POSITIONS = [[-1.0, -2.0], [5.0, -2.0]]

PRESETS = {
    "example1": {
        "n": 7,
        "theta0_deg": [-90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0],
        "gains": [2.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0],
        "law": "balance",
    },
    "example2a": {
        "n": 3,
        "theta0_deg": [0.0, 30.0, 60.0],
        "gains": [2.0, 3.0, 6.0],
        "law": "balance",
    },
    "example2b": {
        "n": 3,
        "theta0_deg": [0.0, 30.0, 60.0],
        "gains": [6.0, 3.0, 1.0],
        "law": "balance",
    },
    "example3a": {
        "n": 2,
        "theta0_deg": [0.0, 120.0],
        "gains": [3.0, -1.0],
        "r0": _TWO_AGENT_POSITIONS,
        "law": "balance",
    },
    "example3b": {
        "n": 2,
        "theta0_deg": [0.0, 120.0],
        "gains": [-3.0, 5.0],
        "r0": _TWO_AGENT_POSITIONS,
        "law": "balance",
    },
    "example4": {
        "n": 2,
        "theta0_deg": [0.0, 120.0],
        "gains": [1.0, 1.0],
        "r0": _TWO_AGENT_POSITIONS,
        "law": "balance",
    },
    "splay10": {
        "n": 10,
        "theta0_deg": [
            -161.0,
            -118.0,
            -93.0,
            -55.0,
            -17.0,
            12.0,
            48.0,
            95.0,
            131.0,
            166.0,
        ],
        "gains": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
        "law": "splay",
    },
    "fig5": {
        "n": 3,
        "theta0_deg": [0.0, 30.0, 60.0],
        "gains": [-0.5, 4.0, 7.0],
        "law": "balance",
    },
}

ALIASES = {
    "example2": "example2a",
    "example3": "example3a",
}


def resolve_preset(name: str) -> dict:
    """Return a copy of the preset config for ``name`` (aliases allowed)."""
    key = ALIASES.get(name, name)
    if key not in PRESETS:
        known = ", ".join(sorted(set(PRESETS) | set(ALIASES)))
        raise KeyError(f"unknown preset {name!r}; known presets: {known}")
    data = dict(PRESETS[key])
    data["seed_name"] = key
    return data
