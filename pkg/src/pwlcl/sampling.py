"""Random parameter draws for property checks and the CLI audit."""

from __future__ import annotations

import numpy as np

from .lienard import LienardParams

__all__ = ["random_admissible", "EXAMPLE_PARAMS", "MIRRORED_EXAMPLE_PARAMS"]

#: the illustrative parameter set used throughout the docs and tests
EXAMPLE_PARAMS = LienardParams(tL=0.4, tR=-0.3, dL=3.0, dR=0.1, a=-0.2)
#: time reversal combined with y -> -y: same orbits, opposite stability
MIRRORED_EXAMPLE_PARAMS = LienardParams(tL=-0.4, tR=0.3, dL=3.0, dR=0.1, a=-0.2)


def random_admissible(rng: np.random.Generator, kind: str = "mixed") -> LienardParams:
    """Draw parameters with ``a != 0`` and ``tL * tR < 0``.

    ``kind="focus"`` makes both linear systems foci (``T^2 < 4D``), so both
    W polynomials are positive on the whole line; ``"mixed"`` lets the
    determinants range over saddles, nodes and foci.
    """
    s = rng.choice((-1.0, 1.0))
    tL = s * rng.uniform(0.05, 1.0)
    tR = -s * rng.uniform(0.05, 1.0)
    a = rng.choice((-1.0, 1.0)) * rng.uniform(0.05, 1.0)
    if kind == "focus":
        dL = tL * tL / 4.0 + rng.uniform(0.05, 3.0)
        dR = tR * tR / 4.0 + rng.uniform(0.05, 3.0)
    elif kind == "mixed":
        dL = rng.uniform(-1.0, 3.0)
        dR = rng.uniform(-1.0, 3.0)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return LienardParams(float(tL), float(tR), float(dL), float(dR), float(a))
