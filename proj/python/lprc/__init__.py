"""Line planning with resource constraints.

Instances, plans and reports are plain dicts in the same JSON layout the
``lprc`` command-line tool reads and writes. Exact values are strings such
as ``"0.25"`` or ``"1/3"``.
"""

import json

from . import _lprc
from ._lprc import LimitExceeded

__all__ = [
    "LimitExceeded",
    "__version__",
    "gen_kcover",
    "gen_random",
    "oracle",
    "relax",
    "round",
    "trials_csv",
    "validate",
]

__version__ = _lprc.version()


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def validate(instance):
    """Return ``{"valid": bool, "violations": [...]}``."""
    return json.loads(_lprc.validate(_text(instance)))


def relax(instance, restriction="full", delta=None, tau=None, omega=None, lp_mode="float"):
    """Solve the LP relaxation. ``omega`` maps bus id to line id."""
    return json.loads(
        _lprc.relax(
            _text(instance),
            restriction,
            None if delta is None else str(delta),
            None if tau is None else str(tau),
            dict(omega or {}),
            lp_mode,
        )
    )


def round(instance, algorithm="NC", eta="0.2", tau="0.1", trials=1000, seed=0, jobs=1,
          lp_mode="float", with_oracle=False, enum_cap=1_000_000):
    """Run seeded rounding trials (NC, LC, C or C-Tol) and return the report."""
    return json.loads(
        _lprc.round(_text(instance), algorithm, str(eta), str(tau), trials, seed, jobs,
                    lp_mode, with_oracle, enum_cap)
    )


def trials_csv(instance, algorithm="NC", eta="0.2", tau="0.1", trials=1000, seed=0):
    """Per-trial CSV rows: seed, reward, discarded, usage per resource."""
    return _lprc.trials_csv(_text(instance), algorithm, str(eta), str(tau), trials, seed)


def oracle(instance, max_assignments=100_000, max_nodes=10_000_000, prune=True):
    """Exact optimum by enumeration. Raises LimitExceeded past the limits."""
    return json.loads(_lprc.oracle(_text(instance), max_assignments, max_nodes, prune))


def gen_random(seed=0, **config):
    """Random grid instance. Keyword arguments override generator defaults."""
    if "eta" in config:
        config["eta"] = str(config["eta"])
    return json.loads(_lprc.gen_random(seed, json.dumps(config)))


def gen_kcover(n, sets, k):
    """Max k-cover reduction instance; ``sets`` holds 0-based elements."""
    return json.loads(_lprc.gen_kcover(n, [list(s) for s in sets], k))
