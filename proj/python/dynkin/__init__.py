"""Python access to the threshold-equilibrium solver.

Specs are passed as dicts or JSON strings; results come back as dicts.
"""

import json as _json

from . import _core
from ._core import (  # noqa: F401
    ConditionError,
    ConvergenceError,
    CertificationError,
    DomainError,
    SpecError,
    example_names,
)


def _text(spec):
    return spec if isinstance(spec, str) else _json.dumps(spec)


def example(name):
    return _json.loads(_core.example(name))


def spec_digest(spec):
    return _core.spec_digest(_text(spec))


def validate(spec):
    return _json.loads(_core.validate(_text(spec)))


def solve(spec, start=None, tol=1e-10, max_iter=500, grid=4096):
    return _json.loads(_core.solve(_text(spec), start, tol, max_iter, grid))


def stability(spec, l, r, grid=1024):
    return _json.loads(_core.stability(_text(spec), l, r, grid))


def uniqueness(spec, grid=129, simplex_steps=101):
    return _json.loads(_core.uniqueness(_text(spec), grid, simplex_steps))


def value_function(spec, player, region, grid=4096):
    return _core.value_function(_text(spec), player, [tuple(iv) for iv in region], grid)


def transform(spec):
    return _json.loads(_core.transform(_text(spec)))


def utility(spec, player, x, y):
    return _core.utility(_text(spec), player, x, y)


def mc_payoff(spec, player, l, r, x, paths=100000, dt=1e-4, seed=42):
    return _core.mc_payoff(_text(spec), player, l, r, x, paths, dt, seed)
