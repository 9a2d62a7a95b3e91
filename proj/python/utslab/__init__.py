"""Python access to the universal Taylor series laboratory.

Polynomials, compacts, scenarios, streams and certificates are plain
dictionaries in the same JSON layout the command-line tool reads and writes.
"""

import json

from . import _core
from ._core import DimensionError, DomainError, SchemaError, UtsError

__all__ = [
    "UtsError", "SchemaError", "DomainError", "DimensionError",
    "unrank", "rank", "capture_index", "evaluate", "shift_center",
    "taylor_coefficient", "partial_sum", "catalog_polynomial",
    "check_E", "check_F", "fit_two_piece", "construct", "verify",
    "builtin_scenarios",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def unrank(k, dim, tag="graded-lex"):
    return tuple(_core.unrank(tag, dim, k))


def rank(index, tag="graded-lex"):
    return _core.rank(tag, list(index))


def capture_index(degrees, tag="graded-lex"):
    return _core.capture_index(tag, list(degrees))


def evaluate(poly, z, w=()):
    return _core.evaluate(_text(poly), list(w), list(z))


def shift_center(poly, zeta):
    return json.loads(_core.shift_center(_text(poly), list(zeta)))


def taylor_coefficient(poly, zeta, m, w=()):
    return _core.taylor_coefficient(_text(poly), list(w), list(zeta), list(m))


def partial_sum(poly, zeta, n, tag="graded-lex"):
    """S_n about zeta, returned in powers of z."""
    return json.loads(_core.partial_sum(_text(poly), list(zeta), n, tag))


def catalog_polynomial(j, r=0, d=1):
    return json.loads(_core.catalog_polynomial(r, d, j))


def check_E(candidate, spec, context):
    return json.loads(_core.check_predicate("E", _text(candidate), _text(spec), _text(context)))


def check_F(candidate, spec, context):
    return json.loads(_core.check_predicate("F", _text(candidate), _text(spec), _text(context)))


def fit_two_piece(g, f, inner, outer, degree=60, sweep=(10, 20, 40, 60), tolerance=1e-3):
    """Fit one polynomial to g on `inner` and f on `outer`."""
    return json.loads(_core.fit_two_piece(_text(g), _text(f), _text(inner), _text(outer),
                                          degree, list(sweep), tolerance))


def construct(scenario, density=None):
    """Run a scenario; returns {"stream", "certificate", "stage_seconds"}."""
    return json.loads(_core.construct(_text(scenario), density))


def verify(stream, certificate):
    """Recompute every stage predicate; returns (ok, problems)."""
    ok, problems = _core.verify(_text(stream), _text(certificate))
    return ok, list(problems)


def builtin_scenarios():
    return {name: json.loads(text) for name, text in _core.builtin_scenarios()}
