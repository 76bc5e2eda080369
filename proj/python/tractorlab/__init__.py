"""Exact tractor calculus on conformally flat R^n.

Fields, tractors, reports and verdicts are plain dicts in the JSON schemas
used by the command-line tool. Scales are inline polynomials in x1..xn
(for example ``"1+|x|^2"``) or ScaleSpec dicts.
"""

import json

from . import _core
from ._core import DimensionError, PreconditionError, SchemaError, TractorError, worker_count

__all__ = [
    "DimensionError",
    "PreconditionError",
    "SchemaError",
    "TractorError",
    "check_scale",
    "ckt_basis",
    "ckv_basis",
    "einstein_compatible_dim",
    "einstein_ks_tests",
    "is_conformal_killing",
    "is_killing_tensor",
    "new_killing",
    "parse_poly",
    "prolong",
    "recover_top",
    "verify",
    "weyl_space_dimension",
    "worker_count",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def _scale(sigma):
    if sigma is None:
        return None
    return sigma if isinstance(sigma, str) else json.dumps(sigma)


def parse_poly(text, n):
    return json.loads(_core.parse_poly(text, n))


def ckv_basis(n, degree=2):
    return json.loads(_core.ckv_basis(n, degree))


def ckt_basis(n, degree=4):
    return json.loads(_core.ckt_basis(n, degree))


def weyl_space_dimension(N):
    return _core.weyl_space_dimension(N)


def einstein_compatible_dim(n, sigma):
    return json.loads(_core.einstein_compatible_dim(n, _scale(sigma)))


def is_conformal_killing(field, splitting=None):
    return _core.is_conformal_killing(_dump(field), _scale(splitting))


def prolong(field, level="full", splitting=None):
    return json.loads(_core.prolong(_dump(field), level, _scale(splitting)))


def recover_top(tractor):
    return json.loads(_core.recover_top(_dump(tractor)))


def check_scale(field, sigma, mode="ks", splitting=None):
    return json.loads(_core.check_scale(_dump(field), _scale(sigma), mode, _scale(splitting)))


def einstein_ks_tests(field, sigma):
    return json.loads(_core.einstein_ks_tests(_dump(field), _scale(sigma)))


def new_killing(field, sigma):
    return json.loads(_core.new_killing(_dump(field), _scale(sigma)))


def is_killing_tensor(field, sigma):
    return _core.is_killing_tensor(_dump(field), _scale(sigma))


def verify(n, suite, seed=1):
    return json.loads(_core.verify(n, suite, seed))
