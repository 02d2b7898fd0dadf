"""Python access to the specfrob checks. Inputs and outputs are plain dicts."""

import json

from . import _core

InputError = _core.InputError

__all__ = ["InputError", "frobenius_check", "sg_restrict", "combinatorics", "shipped_family", "periods",
           "pipeline", "suite"]


def _enc(obj):
    return "" if obj is None else json.dumps(obj)


def frobenius_check(psi_input):
    return json.loads(_core.frobenius_check(_enc(psi_input)))


def sg_restrict(prepotential):
    return json.loads(_core.sg_restrict(_enc(prepotential)))


def combinatorics(group, genus):
    return json.loads(_core.combinatorics(group, genus))


def shipped_family():
    return json.loads(_core.shipped_family())


def periods(family=None):
    return json.loads(_core.periods(_enc(family)))


def pipeline(family=None):
    return json.loads(_core.pipeline(_enc(family)))


def suite(name, seed=0):
    return json.loads(_core.suite(name, seed))
