"""Exact distribution-learning constructions and no-free-lunch oracles.

Rationals cross the boundary as "num/den" strings; this layer turns them
into fractions.Fraction. Configs use the same JSON shape as the CLI.
"""

import json
import os
from fractions import Fraction

try:
    from . import _pacnfl as _core
except ImportError:  # in-tree build: the extension sits next to the package
    import _pacnfl as _core

PacnflError = _core.PacnflError
__version__ = _core.version

__all__ = [
    "PacnflError",
    "diagonal",
    "dominates",
    "error_class",
    "evaluate",
    "markov_reverse",
    "members",
    "run",
    "subcommands",
    "symmetrized_lower_bound",
    "tv",
]


def _frac(text):
    return Fraction(text)


def _rat(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    raise TypeError(f"expected Fraction, int or 'a/b' string, got {type(value).__name__}")


def _dist(p):
    if isinstance(p, dict) and "atoms" in p:
        return json.dumps(p)
    atoms = []
    for atom, w in p.items():
        atoms.append([list(atom) if isinstance(atom, tuple) else atom, _rat(w)])
    return json.dumps({"atoms": atoms})


def error_class(exc):
    """Error class name of a PacnflError, e.g. "ConfigError"."""
    return str(exc).split(":", 1)[0]


def subcommands():
    return list(_core.subcommands())


def evaluate(command, config, base_dir="."):
    """Run a subcommand in memory and return the report dict."""
    return json.loads(_core.evaluate(command, json.dumps(config), os.fspath(base_dir)))


def run(command, config, out_dir, base_dir="."):
    """Run a subcommand and write report, CSVs and manifest into out_dir."""
    return json.loads(_core.run_to(command, json.dumps(config), os.fspath(base_dir), os.fspath(out_dir)))


def tv(p, q):
    """Exact total variation distance. p, q map atoms (int or (x, y)) to masses."""
    return _frac(json.loads(_core.tv(_dist(p), _dist(q))))


def members(class_spec, limit=1 << 20):
    return json.loads(_core.members(json.dumps(class_spec), limit))


def symmetrized_lower_bound(class_spec, m, budget=10_000_000):
    return _frac(json.loads(_core.symmetrized_lower_bound(json.dumps(class_spec), m, budget)))


def markov_reverse(mean, a):
    return _frac(json.loads(_core.markov_reverse(json.dumps(_rat(mean)), json.dumps(_rat(a)))))


def diagonal(tables):
    return json.loads(_core.diagonal(json.dumps(tables)))["values"]


def dominates(f, g):
    return json.loads(_core.dominates(json.dumps(f), json.dumps(g)))
