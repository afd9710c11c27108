"""Explanations for unsolvable planning problems, optionally under advice."""

import json
from pathlib import Path

from . import _core
from ._core import (
    InputError,
    Model,
    NoExplanation,
    PreconditionError,
    ResourceExhausted,
    compile_advice,
    explain_text,
    lattice,
    load_model,
)

__all__ = [
    "InputError",
    "Model",
    "NoExplanation",
    "PreconditionError",
    "ResourceExhausted",
    "check",
    "compile_advice",
    "explain",
    "explain_text",
    "landmarks",
    "lattice",
    "load",
    "load_model",
]


def _text(value):
    """Accept JSON-able objects as well as raw JSON text."""
    if value is None or isinstance(value, str):
        return value
    return json.dumps(value)


def load(domain_path, problem_path):
    return load_model(Path(domain_path).read_text(), Path(problem_path).read_text())


def check(model, advice=None, **budgets):
    return json.loads(_core.check(model, _text(advice), **budgets))


def explain(model, lattice_spec, advice=None, exemplar="auto", **budgets):
    text = _core.explain_json(model, _text(lattice_spec), _text(advice), exemplar, **budgets)
    return json.loads(text)


def landmarks(model):
    return json.loads(_core.landmarks_json(model))
