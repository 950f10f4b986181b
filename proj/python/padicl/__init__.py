import json

from . import _core
from ._core import PadiclError, config_dir, sha256, suite_names

__all__ = [
    "PadiclError",
    "config_dir",
    "field_validate",
    "lfun_compute",
    "lfun_eval",
    "sha256",
    "suite_names",
    "symbol_build",
    "symbol_lift",
    "verify",
]


def field_validate(path):
    return json.loads(_core.field_validate(path))


def symbol_build(config="", **overrides):
    return json.loads(_core.symbol_build(config, **overrides))


def symbol_lift(config="", **overrides):
    return json.loads(_core.symbol_lift(config, **overrides))


def lfun_compute(config="", **overrides):
    return json.loads(_core.lfun_compute(config, **overrides))


def lfun_eval(config="", **overrides):
    return json.loads(_core.lfun_eval(config, **overrides))


def verify(suite, config="", **overrides):
    return json.loads(_core.verify(suite, config, **overrides))
