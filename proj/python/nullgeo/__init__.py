"""Screen geometry of null hypersurfaces.

Thin wrapper over the compiled core: reports come back as dicts.
"""

import json
from pathlib import Path

from ._nullgeo import (
    ConfigError,
    ExpressionError,
    NullgeoError,
    Session,
    canonical,
    catalog_dump,
    catalog_names,
    config_hash,
    transnormal_residual,
)

__all__ = [
    "ConfigError",
    "ExpressionError",
    "NullgeoError",
    "Session",
    "canonical",
    "catalog",
    "catalog_dump",
    "catalog_names",
    "check",
    "config_hash",
    "run",
    "schema",
    "transnormal_residual",
]


def _session(config):
    if isinstance(config, Session):
        return config
    if isinstance(config, dict):
        config = json.dumps(config)
    return Session(config)


def catalog(name):
    """Catalog entry as a config dict."""
    return json.loads(catalog_dump(name))


def run(config, checks=()):
    """Run a config (dict, JSON text, 'catalog:NAME' or Session); returns the report dict."""
    return json.loads(_session(config).run(list(checks)))


def check(config, name, screen="", field=""):
    """Run one check; returns its report entry."""
    return json.loads(_session(config).check(name, screen, field))["checks"][0]


def schema():
    """JSON Schema of run configs."""
    return json.loads((Path(__file__).with_name("run_config.schema.json")).read_text())
