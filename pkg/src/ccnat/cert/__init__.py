"""Conversion certificates: data model, emission and an independent replay checker.

``ccnat.cert.verify`` and ``ccnat.cert.model`` never load the saturation engine;
the emitter is imported on first use.
"""

import importlib

from .model import Certificate, CertificateFormatError, context_hash, dumps, loads
from .verify import check_certificate, verify

_LAZY = {"emit": "emitter", "certificate": "emitter", "EmitError": "emitter"}


def __getattr__(name):
    mod = _LAZY.get(name)
    if mod is None:
        raise AttributeError(name)
    return getattr(importlib.import_module(f"{__name__}.{mod}"), name)


__all__ = [
    "Certificate",
    "CertificateFormatError",
    "EmitError",
    "certificate",
    "check_certificate",
    "context_hash",
    "dumps",
    "emit",
    "loads",
    "verify",
]
