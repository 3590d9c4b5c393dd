"""Run metadata: which conventions and tolerances produced a result."""
from __future__ import annotations

import datetime as _dt
import os

from . import __version__
from .entanglement import CLAMP_TOL, IDENTITY_MAPPING, SPECTRUM_TOL, QubitMapping
from .model import ZeemanSign
from .spin_algebra import HERMITIAN_TOL

ETA_SIGN_CONVENTION = "(eta/2)(I+^2 + I-^2)"
EOF_X_CONVENTION = "x = (1 + sqrt(1 - C^2))/2"


def timestamp() -> str:
    """UTC time in ISO format; honours ``SOURCE_DATE_EPOCH`` for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        when = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        when = _dt.datetime.now(tz=_dt.timezone.utc)
    return when.replace(microsecond=0).isoformat()


def run_metadata(mapping: QubitMapping = IDENTITY_MAPPING,
                 zeeman_sign: ZeemanSign = ZeemanSign.PAPER, **extra) -> dict:
    meta = {
        "package_version": __version__,
        "eta_sign_convention": ETA_SIGN_CONVENTION,
        "eof_x_convention": EOF_X_CONVENTION,
        "qubit_mapping": list(mapping.permutation),
        "qubit_mapping_is_default": mapping.is_identity,
        "zeeman_sign": ZeemanSign(zeeman_sign).value,
        "hermitian_tol": HERMITIAN_TOL,
        "spectrum_tol": SPECTRUM_TOL,
        "concurrence_clamp_tol": CLAMP_TOL,
    }
    meta.update(extra)
    meta["timestamp"] = timestamp()
    return meta
