"""Panel-blocked Cholesky, LU and QR with classical or Strassen trailing updates."""

from ._panelfact import (
    DimensionError,
    NumericalError,
    cholesky,
    cholesky_crout,
    gen_general,
    gen_spd,
    lu,
    lu_crout,
    mul_rect,
    mul_strassen,
    predict_cost,
    qr,
    qr_mgs,
    resolve_width,
)

__all__ = [
    "DimensionError",
    "NumericalError",
    "cholesky",
    "cholesky_crout",
    "gen_general",
    "gen_spd",
    "lu",
    "lu_crout",
    "mul_rect",
    "mul_strassen",
    "predict_cost",
    "qr",
    "qr_mgs",
    "resolve_width",
]
