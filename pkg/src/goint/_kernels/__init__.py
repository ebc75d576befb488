"""Kernel backend selection.

The compiled core (`_fastcore`, Cython) is preferred when it built; the
numpy-based `_purepy` backend is the fallback.  `GOINT_BACKEND=python` or
`GOINT_BACKEND=cython` forces a choice (forcing cython raises if the
extension is missing).  Both backends implement the same functions with
identical semantics; `tests/test_backends.py` pins their agreement.
"""

import os

from . import _purepy

_requested = os.environ.get("GOINT_BACKEND", "").strip().lower()

if _requested == "python":
    impl = _purepy
elif _requested == "cython":
    from . import _fastcore as impl  # noqa: F401  (ImportError is the contract)
elif _requested == "":
    try:
        from . import _fastcore as impl
    except ImportError:
        impl = _purepy
else:
    raise RuntimeError(
        f"GOINT_BACKEND={_requested!r} not recognized (use 'python' or 'cython')"
    )

BACKEND = impl.BACKEND_NAME

MIN = _purepy.MIN
PRODUCT = _purepy.PRODUCT
LUKASIEWICZ = _purepy.LUKASIEWICZ
POWER_PRODUCT = _purepy.POWER_PRODUCT
MIN_POWER = _purepy.MIN_POWER
MEAN = _purepy.MEAN
ASYM_TEST = _purepy.ASYM_TEST

op_eval = impl.op_eval
op_eval_many = impl.op_eval_many
segment_capacities = impl.segment_capacities
profile_eval_many = impl.profile_eval_many
profile_max = impl.profile_max
