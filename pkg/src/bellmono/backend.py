"""Kernel backend selection.

Default is the numba-jitted path; set BELLMONO_DISABLE_NUMBA=1 to force
the pure-numpy fallback (or it engages automatically when numba is not
importable).  `kernels` exposes: expval, expval_batch, joint_objective,
scan_direction, GENERAL, MERMIN.
"""

import os

DISABLE_FLAG = "BELLMONO_DISABLE_NUMBA"

if os.environ.get(DISABLE_FLAG, "0") == "1":
    from . import _kernels_numpy as kernels
    USING_NUMBA = False
else:
    try:
        from . import _kernels_numba as kernels
        USING_NUMBA = True
    except ImportError:
        from . import _kernels_numpy as kernels
        USING_NUMBA = False

GENERAL = kernels.GENERAL
MERMIN = kernels.MERMIN
