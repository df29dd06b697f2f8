"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``BLWEIGHT_BACKEND=python`` to force the fallback, or ``compiled`` to
fail loudly when the extension is missing.
"""

import os

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

_choice = os.environ.get("BLWEIGHT_BACKEND", "auto").lower()
if _choice == "compiled" and _compiled is None:
    raise ImportError("BLWEIGHT_BACKEND=compiled but blweight.estimator._kernel is not built")

if _choice != "python" and _compiled is not None:
    eval_product = _compiled.eval_product
    NAME = "compiled"
else:
    eval_product = _kernel_py.eval_product
    NAME = "python"

python_eval_product = _kernel_py.eval_product
compiled_eval_product = None if _compiled is None else _compiled.eval_product
