"""Build script for the optional Cython propagation kernel.

The package works without the compiled extension (a NumPy/SciPy fallback is
selected at import time), so a failed extension build is demoted to a warning
rather than aborting the install.
"""

import warnings

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext = Extension(
        "modeswap._kernel",
        sources=["src/modeswap/_kernel.pyx"],
        # -fcx-limited-range: plain complex multiply without the NaN/inf
        # recovery branches; the kernel never produces non-finite values.
        extra_compile_args=["-O3", "-fcx-limited-range"],
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover - build-environment dependent
    warnings.warn(f"Cython kernel not built ({exc}); pure-Python backend will be used")
    ext_modules = []
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
