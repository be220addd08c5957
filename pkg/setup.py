"""Build script for the optional Cython annealing kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), but the compiled kernel is strongly recommended for any
problem beyond toy sizes. Build in place with:

    python setup.py build_ext --inplace

``-ffp-contract=off`` keeps the compiled kernel's floating-point results
bit-identical to the pure-Python twin.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "sparsequbo._sa_core",
                ["src/sparsequbo/_sa_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
