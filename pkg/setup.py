"""Build script for the compiled kernel backend.

The package is fully functional without the extension (the pure-numpy
reference backend is selected at import time when ``_core`` is missing),
but the Cython twin is built by default for speed.
"""

from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [
            Extension(
                "plasmonchain._kernels._core",
                ["src/plasmonchain/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    ),
)
