"""Build script: compiles the optional Cython speedups.

The package works without the extension (pure-Python twins live in
flatlab._kernels.pykernels); set FLATLAB_NO_EXTENSION=1 to skip the build.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("FLATLAB_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "flatlab._kernels._speedups",
                    ["src/flatlab/_kernels/_speedups.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
