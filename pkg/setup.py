"""Build script for the optional compiled kernels.

The package works without the extension: scriptmine._kernels falls back to
the numpy implementations when the compiled module is missing.
"""

import os
import sys

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SCRIPTMINE_SKIP_EXTENSION") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "scriptmine._kernels._speedups",
                    ["src/scriptmine/_kernels/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError as exc:
        print(f"scriptmine: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
