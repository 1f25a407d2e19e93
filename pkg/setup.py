"""Build script: compiles the optional multipath kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so any build failure here downgrades to a pure
Python install instead of aborting.
"""

import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "isacsel.kernels._multipath",
                ["src/isacsel/kernels/_multipath.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # Cython missing or cythonize failed
    print(f"isacsel: building without compiled kernels ({exc})", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
