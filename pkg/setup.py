"""Build script for the optional compiled stepping kernel.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); building it just makes master-equation sweeps a few
times faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "catsum._stepper",
                ["src/catsum/_stepper.pyx"],
                extra_compile_args=["-O3", "-fcx-limited-range"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
