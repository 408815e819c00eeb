"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python fallback is
selected at import time); building it just makes the hot loops faster.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/loopsum/_kernels/_speed.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
