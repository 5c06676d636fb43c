"""Build script: compiles the optional Cython kernel extension.

The extension is a performance twin of capinflow._kernels_py; if Cython or a
C compiler is unavailable the install still succeeds and the package falls
back to the pure-Python kernels at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("CAPINFLOW_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("capinflow._kernels", ["src/capinflow/_kernels.pyx"])],
            language_level=3,
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
