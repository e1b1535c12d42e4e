"""Build script: compiles the optional Cython kernel for the KL engine.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time); the extension only accelerates the
hot column recursion.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("LADDERRING_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        import numpy

        ext_modules = cythonize(
            ["src/ladderring/_klcore.pyx"],
            language_level=3,
        )
        for ext in ext_modules:
            ext.include_dirs.append(numpy.get_include())
            ext.define_macros.append(("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"))
    except ImportError:
        print("Cython not available; building without the compiled KL kernel")

setup(ext_modules=ext_modules)
