"""Builds the optional compiled cover kernel.

The package is fully functional without it; gridstitch.cover selects the
pure-Python kernel when the extension is missing.  Build in place with:

    python setup.py build_ext --inplace
"""

import os

from setuptools import setup

PYX = "src/gridstitch/cover/_kernel.pyx"

ext_modules = []
if os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [PYX], compiler_directives={"language_level": "3"}
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
