"""Build the optional Cython walk kernel.

The package works without it: ``hcaplab._walk`` falls back to the numpy
implementation when the extension cannot be imported.
"""
import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HCAPLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "hcaplab._walk_ext",
                    ["src/hcaplab/_walk_ext.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
