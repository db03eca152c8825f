"""Build hook: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a NumPy reference
backend is selected at import time), so the extension is marked optional
and any build failure is non-fatal.
"""

import os

from setuptools import Extension, setup

ext_modules = []
try:
    if not os.path.exists("src/besselcx/_kernels/_fast.pyx"):
        raise ImportError
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "besselcx._kernels._fast",
                sources=["src/besselcx/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
