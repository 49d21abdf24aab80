"""Build hook for the optional compiled kernel.

The package is pure Python plus one optional Cython extension; when
Cython (or a C toolchain) is missing the install still succeeds and
``qhaar.kernels`` falls back to the interpreted twin.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/qhaar/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
