"""Build the optional compiled kernel extension.

The package works without it: ddtloc.backend falls back to the NumPy
implementation when the extension is absent or fails to import.
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ddtloc/_kernels.pyx"],
        compiler_directives={"language_level": 3},
    )
    include_dirs = [numpy.get_include()]
except ImportError:
    ext_modules = []
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
