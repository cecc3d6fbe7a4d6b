"""Build script for the optional compiled subset-lattice kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time); the extension just makes the 2^m lattice
transforms cheaper at large m.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "infoseg._subsetops",
                sources=["src/infoseg/_subsetops.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
