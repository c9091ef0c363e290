"""Build the compiled kernels when Cython and a C compiler are available.

Without them the package still installs and uses the pure-Python kernels.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HEXWEAVE_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("hexweave._ckernels", ["src/hexweave/_ckernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
