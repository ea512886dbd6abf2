"""Build script for the optional compiled kernels.

Metadata lives in pyproject.toml.  If Cython or a C++ compiler is missing
the package still installs and falls back to the pure-Python kernels.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("HOMLAB_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        extensions = [
            Extension(
                "homlab.linalg._modp",
                ["src/homlab/linalg/_modp.pyx"],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            ),
            Extension(
                "homlab.fox._foxchain",
                ["src/homlab/fox/_foxchain.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            ),
        ]
        ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
