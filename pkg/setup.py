"""Build script for the optional compiled kernels.

The extension is marked optional: if it fails to compile the package still
installs and falls back to the numpy kernels at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "zicdgr._kernels",
                ["src/zicdgr/_kernels.pyx"],
                # keep a*b+c unfused so results match the numpy path bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )

setup(ext_modules=ext_modules)
