"""Build script for the compiled matching kernel.

The package works without the extension (a pure-Python matcher is used as a
fallback), so compilation failures are tolerated: ``pip install`` will still
produce a functional install.
"""

import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("FTQEM_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "ftqem.surface.matching._blossom",
                    ["src/ftqem/surface/matching/_blossom.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except Exception as exc:  # pragma: no cover - build-environment dependent
        print(f"ftqem: skipping compiled matcher ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
