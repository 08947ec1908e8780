"""Build script: compiles the optional integrator extension when a toolchain exists.

The package is fully functional without the extension; `chronolab.classical`
falls back to the pure-Python stepping kernels at import time.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the accelerator instead of failing the whole install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, broken toolchain, ...
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"warning: optional extension build failed ({exc}); "
              "falling back to the pure-Python integrator kernels")


def extensions():
    if os.environ.get("CHRONOLAB_PURE_PYTHON"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "chronolab._midpoint",
        ["src/chronolab/_midpoint.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
