"""Build script: compiles the optional RK4 extension core.

The package works without the extension (a pure-Python kernel is selected
at import time), so any failure here downgrades to a warning instead of
aborting the install.
"""
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Tolerate a missing compiler: fall back to the pure-Python kernels."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing / misconfigured
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: building the compiled core failed ({exc}); "
              "gammares will use the pure-Python kernels.", file=sys.stderr)


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("gammares._core", ["src/gammares/_core.pyx"],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )
except ImportError:
    print("WARNING: Cython not available; skipping the compiled core.",
          file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
