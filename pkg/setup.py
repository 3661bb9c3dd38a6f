"""Build script: compiles the optional C core.

The extension is a pure accelerator -- if Cython or a C compiler is missing
the install still succeeds and the package falls back to the pure-Python
kernels in ``dynrumor._core_py`` (see ``dynrumor._kernels``).
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: building the compiled core failed (%s); "
            "falling back to the pure-Python kernels." % (exc,),
            file=sys.stderr,
        )


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print("WARNING: %s; skipping the compiled core." % (exc,), file=sys.stderr)
        return []
    ext = Extension(
        "dynrumor._core",
        ["src/dynrumor/_core.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
