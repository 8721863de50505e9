"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a numpy fallback
is selected at import); any failure to cythonize or compile therefore
only prints a notice instead of failing the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        print(f"homsense: skipping compiled kernels ({exc})", file=sys.stderr)
        return []
    return cythonize(
        [Extension("homsense._kernels", ["src/homsense/_kernels.pyx"],
                   include_dirs=[numpy.get_include()],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"homsense: compiled kernels unavailable, using the "
                  f"numpy fallback ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"homsense: failed to build {ext.name}, using the "
                  f"numpy fallback ({exc})", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
