import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the kernel extension, but never fail the install over it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, Cython missing, ...
            self.warn(f"compiled kernels skipped, pure-Python fallback in use: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self.warn(f"building {ext.name} failed, pure-Python fallback in use: {exc}")


def extensions():
    if os.environ.get("LOCSCALE_W1_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
        import numpy as np
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "locscale_w1.specfun._kernels",
        ["src/locscale_w1/specfun/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O2", "-fno-fast-math"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
