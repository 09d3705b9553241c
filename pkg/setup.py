"""Build glue for the optional compiled kernel extension.

The package works without the extension (pure-Python fallback); building
it just makes the hot loops faster. `pip install -e . --no-build-isolation`
compiles it when Cython and a C toolchain are present.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "peelsim.kernels._speed",
                sources=["src/peelsim/kernels/_speed.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
