"""Build script for the optional compiled insertion kernel.

The package works without the extension (a pure-python builder is selected at
import time); building it is strongly recommended for large inputs.

Float semantics must match the pure-python builder bit for bit, so the
extension is compiled with strict IEEE settings: no -ffast-math and fp
contraction disabled (an FMA would round differently than a*b followed by +c).
"""

import sys

from setuptools import Extension, setup


def make_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"sweephull: skipping compiled kernel ({exc})", file=sys.stderr)
        return []

    extra_args = []
    if sys.platform != "win32":
        extra_args = ["-O3", "-ffp-contract=off", "-fno-fast-math"]

    extensions = [
        Extension(
            "sweephull._kernel",
            sources=["src/sweephull/_kernel.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=extra_args,
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
    ]
    return cythonize(extensions, language_level="3")


setup(ext_modules=make_extensions())
