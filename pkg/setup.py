import numpy as np
from setuptools import Extension, setup

# The compiled Jacobi kernel is optional: the package falls back to the
# pure-Python implementation in freecomp._kernels.pyjacobi when the
# extension is unavailable.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "freecomp._kernels._jacobi",
                ["src/freecomp/_kernels/_jacobi.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
