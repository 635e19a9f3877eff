# The compiled eigensolver kernel is optional: if Cython (or a C compiler)
# is unavailable the package falls back to the numpy backend at import time.
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "treespectra._speig",
                ["src/treespectra/_speig.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
