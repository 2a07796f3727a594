from setuptools import Extension, setup

# The mod-p matrix kernels have a compiled core; the package falls back to
# the pure-Python implementation at import time if the extension is absent.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "diagalg._modp",
                ["src/diagalg/_modp.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
