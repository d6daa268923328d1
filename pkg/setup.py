from setuptools import setup, Extension

# The Lehmer quotient kernel is optionally compiled with Cython.  If Cython
# (or a C compiler) is unavailable the package falls back to the pure-Python
# kernel in cflab._euclid_py, selected at import time.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cflab._euclid", ["src/cflab/_euclid.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
