from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cmqsearch._kernels", ["src/cmqsearch/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python fallback in cmqsearch/_kernels_py.py is used at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
