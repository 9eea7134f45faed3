from setuptools import setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        ["src/cohabitat/kernels/_core.pyx"],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
