from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ocrpost._speedups",
                ["src/ocrpost/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Without Cython the package still installs; the pure-Python kernels
    # are selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
