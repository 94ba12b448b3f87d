"""Build hook for the optional compiled kernel.

The Cython extension is built when Cython and numpy are importable at
build time.  Without them the package installs as pure Python and the
fallback kernel is used.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "herglotz_lab._kernels",
                ["src/herglotz_lab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives=dict(
            language_level=3, boundscheck=False, wraparound=False, cdivision=True
        ),
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
