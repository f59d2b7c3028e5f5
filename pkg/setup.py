"""Build hook: compile the sweep kernel extension when Cython is around.

The package is fully functional without it — polaris.backend falls back to
the numpy kernels — so any build failure here degrades to a pure install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "polaris._speedups",
                ["src/polaris/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    print(f"building without the compiled kernel ({exc})")

setup(ext_modules=ext_modules)
