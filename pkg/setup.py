"""Build script for the optional compiled Monte Carlo kernel.

The extension accelerates the trial loop; the package falls back to the
pure-numpy engine when it is absent, so a failed extension build must not
fail the install (optional=True).
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "gaussmeter._trials",
                ["src/gaussmeter/_trials.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
