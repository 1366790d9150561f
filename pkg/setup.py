"""Build script: compiles the optional series kernel.

The package is fully functional without the extension; reszeta.kernel falls
back to the pure-Python implementation when the compiled module is missing.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/reszeta/_kernel_c.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"reszeta: building without compiled kernel ({exc})")

setup(ext_modules=ext_modules)
