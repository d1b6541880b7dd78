"""Build hook for the optional compiled kernel.

If Cython or a C compiler is missing the package still installs and
falls back to the pure-Python kernel at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("ODEKIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("odekit._kernel", ["src/odekit/_kernel.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"odekit: building without the compiled kernel ({exc})")
        ext_modules = []

setup(ext_modules=ext_modules)
