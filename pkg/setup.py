"""Builds the optional compiled LZW loops; everything else is in pyproject.toml."""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:  # pure-Python install, parc.codecs.lzw falls back
    ext_modules = []
else:
    ext_modules = cythonize(
        "src/parc/codecs/_lzw_kernels.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())

setup(ext_modules=ext_modules)
