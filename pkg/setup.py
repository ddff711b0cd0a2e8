from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; koszul.ffield falls back automatically
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("koszul._ffkernel", ["src/koszul/_ffkernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
