import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "confcap.capsolve._kernels",
        ["src/confcap/capsolve/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3", "-fno-fast-math", "-ffp-contract=off"],
        # without a compiler the package still installs and uses the numpy kernels
        optional=True,
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
