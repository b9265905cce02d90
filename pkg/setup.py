import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled kernel; covgame falls back to numpy
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("covgame._kernels", ["src/covgame/_kernels.pyx"], include_dirs=[np.get_include()],
                   extra_compile_args=["-O3", "-fno-math-errno"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
