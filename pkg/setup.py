from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off: the interval kernels rely on error-free float transforms
# (TwoSum / Dekker product) whose results change if the compiler contracts
# a*b+c into an fma.  Must match the pure-numpy fallback bit for bit.
extensions = [
    Extension(
        "logcoef._core",
        ["src/logcoef/_core.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
