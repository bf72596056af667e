from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "idealis._kernel.speedups",
                ["src/idealis/_kernel/speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python install still works; the fallback kernel is selected at import.
    extensions = []

setup(ext_modules=extensions)
