from setuptools import setup, find_packages

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        ["gaugecool/_speedups.py"],
        compiler_directives={"language_level": "3"},
    )

setup(
    name="gaugecool",
    version="0.1.0",
    description="Complex Langevin with gauge cooling for Polyakov chains",
    packages=find_packages(exclude=["test*"]),
    python_requires=">=3.8",
    install_requires=["numpy>=1.21", "scipy>=1.9"],
    ext_modules=ext_modules,
    entry_points={
        "console_scripts": ["gaugecool=gaugecool.cli:main"],
    },
)
