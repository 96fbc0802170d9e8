"""
Setup script for conical-ab.

Numerics of the spin-1/2 Aharonov-Bohm problem in conical space: special
functions, self-adjoint extensions, scattering data, bound states and the
numerical oracles that cross-check them.
"""
from setuptools import setup
from pathlib import Path

# Read the README file
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text()

# Read requirements
requirements = []
with open('requirements.txt', 'r') as f:
    for line in f:
        line = line.strip()
        # Skip comments and empty lines
        if line and not line.startswith('#'):
            requirements.append(line)

dev_requirements = []
if Path('requirements-dev.txt').exists():
    with open('requirements-dev.txt', 'r') as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith('#'):
                dev_requirements.append(line)

setup(
    name="conical-ab",
    version="0.1.0",
    description="Self-adjoint extensions, scattering and bound states of the spin-1/2 "
                "Aharonov-Bohm problem on a cone",
    long_description=long_description,
    long_description_content_type="text/markdown",
    py_modules=[
        '__version__',
        'main',
        'config',
        'error_handling',
        'input_validation',
        'console_theme',
        'grid_executor',
        'output_writers',
        'verification',
        'specfun',
        'model',
        'bg',
        'ks',
        'oracle',
    ],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={
        "dev": dev_requirements,
    },
    entry_points={
        "console_scripts": [
            "conical-ab=main:main",
        ],
    },
    include_package_data=True,
    keywords="aharonov-bohm cosmic-string self-adjoint-extension scattering bessel",
    zip_safe=False,
)
