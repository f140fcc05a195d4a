from setuptools import find_packages, setup

setup(
    name="lightqrng",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"lightqrng.schemas": ["*.json"]},
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "matplotlib",
        "pydantic>=2",
        "pydantic-settings",
        "python-dotenv",
        "loguru",
    ],
    extras_require={
        "dev": ["pytest", "hypothesis", "black", "isort"],
    },
    entry_points={
        "console_scripts": [
            "qrng=lightqrng.interfaces.cli.main:main",
        ],
    },
    author="LightQRNG Team",
    author_email="info@lightqrng.org",
    description="Vacuum-fluctuation quantum random number post-processing: simulation, entropy certification, Toeplitz extraction and statistical testing",
    keywords="qrng, quantum, randomness extraction, toeplitz, min-entropy",
    url="https://github.com/lightqrng/lightqrng",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.11",
)
