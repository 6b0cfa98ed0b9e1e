import setuptools

setuptools.setup(
    name = "wsindex",
    version = "0.1.0",
    description = "Index weighted sequences for pattern matching with probability thresholds.",
    packages = setuptools.find_packages(),
    license="LICENSE",
    install_requires = [
        "matplotlib>=3.5.1",
        "numpy>=1.22.3",
    ],
    extras_require = {
        "dev": ["pytest>=7.1", "hypothesis>=6.46"],
    },
    entry_points = {
        "console_scripts": ["wsindex=wsindex.cli.commands:main"],
    },
    python_requires = ">=3.8",
)
