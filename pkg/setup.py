from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="ccball",
    version="0.1.0",
    description="Boules de Carnot-Carathéodory sur les hypersurfaces modèles Im z2 = P(z1)",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["examples", "examples.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "rich>=12.0.0",
        "numpy>=1.22",
        "scipy>=1.8",
        "shapely>=2.0",
        "networkx>=2.8",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        'console_scripts': [
            'ccball=ccball.cli:main',
        ],
    },
    include_package_data=True,
    package_data={
        'ccball': [
            'potentials/*/config.json',
        ],
    },
    zip_safe=False,
)
