from setuptools import setup, find_packages

with open("README.rst", "r") as fh:
    long_description = fh.read()

setup(
    name='newton-ensemble',
    version='0.1',
    packages=find_packages(exclude=['tests', 'tests.*']),
    python_requires='>=3.8',

    install_requires=[
        'prompt_toolkit',
        'numpy>=1.20',
        'scipy>=1.11',
        'sympy',
    ],
    entry_points={
        'console_scripts': [
            'newton-ensemble=newton_ensemble.cli:main',
        ],
    },
    test_suite='tests.main.suite',

    description='Conditional Szegő kernels and zero statistics of random polynomials with a given Newton polytope',
    long_description=long_description,
    long_description_content_type="text/x-rst",
)
