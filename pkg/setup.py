from setuptools import find_packages, setup

setup(
    name='netsync',
    version='0.1.0',
    description='Kron reduction, small-gain synchronization certificates and simulation '
                'of nonlinear circuits coupled through passive networks',
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    install_requires=['numpy', 'scipy', 'networkx'],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['netsync=netsync.cli:main']},
)
