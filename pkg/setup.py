#!/usr/bin/env python

try:
    from setuptools import setup
except ImportError:
    from distutils import setup

import qcaed

version = float(qcaed.qcaed_version)/10

setup(
        name='qcaed',
        version=str(version),
        description="Automorphism ensemble decoding of quasi-cyclic LDPC codes",
        author="Winterbird",
        platforms=['any'],
        license="GPLv3",
        packages=['qcaed'],
        package_data={
            'qcaed': ['codes/*.txt']
            },
        install_requires=[
            'numpy>=1.22',
            'scipy',
            'sqlalchemy>=1.4',
            ],
        extras_require={
            'test': ['pytest'],
            },
        entry_points={
            'console_scripts': ['qcaed=qcaed.cli:main'],
            })
