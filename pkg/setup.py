#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup
setup(name='minlab',
    version='0.1',
    description='Symbolic dp-minimality and VC-minimality classifier for abelian groups, with convex orderability checks',
    install_requires=['Jinja2>=2.7.0', 'sympy>=1.5', 'numpy>=1.17'],
    tests_require=['hypothesis>=4.0'],
    extras_require={'test': ['hypothesis>=4.0']},
    packages=['minlab', 'minlab.tests'],
    package_dir={'': 'src'},
    python_requires='>=3.10',
    license = "Boost",
    entry_points = {
        'console_scripts': [
            'minlab = minlab.__main__:_main',
            ],
        },
    test_suite = "minlab.tests",
    classifiers=[
        # Supported python versions
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',

        # License
        'License :: OSI Approved :: Boost Software License 1.0 (BSL-1.0)',

        # Topics
        'Topic :: Scientific/Engineering :: Mathematics',
    ]
    )
