import sys
from setuptools import setup

__title__       = 'Flask-GridTree'
__description__ = 'Energy-efficient grid-based hierarchical clustering index trees for sensor fields.'
__version__     = '1.0.0'
__url__         = 'https://github.com/gridtree/Flask-GridTree'
__author__      = 'GridTree developers'
__author_email__= 'gridtree-dev@example.com'
__maintainer__  = 'GridTree developers'
__license__     = 'MIT'
__copyright__   = '(c) 2024 GridTree developers'


# Load pytest and pytest-runner only when needed:
needs_pytest = {'pytest', 'test', 'ptr'}.intersection(sys.argv)
pytest_runner = ['pytest-runner'] if needs_pytest else []


# Read long description from README.rst file
def load_readme():
    with open('README.rst') as f:
        return f.read()


setup(
    name=__title__,
    version=__version__,
    description=__description__,
    long_description=load_readme(),
    keywords='Flask Sensor Network Clustering Index Tree Grid K-means Deduplication Energy Simulation',
    url=__url__,
    author=__author__,
    author_email=__author_email__,
    license=__license__,

    platforms='any',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Framework :: Flask',
        'Intended Audience :: Developers',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering',
        'Topic :: System :: Networking',
        'Topic :: Software Development :: Libraries :: Python Modules',
    ],

    packages=['flask_gridtree'],
    include_package_data=True,    # Tells setup to use MANIFEST.in
    package_data={'flask_gridtree': ['presets/*.cfg', 'presets/*.csv']},
    zip_safe=False,    # Do not zip as it will make debugging harder

    python_requires='>=3.8',
    setup_requires=pytest_runner,
    install_requires=[
        'Flask>=2.0',
        'networkx>=2.5',
        'numpy>=1.20',
    ],
    tests_require=['pytest'],
    entry_points={
        'console_scripts': [
            'gridtree=flask_gridtree.cli:main',
        ],
    },
)
