from setuptools import setup


setup(
    name='schottkylab',
    version='0.1.0',
    description='Computational laboratory for Schottky groups',
    long_description=open('README.rst').read(),
    license='MIT',
    author='The schottkylab developers',
    packages=['schottkylab'],
    install_requires=[
        'tornado>=6.0',
        'numpy>=1.22',
        'scipy>=1.8',
        'matplotlib>=3.5',
        ],
    tests_require=['pynose'],
    entry_points={
        'console_scripts': ['schottkylab = schottkylab.cli:main'],
        },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        ]
)
