from setuptools import setup, find_packages

setup(
    name='MeshFlow',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    install_requires=[
        'setuptools',
        'numpy',
        'scipy'
    ],
    extras_require={
        'docs': ['pdoc3', 'markdown-it-py'],
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': [
            'meshflow=MeshFlow.cli.main:main',
        ],
    },
    description='Deform template meshes toward point cloud or mesh targets with learned or optimized vertex offsets.',
    long_description=open('README.md', encoding='utf-8').read(),
    long_description_content_type='text/markdown',
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.11.3',
    include_package_data=True,
)
