import json
from setuptools import setup, find_namespace_packages

with open('ssrsim/pkg_info.json') as fp:
    _pkg_info = json.load(fp)

with open("DESCRIPTION.md", "r") as description_file:
    long_description = description_file.read()

setup(
    name='ssr-simulator',
    version=_pkg_info['version'],
    description='Simulations of semi-supervised adversarially robust linear classification with out-of-domain unlabeled data',
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_namespace_packages(include=['ssrsim*']),
    include_package_data=True,
    package_data={
        'ssrsim': ['pkg_info.json', 'config/*.yml', 'config/experiments/*.json']
    },
    python_requires='>=3.8',
    install_requires=[
        'ignition-framework=={0}'.format(_pkg_info['ignition-version']),
        'numpy>=1.21,<2',
        'scipy>=1.7',
        'matplotlib>=3.5',
        'PyYAML>=5.4',
        'testfixtures==6.17.1'
    ],
    entry_points='''
        [console_scripts]
        ssr=ssrsim.__main__:main
    '''
)
