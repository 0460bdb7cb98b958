from setuptools import find_packages, setup

install_requires = []

with open('requirements.txt', 'r') as requirements:
    install_requires = [line.strip() for line in requirements if line.strip() and not line.startswith('#')]

setup(
    name='stablecoin-redemption-controller',
    version='1.0.0',
    packages=find_packages(exclude=['test', 'examples', 'examples.*']),
    include_package_data=True,
    zip_safe=False,
    install_requires=install_requires,
    entry_points={'console_scripts': ['stablecoin-controller = stablecoin_redemption_controller.cli:main']}
)
