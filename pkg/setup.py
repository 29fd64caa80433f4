import re

from setuptools import find_packages, setup

with open("django_ogs_deblur/__init__.py", "rb") as f:
    version = str(
        eval(re.search(r"__version__\s+=\s+(.*)", f.read().decode("utf-8")).group(1))
    )


setup(
    name="django-ogs-deblur",
    version=version,
    description=(
        "Deblurring of salt-and-pepper corrupted images with overlapping group "
        "sparse total variation and an Lp fidelity term, as a Django app."
    ),
    long_description=open("README.rst", "r", encoding="utf-8").read(),
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "django>=3.2,<5.0",
        "numpy>=1.20",
    ],
    extras_require={
        "test": ["pytest>=7.0", "pytest-django>=4.5", "scipy>=1.7"],
    },
    entry_points={
        "console_scripts": ["ogs-deblur=django_ogs_deblur.cli:main"],
    },
    python_requires=">=3.8",
    zip_safe=False,
    classifiers=[
        "Development Status :: 4 - Beta",
        "Framework :: Django",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3 :: Only",
        "Topic :: Scientific/Engineering :: Image Processing",
    ],
)
