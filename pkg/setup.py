import setuptools


with open("README.md") as f:
    readmefile_contents = f.read()

setuptools.setup(
    name="sandwich",
    version="0.1.0",
    author="The sandwich Authors",
    description="Sandwiching convex bodies between simpler ones: ellipsoids, "
                "nets, lifts, polynomial norms and SDP relaxations",
    long_description=readmefile_contents,
    long_description_content_type="text/markdown",
    packages=["sandwich"],
    install_requires=[
        "numpy>=1.17",
        "scipy>=1.4",
    ],
    entry_points={
        "console_scripts": ["sandwich=sandwich.cli:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
)
