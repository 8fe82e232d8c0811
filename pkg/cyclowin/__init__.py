"""Top-level package for cyclowin: exact frames, windows and Γ-actions over cyclotomic rings."""

__author__ = """Dan Ashton"""
__email__ = "dashton956@gmail.com"
__version__ = "0.1.0"


# Precision and run defaults; command line flags override them one by one.
default_settings = {
    "p": 3,
    "N": 6,
    "M": 64,
    "r": 1,
    "lift": "cyclotomic",
    "seed": 7,
    "cases": 100,
}
