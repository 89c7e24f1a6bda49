"""
Entry point for running perturbed-interp as a module.

Usage: python -m perturbed_interp verify-all --only modular
"""

from .cli import main

if __name__ == "__main__":
    main()
