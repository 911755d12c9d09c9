#!/usr/bin/env python3
"""
Entry point for running the cows-adapt command line from a source checkout
"""

import os
import sys

# Add the src/python directory for the main modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from cows_adapt.cli import main  # noqa: E402

if __name__ == '__main__':
    main()
