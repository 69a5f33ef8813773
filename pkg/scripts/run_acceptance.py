#!/usr/bin/env python3
"""Run the acceptance criteria and print one PASS/FAIL line per criterion."""

import sys

from ppmod.acceptance import main

if __name__ == "__main__":
    sys.exit(main())
