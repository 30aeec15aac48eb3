#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Entry point."""

import sys


def run_main(argv=None):
    return 0


if __name__ == "__main__":
    sys.exit(run_main(sys.argv))
