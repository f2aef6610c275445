#!/usr/bin/env python3
import signal
import sys

from qvista.cli import main

if __name__ == "__main__":
    signal.signal(signal.SIGINT, signal.SIG_DFL)
    sys.exit(main())
