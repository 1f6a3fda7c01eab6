import sys

from gaugecool.cli import main

sys.exit(main())
