import sys

from sgr.cli import main

sys.exit(main())
