import sys

from psat.cli import main

sys.exit(main())
