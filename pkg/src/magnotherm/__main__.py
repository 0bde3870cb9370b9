import sys

from magnotherm.cli import main

sys.exit(main())
