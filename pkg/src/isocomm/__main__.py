import sys

from isocomm.cli import main

sys.exit(main())
