import sys

from netsync.cli import main

sys.exit(main())
