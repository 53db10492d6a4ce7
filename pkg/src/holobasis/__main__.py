import sys

from holobasis.cli import main

sys.exit(main())
