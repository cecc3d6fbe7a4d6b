import sys

from infoseg.cli import main

sys.exit(main())
