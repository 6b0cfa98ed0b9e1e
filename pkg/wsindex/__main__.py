import sys

from wsindex.cli.commands import main

sys.exit(main())
