import sys

from perfgrove.cli import main

sys.exit(main())
