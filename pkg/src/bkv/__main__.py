import sys

from bkv.cli import main

sys.exit(main())
