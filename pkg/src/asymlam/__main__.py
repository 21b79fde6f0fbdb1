import sys

from asymlam.cli import main

sys.exit(main())
