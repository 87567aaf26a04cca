import sys

from deltapol.cli import main

sys.exit(main())
