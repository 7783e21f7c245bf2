import sys

from quartic_curvature.cli import main

sys.exit(main())
